#include <doctest.h>

#include <filesystem>
#include <string>

#include "saegt/config.hpp"

using namespace saegt;

namespace {

const char* kFullConfig = R"(# example scenario
terrain = maps/band.terrain
seed = 42
max_iterations = 321
bootstrap_samples = 7

beta = 3
lipschitz = 100
safety_threshold = 1000
start.x = 6.5
start.y = -2.25
start.radius = 2.5
goal.x = 34
goal.y = 35.5
planner.top_n = 4

gp.signal_variance = 160000
gp.length_scale = 3
gp.noise_variance = 25
gp.jitter = 1e-8
gp.prior_mean = 1000
noise_sd = 4.5

geometry.cluster_radius = 1.5
geometry.edge_threshold = 1.75
geometry.workspace_margin = 2
geometry.snap_quantum = 1e-9
geometry.degenerate_buffer = 0.5

nav.sensing_radius = 5
nav.arrival_tolerance = 0.5
nav.max_step = 0.25
nav.stall_window = 60
nav.stall_progress_factor = 0.02
nav.max_leg_ticks = 5000
snapshots.every = 3
)";

std::string error_of(const std::string& text) {
    try {
        parse_config(text, "test.cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("a full config parses into every field") {
    const RunConfig c = parse_config(kFullConfig, "test.cfg");
    CHECK(c.terrain_path == "maps/band.terrain");
    CHECK(c.seed == 42);
    CHECK(c.max_iterations == 321);
    CHECK(c.bootstrap_samples == 7);
    CHECK(c.beta == 3.0);
    CHECK(c.lipschitz == 100.0);
    CHECK(c.safety_threshold == 1000.0);
    CHECK(c.start_center == Vec2{6.5, -2.25});
    CHECK(c.start_radius == 2.5);
    REQUIRE(c.goal.has_value());
    CHECK(*c.goal == Vec2{34.0, 35.5});
    CHECK(c.top_n == 4);
    CHECK(c.gp.signal_variance == 160000.0);
    CHECK(c.gp.length_scale == 3.0);
    CHECK(c.gp.noise_variance == 25.0);
    CHECK(c.gp.prior_mean == 1000.0);
    CHECK(c.noise_sd == 4.5);
    CHECK(c.edge_threshold == 1.75);
    CHECK(c.sensing_radius == 5.0);
    CHECK(c.max_step == 0.25);
    CHECK(c.stall_window == 60);
    CHECK(c.stall_progress_factor == 0.02);
    CHECK(c.max_leg_ticks == 5000);
    CHECK(c.snapshot_every == 3);
}

TEST_CASE("save and parse round-trip the whole config") {
    const RunConfig c = parse_config(kFullConfig, "test.cfg");
    const auto path =
        (std::filesystem::temp_directory_path() / "saegt_roundtrip.cfg").string();
    save_config(c, path);
    CHECK(load_config(path) == c);
}

TEST_CASE("a minimal config leaves the optional knobs unset") {
    const RunConfig c = parse_config(
        "terrain = t.terrain\nbeta = 3\nlipschitz = 10\nsafety_threshold = 1000\n"
        "start.x = 1\nstart.y = 2\nstart.radius = 1.5\n",
        "min.cfg");
    CHECK_FALSE(c.goal.has_value());
    CHECK_FALSE(c.noise_sd.has_value());
    CHECK_FALSE(c.edge_threshold.has_value());
    CHECK(c.max_iterations == 500);
    CHECK(c.top_n == 10);

    const auto path =
        (std::filesystem::temp_directory_path() / "saegt_minimal.cfg").string();
    save_config(c, path);
    CHECK(load_config(path) == c);
}

TEST_CASE("unknown keys are rejected with their location") {
    const std::string msg = error_of("terrain = x\nbogus_key = 3\n");
    CHECK(msg.find("bogus_key") != std::string::npos);
    CHECK(msg.find("test.cfg:2") != std::string::npos);
}

TEST_CASE("missing required keys are named") {
    const std::string msg =
        error_of("terrain = x\nbeta = 3\nlipschitz = 1\nsafety_threshold = 1\n"
                 "start.x = 0\nstart.y = 0\n");
    CHECK(msg.find("start.radius") != std::string::npos);
}

TEST_CASE("goal wants both coordinates") {
    const std::string msg =
        error_of("terrain = x\nbeta = 3\nlipschitz = 1\nsafety_threshold = 1\n"
                 "start.x = 0\nstart.y = 0\nstart.radius = 1\ngoal.x = 5\n");
    CHECK(msg.find("goal") != std::string::npos);
}

TEST_CASE("malformed values carry line numbers") {
    const std::string msg =
        error_of("terrain = x\nbeta = fast\n");
    CHECK(msg.find("beta") != std::string::npos);
    CHECK(msg.find(":2") != std::string::npos);
}

TEST_CASE("overrides reuse the config key table") {
    RunConfig c = parse_config(kFullConfig, "test.cfg");
    apply_override(c, "seed=99");
    apply_override(c, "gp.length_scale = 8");
    apply_override(c, "goal.x=12");
    CHECK(c.seed == 99);
    CHECK(c.gp.length_scale == 8.0);
    CHECK(c.goal->x == 12.0);
    CHECK_THROWS_AS(apply_override(c, "nope=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "seed"), ConfigError);
}

TEST_CASE("validation catches out-of-range numbers") {
    RunConfig c = parse_config(kFullConfig, "test.cfg");
    c.beta = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = parse_config(kFullConfig, "test.cfg");
    c.start_radius = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = parse_config(kFullConfig, "test.cfg");
    c.max_iterations = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
