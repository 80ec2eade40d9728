#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "saegt/episode.hpp"

using namespace saegt;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.terrain_path = "unused";
    c.seed = 7;
    c.beta = 3.0;
    c.lipschitz = 50.0;
    c.safety_threshold = 1000.0;
    c.start_center = {3.0, 3.0};
    c.start_radius = 1.6;
    c.gp.signal_variance = 90000.0;
    c.gp.length_scale = 2.0;
    c.gp.noise_variance = 25.0;
    c.gp.prior_mean = 1000.0;
    c.max_iterations = 200;
    return c;
}

TerrainGrid flat_terrain(int w, int h, double value) {
    return generate_uniform(Grid{w, h, 1.0, {0, 0}}, value);
}

std::string slurp(const std::string& path) {
    std::ifstream in{path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Records per-iteration region state for invariant checks.
struct InvariantObserver : EpisodeObserver {
    std::vector<CellMask> safe_history;
    std::vector<ConfidenceField> conf_history;
    std::vector<CellMask> frontier_history;
    int containment_failures = 0;

    void on_iteration(int, const ConfidenceField& conf, const CellMask& safe,
                      const CellMask& frontier, const FreeSpaceModel&,
                      const SubgoalDecision&, const RobotState&,
                      EpisodeStatus) override {
        safe_history.push_back(safe);
        conf_history.push_back(conf);
        frontier_history.push_back(frontier);
    }
    void on_tick(const TrajectoryPoint&, const RobotState& robot,
                 const LocalFreeSpace&, const FreeSpaceModel& model) override {
        if (!model.contains(robot.position, 1e-9)) ++containment_failures;
    }
};

}  // namespace

TEST_CASE("bootstrap samples the start disk and seeds the confidence field") {
    const RunConfig config = small_config();
    const TerrainGrid terrain = flat_terrain(12, 12, 1400.0);
    Rng rng{config.seed};
    const BootstrapResult boot = bootstrap(config, terrain, rng);

    CHECK(boot.gp.measurements().size() == static_cast<std::size_t>(config.bootstrap_samples));
    for (const Vec2& p : boot.gp.measurements().positions) {
        CHECK(distance(p, config.start_center) <= config.start_radius);
    }

    const CellMask want_s0 = disk_cells(terrain.grid, config.start_center,
                                        config.start_radius);
    CHECK(boot.s0.indices() == want_s0.indices());
    CHECK_FALSE(boot.s0.empty());

    // cross-module equality with the regions initializer
    const ConfidenceField want_conf =
        init_confidence(terrain.grid, want_s0, config.safety_threshold);
    CHECK(boot.confidence.lower == want_conf.lower);
    CHECK(boot.confidence.upper == want_conf.upper);
}

TEST_CASE("bootstrap rejects a start disk that leaves the terrain") {
    RunConfig config = small_config();
    config.start_center = {0.0, 0.0};
    config.start_radius = 3.0;
    const TerrainGrid terrain = flat_terrain(12, 12, 1400.0);
    Rng rng{1};
    CHECK_THROWS_AS(bootstrap(config, terrain, rng), ConfigError);
}

TEST_CASE("a goal on open ground is reached with clean metrics") {
    RunConfig config = small_config();
    config.goal = Vec2{9.0, 9.0};
    const TerrainGrid terrain = flat_terrain(12, 12, 1400.0);

    InvariantObserver obs;
    const EpisodeResult result = run_episode(config, terrain, &obs);

    CHECK(result.status == EpisodeStatus::GoalReached);
    CHECK(result.iterations < 50);
    CHECK(result.safety_violations == 0);
    CHECK(result.empty_intersections == 0);
    CHECK(obs.containment_failures == 0);
    REQUIRE(result.metrics.size() == static_cast<std::size_t>(result.iterations));
    CHECK(result.metrics.back().status == "goal-reached");
    CHECK(distance(result.trajectory.back().position, *config.goal) <= 1.0);
    CHECK(result.trajectory.front().tick == 0);

    // trajectory ticks are strictly increasing
    for (std::size_t i = 1; i < result.trajectory.size(); ++i) {
        CHECK(result.trajectory[i].tick == result.trajectory[i - 1].tick + 1);
    }
}

TEST_CASE("safe sets grow monotonically and intervals nest") {
    RunConfig config = small_config();
    config.max_iterations = 40;
    const TerrainGrid terrain = flat_terrain(14, 14, 1300.0);

    InvariantObserver obs;
    run_episode(config, terrain, &obs);
    REQUIRE(obs.safe_history.size() >= 2);

    for (std::size_t t = 1; t < obs.safe_history.size(); ++t) {
        CHECK(obs.safe_history[t - 1].is_subset_of(obs.safe_history[t]));
        const auto& prev = obs.conf_history[t - 1];
        const auto& cur = obs.conf_history[t];
        for (std::size_t i = 0; i < cur.size(); ++i) {
            CHECK(cur.lower[i] >= prev.lower[i]);
            CHECK(cur.upper[i] <= prev.upper[i]);
        }
    }
    for (std::size_t t = 0; t < obs.frontier_history.size(); ++t) {
        CHECK(obs.frontier_history[t].is_subset_of(obs.safe_history[t]));
    }
}

TEST_CASE("goal-free exploration covers a small open terrain") {
    RunConfig config = small_config();
    const TerrainGrid terrain = flat_terrain(10, 10, 1350.0);

    const EpisodeResult result = run_episode(config, terrain, nullptr);
    CHECK(result.status == EpisodeStatus::FrontierExhausted);
    CHECK(result.safe_fraction == 1.0);
    CHECK(result.metrics.back().status == "frontier-exhausted");
}

TEST_CASE("identical configs give byte-identical CSV outputs") {
    RunConfig config = small_config();
    config.goal = Vec2{8.0, 2.0};
    const TerrainGrid terrain = flat_terrain(12, 12, 1400.0);

    const EpisodeResult a = run_episode(config, terrain, nullptr);
    const EpisodeResult b = run_episode(config, terrain, nullptr);

    const auto dir = std::filesystem::temp_directory_path() / "saegt_episode_tests";
    std::filesystem::create_directories(dir);
    write_metrics_csv((dir / "a.csv").string(), a.metrics);
    write_metrics_csv((dir / "b.csv").string(), b.metrics);
    write_trajectory_csv((dir / "ta.csv").string(), a.trajectory);
    write_trajectory_csv((dir / "tb.csv").string(), b.trajectory);
    write_decisions_csv((dir / "da.csv").string(), a.decisions);
    write_decisions_csv((dir / "db.csv").string(), b.decisions);

    CHECK(slurp((dir / "a.csv").string()) == slurp((dir / "b.csv").string()));
    CHECK(slurp((dir / "ta.csv").string()) == slurp((dir / "tb.csv").string()));
    CHECK(slurp((dir / "da.csv").string()) == slurp((dir / "db.csv").string()));

    const std::string metrics = slurp((dir / "a.csv").string());
    CHECK(metrics.rfind("t,robot_x,robot_y,subgoal_x,subgoal_y,y,safe_cells,"
                        "frontier_cells,mean_width,status\n", 0) == 0);
}

TEST_CASE("a different seed changes the trajectory") {
    RunConfig config = small_config();
    config.goal = Vec2{8.0, 8.0};
    config.noise_sd = 5.0;
    const TerrainGrid terrain = flat_terrain(12, 12, 1400.0);

    const EpisodeResult a = run_episode(config, terrain, nullptr);
    config.seed = 8;
    const EpisodeResult b = run_episode(config, terrain, nullptr);

    bool differs = a.metrics.size() != b.metrics.size();
    for (std::size_t i = 0; !differs && i < a.metrics.size(); ++i) {
        differs = a.metrics[i].y != b.metrics[i].y;
    }
    CHECK(differs);
}

TEST_CASE("an unsafe start is counted and contradicted but never expands") {
    RunConfig config = small_config();
    config.max_iterations = 25;
    const TerrainGrid terrain = flat_terrain(12, 12, 900.0);  // everything unsafe

    // Empty intersections pin the start cells at their assumed bounds, so
    // the optimistic frontier never dies and the iteration cap ends it.
    const EpisodeResult result = run_episode(config, terrain, nullptr);
    CHECK(result.status == EpisodeStatus::MaxIterations);
    CHECK(result.safety_violations >= 1);      // at least the start position
    CHECK(result.empty_intersections >= 1);    // measurements contradict the prior
    CHECK(result.safe_fraction < 0.5);

    // the safe set stayed exactly the bootstrap disk
    const CellMask s0 = disk_cells(terrain.grid, config.start_center,
                                   config.start_radius);
    CHECK(result.metrics.back().safe_cells == s0.count());
}
