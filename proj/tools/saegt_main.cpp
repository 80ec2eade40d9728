#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "saegt/episode.hpp"
#include "saegt/render.hpp"
#include "saegt/snapshot.hpp"
#include "saegt/terrain.hpp"
#include "saegt/textio.hpp"
#include "saegt/verify.hpp"

namespace fs = std::filesystem;
using namespace saegt;

namespace {

// Stable exit codes, also listed in the README.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitFrontierExhausted = 2;
constexpr int kExitMaxIterations = 3;
constexpr int kExitUsage = 4;
constexpr int kExitRuntime = 5;

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SAEGT_OUT"); env && *env) return env;
    return "out";
}

int status_exit_code(EpisodeStatus status, bool explore_mode) {
    switch (status) {
        case EpisodeStatus::GoalReached:
            return kExitOk;
        case EpisodeStatus::FrontierExhausted:
            // A finished exploration is the success case in goal-free mode.
            return explore_mode ? kExitOk : kExitFrontierExhausted;
        case EpisodeStatus::MaxIterations:
            return kExitMaxIterations;
        case EpisodeStatus::Running:
            break;
    }
    return kExitRuntime;
}

void write_summary(const std::string& path, const RunConfig& config,
                   const EpisodeResult& result) {
    std::ofstream out(path);
    out << "status = " << to_string(result.status) << "\n"
        << "iterations = " << result.iterations << "\n"
        << "safe_fraction = " << result.safe_fraction << "\n"
        << "safety_violations = " << result.safety_violations << "\n"
        << "empty_intersections = " << result.empty_intersections << "\n"
        << "trajectory_points = " << result.trajectory.size() << "\n"
        << "seed = " << config.seed << "\n";
}

int run_one(const RunConfig& config, const std::string& out_dir, bool explore_mode,
            std::mutex* print_mutex) {
    fs::create_directories(out_dir + "/snapshots");
    const TerrainGrid terrain = load_terrain(config.terrain_path);

    SnapshotObserver snapshots(out_dir + "/snapshots", terrain.grid,
                               config.safety_threshold, config.goal,
                               config.snapshot_every);
    const EpisodeResult result = run_episode(config, terrain, &snapshots);

    write_metrics_csv(out_dir + "/metrics.csv", result.metrics);
    write_trajectory_csv(out_dir + "/trajectory.csv", result.trajectory);
    write_decisions_csv(out_dir + "/decisions.csv", result.decisions);
    write_summary(out_dir + "/summary.txt", config, result);

    {
        std::unique_lock<std::mutex> lock;
        if (print_mutex) lock = std::unique_lock<std::mutex>(*print_mutex);
        std::cout << "seed=" << config.seed << " status=" << to_string(result.status)
                  << " iterations=" << result.iterations
                  << " safe_fraction=" << result.safe_fraction
                  << " safety_violations=" << result.safety_violations << "\n";
    }
    return status_exit_code(result.status, explore_mode);
}

struct RunArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string seed_range;  // "A:B" inclusive
    int workers = 0;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
    cmd->add_option("config", args.config_path, "run configuration file")->required();
    cmd->add_option("--override,-O", args.overrides,
                    "key=value applied after the config loads");
    cmd->add_option("--out,-o", args.out_dir,
                    "output directory (default $SAEGT_OUT or ./out)");
    cmd->add_option("--seed", args.seed, "replace the config seed");
    cmd->add_option("--seeds", args.seed_range,
                    "inclusive seed range A:B, one episode per seed in "
                    "per-seed directories");
    cmd->add_option("--workers", args.workers,
                    "worker threads for --seeds (default: hardware)");
}

RunConfig load_run_config(const RunArgs& args, bool explore_mode) {
    RunConfig config = load_config(args.config_path);
    for (const std::string& ov : args.overrides) apply_override(config, ov);
    if (args.seed) config.seed = *args.seed;
    if (explore_mode) config.goal.reset();
    // a relative terrain path is relative to the config file
    const fs::path terrain{config.terrain_path};
    if (terrain.is_relative())
        config.terrain_path = (fs::path(args.config_path).parent_path() / terrain)
                                  .string();
    config.validate();
    return config;
}

int cmd_run(const RunArgs& args, bool explore_mode) {
    const RunConfig base = load_run_config(args, explore_mode);
    const std::string out_root = resolve_out_dir(args.out_dir);

    if (args.seed_range.empty()) return run_one(base, out_root, explore_mode, nullptr);

    const auto colon = args.seed_range.find(':');
    if (colon == std::string::npos)
        throw ConfigError("--seeds wants A:B, got '" + args.seed_range + "'");
    const auto lo = parse_int(args.seed_range.substr(0, colon));
    const auto hi = parse_int(args.seed_range.substr(colon + 1));
    if (!lo || !hi || *hi < *lo)
        throw ConfigError("--seeds wants A:B with B >= A, got '" + args.seed_range + "'");

    std::vector<std::uint64_t> seeds;
    for (long long s = *lo; s <= *hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));

    int workers = args.workers;
    if (workers <= 0)
        workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(seeds.size())));

    std::atomic<std::size_t> next{0};
    std::atomic<int> worst{kExitOk};
    std::mutex print_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            RunConfig config = base;
            config.seed = seeds[i];
            const std::string dir = out_root + "/seed_" + std::to_string(seeds[i]);
            int code = kExitRuntime;
            try {
                code = run_one(config, dir, explore_mode, &print_mutex);
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(print_mutex);
                std::cerr << "seed " << seeds[i] << " failed: " << e.what() << "\n";
            }
            int cur = worst.load();
            while (code > cur && !worst.compare_exchange_weak(cur, code)) {
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return worst.load();
}

struct GenArgs {
    std::string type;
    std::string out_path;
    int width = 60;
    int height = 60;
    double resolution = 1.0;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double value = 1500.0;
    double base = 1000.0;
    double gradient_x = 1.0;
    double gradient_y = 0.0;
    BandParams band;
    BlobParams blobs;
    std::uint64_t seed = 0;
};

int cmd_gen_terrain(const GenArgs& args) {
    Grid grid{args.width, args.height, args.resolution,
              {args.origin_x, args.origin_y}};
    TerrainGrid terrain;
    if (args.type == "uniform") {
        terrain = generate_uniform(grid, args.value);
    } else if (args.type == "ramp") {
        terrain = generate_ramp(grid, args.base, {args.gradient_x, args.gradient_y});
    } else if (args.type == "band") {
        terrain = generate_band(grid, args.band);
    } else if (args.type == "blob") {
        terrain = generate_blobs(grid, args.blobs, args.seed);
    } else {
        throw ConfigError("unknown terrain type '" + args.type +
                          "' (uniform, ramp, band, blob)");
    }
    save_terrain(terrain, args.out_path);
    std::cout << args.out_path << " " << grid.width << "x" << grid.height
              << " lipschitz_declared=" << terrain.lipschitz_bound.value_or(0.0)
              << " lipschitz_scan=" << lipschitz_scan(terrain) << "\n";
    return kExitOk;
}

int cmd_render(const std::string& snapshot_dir, const std::string& terrain_path,
               const std::string& out_flag) {
    const std::string out_dir =
        out_flag.empty() ? snapshot_dir : resolve_out_dir(out_flag);
    fs::create_directories(out_dir);

    std::optional<TerrainGrid> terrain;
    if (!terrain_path.empty()) terrain = load_terrain(terrain_path);

    std::vector<fs::path> geoms;
    for (const auto& entry : fs::directory_iterator(snapshot_dir)) {
        if (entry.path().extension() == ".geom") geoms.push_back(entry.path());
    }
    std::sort(geoms.begin(), geoms.end());
    if (geoms.empty()) {
        std::cerr << "no .geom snapshots in " << snapshot_dir << "\n";
        return kExitRuntime;
    }

    int rendered = 0;
    for (const fs::path& path : geoms) {
        try {
            const GeomSnapshot geom = load_snapshot_geom(path.string());
            const std::string base =
                (path.parent_path() / path.stem()).string();
            const TerrainGrid safe_layer = load_terrain(base + "_safe.grid");
            const TerrainGrid frontier_layer = load_terrain(base + "_frontier.grid");
            CellMask safe(safe_layer.grid.cell_count());
            CellMask frontier(frontier_layer.grid.cell_count());
            for (std::size_t i = 0; i < safe.size(); ++i) {
                if (safe_layer.values[i] != 0.0) safe.set(i);
                if (frontier_layer.values[i] != 0.0) frontier.set(i);
            }
            const Image img =
                render_snapshot(geom, safe_layer.grid, safe, frontier,
                                terrain ? &*terrain : nullptr);
            const std::string out_path =
                (fs::path(out_dir) / path.stem()).string() + ".ppm";
            write_ppm(img, out_path);
            char hash[32];
            std::snprintf(hash, sizeof(hash), "%016llx",
                          static_cast<unsigned long long>(image_hash(img)));
            std::cout << out_path << " " << hash << "\n";
            ++rendered;
        } catch (const std::exception& e) {
            std::cerr << "skipping " << path.string() << ": " << e.what() << "\n";
        }
    }
    return rendered > 0 ? kExitOk : kExitRuntime;
}

int cmd_verify(const std::string& candidate, const std::string& golden,
               double tolerance) {
    const VerifyResult result = verify_csv_files(candidate, golden, tolerance);
    for (const std::string& diff : result.diffs) std::cerr << diff << "\n";
    if (result.ok) {
        std::cout << "verify: ok\n";
        return kExitOk;
    }
    std::cout << "verify: failed\n";
    return kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAEGT terrain exploration simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand(
        "run", "run a goal-directed episode from a config file");
    add_run_options(run_cmd, run_args);

    RunArgs explore_args;
    CLI::App* explore_cmd =
        app.add_subcommand("explore", "run a goal-free exploration episode");
    add_run_options(explore_cmd, explore_args);

    GenArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("gen-terrain", "write a terrain file");
    gen_cmd->add_option("--type", gen_args.type, "uniform, ramp, band, or blob")
        ->required();
    gen_cmd->add_option("--out,-o", gen_args.out_path, "terrain file path")->required();
    gen_cmd->add_option("--width", gen_args.width, "cells east-west");
    gen_cmd->add_option("--height", gen_args.height, "cells north-south");
    gen_cmd->add_option("--resolution", gen_args.resolution, "meters per cell");
    gen_cmd->add_option("--origin-x", gen_args.origin_x, "cell (0,0) center x");
    gen_cmd->add_option("--origin-y", gen_args.origin_y, "cell (0,0) center y");
    gen_cmd->add_option("--value", gen_args.value, "uniform: cell value");
    gen_cmd->add_option("--base", gen_args.base, "ramp: value at the world origin");
    gen_cmd->add_option("--gradient-x", gen_args.gradient_x, "ramp: d(value)/dx");
    gen_cmd->add_option("--gradient-y", gen_args.gradient_y, "ramp: d(value)/dy");
    gen_cmd->add_option("--high", gen_args.band.high, "band/blob: background value");
    gen_cmd->add_option("--low", gen_args.band.low, "band/blob: obstacle value");
    gen_cmd->add_option("--band-y0", gen_args.band.band_y0, "band: south edge");
    gen_cmd->add_option("--band-y1", gen_args.band.band_y1, "band: north edge");
    gen_cmd->add_option("--gap-x0", gen_args.band.gap_x0, "band: gap west edge");
    gen_cmd->add_option("--gap-x1", gen_args.band.gap_x1, "band: gap east edge");
    gen_cmd->add_option("--smooth", gen_args.band.smooth_width,
                        "band/blob: ramp width from low to high");
    gen_cmd->add_option("--count", gen_args.blobs.count, "blob: number of blobs");
    gen_cmd->add_option("--radius-min", gen_args.blobs.radius_min, "blob: min radius");
    gen_cmd->add_option("--radius-max", gen_args.blobs.radius_max, "blob: max radius");
    gen_cmd->add_option("--seed", gen_args.seed, "blob: placement seed");

    std::string render_dir;
    std::string render_terrain;
    std::string render_out;
    CLI::App* render_cmd =
        app.add_subcommand("render", "rasterize snapshots to PPM images");
    render_cmd->add_option("snapshots", render_dir, "snapshot directory")->required();
    render_cmd->add_option("--terrain", render_terrain,
                           "terrain file for the ground-truth layer");
    render_cmd->add_option("--out,-o", render_out, "image directory");

    std::string verify_candidate;
    std::string verify_golden;
    double verify_tolerance = 1e-9;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "compare a metrics CSV against a golden file");
    verify_cmd->add_option("candidate", verify_candidate, "CSV under test")->required();
    verify_cmd->add_option("golden", verify_golden, "golden CSV")->required();
    verify_cmd->add_option("--tolerance", verify_tolerance,
                           "absolute tolerance for float columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(run_cmd)) return cmd_run(run_args, false);
        if (app.got_subcommand(explore_cmd)) return cmd_run(explore_args, true);
        if (app.got_subcommand(gen_cmd)) {
            // band and blob share the --high/--low/--smooth options
            gen_args.blobs.high = gen_args.band.high;
            gen_args.blobs.low = gen_args.band.low;
            gen_args.blobs.smooth_width = gen_args.band.smooth_width;
            return cmd_gen_terrain(gen_args);
        }
        if (app.got_subcommand(render_cmd))
            return cmd_render(render_dir, render_terrain, render_out);
        if (app.got_subcommand(verify_cmd))
            return cmd_verify(verify_candidate, verify_golden, verify_tolerance);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TerrainParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
