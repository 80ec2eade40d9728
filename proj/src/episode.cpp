#include "saegt/episode.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

#include "saegt/textio.hpp"

namespace saegt {

EpisodeParams resolve_params(const RunConfig& config, const Grid& grid) {
    config.validate();
    grid.validate();
    const double delta = grid.resolution;

    EpisodeParams p;
    p.geometry = FreeSpaceParams::defaults_for(delta);
    if (config.cluster_radius) p.geometry.cluster_radius = *config.cluster_radius;
    if (config.edge_threshold) p.geometry.edge_threshold = *config.edge_threshold;
    if (config.workspace_margin) p.geometry.workspace_margin = *config.workspace_margin;
    if (config.snap_quantum) p.geometry.snap_quantum = *config.snap_quantum;
    if (config.degenerate_buffer) p.geometry.degenerate_buffer = *config.degenerate_buffer;

    p.nav.sensing_radius = config.sensing_radius.value_or(5.0 * delta);
    p.nav.arrival_tolerance = config.arrival_tolerance.value_or(0.5 * delta);
    p.nav.stall_window = config.stall_window;
    p.nav.stall_progress_factor = config.stall_progress_factor;
    p.nav.max_leg_ticks = config.max_leg_ticks;
    p.nav.validate();

    p.max_step = config.max_step.value_or(0.5 * delta);
    if (!(p.max_step > 0.0)) throw ConfigError("config: nav.max_step must be > 0");

    p.noise_sd = config.noise_sd.value_or(std::sqrt(config.gp.noise_variance));
    p.planner.goal = config.goal;
    p.planner.top_n = config.top_n;
    p.planner.validate();
    p.snapshot_every = config.snapshot_every;
    return p;
}

BootstrapResult bootstrap(const RunConfig& config, const TerrainGrid& terrain,
                          Rng& rng) {
    config.validate();
    terrain.validate();
    const Grid& grid = terrain.grid;
    const Vec2 c = config.start_center;
    const double r = config.start_radius;
    const Rect ext = grid.extent();
    if (!ext.contains({c.x - r, c.y - r}) || !ext.contains({c.x + r, c.y + r}))
        throw ConfigError("bootstrap: start disk leaves the terrain");

    CellMask s0 = disk_cells(grid, c, r);
    if (s0.empty()) throw ConfigError("bootstrap: start disk covers no cell");

    const double noise_sd =
        config.noise_sd.value_or(std::sqrt(config.gp.noise_variance));
    TraversabilityGp gp(config.gp);
    std::vector<Vec2> xs(static_cast<std::size_t>(config.bootstrap_samples));
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = rng.in_disk(c, r);
        ys[i] = measure(terrain, xs[i], noise_sd, rng);
    }
    gp.add_observations(xs, ys);

    ConfidenceField conf = init_confidence(grid, s0, config.safety_threshold);
    return {std::move(gp), std::move(s0), std::move(conf)};
}

namespace {

double mean_finite_width(const ConfidenceField& conf) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < conf.size(); ++i) {
        if (conf.lower[i] > kLowerUnbounded && conf.upper[i] < kUpperUnbounded) {
            sum += conf.width(i);
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace

EpisodeResult run_episode(const RunConfig& config, const TerrainGrid& terrain,
                          EpisodeObserver* observer) {
    const Grid& grid = terrain.grid;
    const EpisodeParams params = resolve_params(config, grid);

    Rng rng(config.seed);
    BootstrapResult boot = bootstrap(config, terrain, rng);
    TraversabilityGp gp = std::move(boot.gp);
    ConfidenceField confidence = std::move(boot.confidence);
    CellMask safe = std::move(boot.s0);

    std::vector<Vec2> queries(grid.cell_count());
    for (std::size_t i = 0; i < queries.size(); ++i) queries[i] = grid.cell_center(i);

    EpisodeResult result;
    RobotState robot{config.start_center, params.max_step};
    int tick = 0;
    result.trajectory.push_back({tick, robot.position, 0});

    const auto count_violation = [&](const Vec2& p) {
        const auto cell = grid.world_to_cell(p);
        if (!cell || terrain.value(*cell) < config.safety_threshold)
            ++result.safety_violations;
    };
    count_violation(robot.position);

    FreeSpaceModel model = build_free_space(safe, grid, params.geometry);
    std::size_t model_cells = safe.count();
    if (!model.contains(robot.position))
        throw ConfigError("episode: start position outside the initial free space");

    if (observer) {
        const auto potential = expansion_potential(safe, confidence,
                                                   config.lipschitz,
                                                   config.safety_threshold, grid);
        SubgoalDecision none;
        none.target = robot.position;
        observer->on_iteration(0, confidence, safe, frontier_cells(safe, potential),
                               model, none, robot, EpisodeStatus::Running);
    }

    constexpr std::uint32_t kNoCell = std::numeric_limits<std::uint32_t>::max();
    std::uint32_t blacklist = kNoCell;
    bool suppress_goal = false;

    for (int t = 1; t <= config.max_iterations; ++t) {
        const PosteriorField post = gp.posterior(queries);
        confidence = update_confidence(confidence, post, config.beta);

        const ExpandResult expansion = expand_safe(safe, confidence, config.lipschitz,
                                                   config.safety_threshold, grid);
        safe = expansion.safe;
        const auto potential = expansion_potential(
            safe, confidence, config.lipschitz, config.safety_threshold, grid);
        const CellMask frontier = frontier_cells(safe, potential);

        // The safe set only grows, so a size check detects change; the
        // new hulls occasionally exclude the robot's exact position (a
        // dig can shave the cell it stands on), in which case the still
        // valid previous model is kept.
        if (safe.count() != model_cells) {
            FreeSpaceModel next_model = build_free_space(safe, grid, params.geometry);
            if (next_model.contains(robot.position)) {
                model = std::move(next_model);
                model_cells = safe.count();
            }
        }

        CellMask selection_frontier = frontier;
        if (blacklist != kNoCell && selection_frontier.test(blacklist))
            selection_frontier.reset(blacklist);
        SubgoalDecision decision;
        if (params.planner.goal_directed()) {
            if (suppress_goal) {
                CellMask no_goal = safe;
                if (const auto cell = grid.world_to_cell(*params.planner.goal))
                    no_goal.reset(grid.index(*cell));
                decision = select_subgoal(selection_frontier, confidence,
                                          params.planner, no_goal, grid);
            } else {
                decision = select_subgoal(selection_frontier, confidence,
                                          params.planner, safe, grid);
            }
        } else {
            decision = select_explore_target(selection_frontier, confidence, grid);
        }
        blacklist = kNoCell;
        suppress_goal = false;

        double y = std::numeric_limits<double>::quiet_NaN();
        if (decision.reason == SubgoalReason::FrontierSelected ||
            decision.reason == SubgoalReason::GoalReachableDirectly) {
            const auto on_tick = [&](const RobotState& state,
                                     const LocalFreeSpace& lfs) {
                ++tick;
                result.trajectory.push_back({tick, state.position, t});
                count_violation(state.position);
                if (observer)
                    observer->on_tick(result.trajectory.back(), state, lfs, model);
            };
            const LegResult leg =
                navigate_to(robot, decision.target, model, params.nav, on_tick);
            if (leg.outcome == LegOutcome::Arrived) {
                y = measure(terrain, robot.position, params.noise_sd, rng);
                gp.add_observation(robot.position, y);
            } else {
                if (decision.reason == SubgoalReason::FrontierSelected)
                    blacklist = decision.cell;
                else
                    suppress_goal = true;
                decision.reason = SubgoalReason::Stalled;
            }
        }

        result.decisions.push_back({t, to_string(decision.reason),
                                    decision.candidate_count, decision.width,
                                    decision.goal_distance, decision.target});

        const EpisodeStatus status =
            check_termination(robot.position, params.planner, safe, frontier, t,
                              config.max_iterations, grid);

        MetricsRow row;
        row.t = t;
        row.robot = robot.position;
        row.subgoal = decision.reason == SubgoalReason::ExplorationComplete
                          ? robot.position
                          : decision.target;
        row.y = y;
        row.safe_cells = safe.count();
        row.frontier_cells = frontier.count();
        row.mean_width = mean_finite_width(confidence);
        row.status = to_string(status);
        result.metrics.push_back(std::move(row));

        if (observer)
            observer->on_iteration(t, confidence, safe, frontier, model, decision,
                                   robot, status);

        result.status = status;
        result.iterations = t;
        if (status != EpisodeStatus::Running) break;
    }

    if (result.status == EpisodeStatus::Running) result.status = EpisodeStatus::MaxIterations;
    result.empty_intersections = confidence.empty_intersections;
    result.safe_fraction =
        static_cast<double>(safe.count()) / static_cast<double>(grid.cell_count());
    return result;
}

EpisodeResult run_episode(const RunConfig& config, EpisodeObserver* observer) {
    const TerrainGrid terrain = load_terrain(config.terrain_path);
    return run_episode(config, terrain, observer);
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    return out;
}

}  // namespace

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
    auto out = open_csv(path);
    out << "t,robot_x,robot_y,subgoal_x,subgoal_y,y,safe_cells,frontier_cells,"
           "mean_width,status\n";
    for (const MetricsRow& r : rows) {
        out << r.t << "," << fmt_g17(r.robot.x) << "," << fmt_g17(r.robot.y) << ","
            << fmt_g17(r.subgoal.x) << "," << fmt_g17(r.subgoal.y) << ","
            << fmt_g17(r.y) << "," << r.safe_cells << "," << r.frontier_cells << ","
            << fmt_g17(r.mean_width) << "," << r.status << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryPoint>& points) {
    auto out = open_csv(path);
    out << "tick,x,y,subgoal_id\n";
    for (const TrajectoryPoint& p : points) {
        out << p.tick << "," << fmt_g17(p.position.x) << "," << fmt_g17(p.position.y)
            << "," << p.subgoal_id << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_decisions_csv(const std::string& path, const std::vector<DecisionRow>& rows) {
    auto out = open_csv(path);
    out << "t,reason,candidate_count,width,goal_distance,target_x,target_y\n";
    for (const DecisionRow& r : rows) {
        out << r.t << "," << r.reason << "," << r.candidate_count << ","
            << fmt_g17(r.width) << "," << fmt_g17(r.goal_distance) << ","
            << fmt_g17(r.target.x) << "," << fmt_g17(r.target.y) << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace saegt
