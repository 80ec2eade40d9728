#ifndef SAEGT_EPISODE_HPP_
#define SAEGT_EPISODE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "saegt/config.hpp"
#include "saegt/free_space.hpp"
#include "saegt/gp_map.hpp"
#include "saegt/grid.hpp"
#include "saegt/navigator.hpp"
#include "saegt/planner.hpp"
#include "saegt/regions.hpp"
#include "saegt/rng.hpp"
#include "saegt/terrain.hpp"

namespace saegt {

// RunConfig optionals resolved against the terrain resolution.
struct EpisodeParams {
    FreeSpaceParams geometry;
    NavParams nav;
    double max_step = 0.0;
    double noise_sd = 0.0;
    PlannerConfig planner;
    int snapshot_every = 10;
};
EpisodeParams resolve_params(const RunConfig& config, const Grid& grid);

struct BootstrapResult {
    TraversabilityGp gp;
    CellMask s0;
    ConfidenceField confidence;
};

// Samples bootstrap_samples positions uniformly in the start disk,
// measures each, seeds the GP, and initializes the confidence field over
// the start cells. Throws ConfigError when the disk leaves the terrain or
// covers no cell.
BootstrapResult bootstrap(const RunConfig& config, const TerrainGrid& terrain,
                          Rng& rng);

struct MetricsRow {
    int t = 0;
    Vec2 robot{};
    Vec2 subgoal{};
    double y = 0.0;  // measurement taken this iteration (NaN when none)
    std::uint64_t safe_cells = 0;
    std::uint64_t frontier_cells = 0;
    double mean_width = 0.0;  // over cells with both bounds finite
    std::string status;
};

struct TrajectoryPoint {
    int tick = 0;  // global tick counter across the episode
    Vec2 position{};
    int subgoal_id = 0;  // iteration that issued the active subgoal
};

struct DecisionRow {
    int t = 0;
    std::string reason;
    int candidate_count = 0;
    double width = 0.0;
    double goal_distance = 0.0;
    Vec2 target{};
};

struct EpisodeResult {
    EpisodeStatus status = EpisodeStatus::Running;
    int iterations = 0;
    std::vector<MetricsRow> metrics;
    std::vector<TrajectoryPoint> trajectory;
    std::vector<DecisionRow> decisions;
    std::uint64_t safety_violations = 0;  // trajectory points on f < h cells
    std::uint64_t empty_intersections = 0;
    double safe_fraction = 0.0;
};

// Per-iteration and per-tick observation points for tests, snapshots, and
// renders. Default implementations ignore everything.
class EpisodeObserver {
public:
    virtual ~EpisodeObserver() = default;
    virtual void on_iteration(int /*t*/, const ConfidenceField&, const CellMask& /*safe*/,
                              const CellMask& /*frontier*/, const FreeSpaceModel&,
                              const SubgoalDecision&, const RobotState&,
                              EpisodeStatus) {}
    virtual void on_tick(const TrajectoryPoint&, const RobotState&,
                         const LocalFreeSpace&, const FreeSpaceModel&) {}
};

// Algorithm: per iteration, refresh the posterior over the whole grid,
// intersect confidence intervals, expand the safe set, compute the
// frontier, pick a subgoal, drive to it, measure once on arrival, update
// the GP. Deterministic for a fixed config.
EpisodeResult run_episode(const RunConfig& config, const TerrainGrid& terrain,
                          EpisodeObserver* observer = nullptr);
EpisodeResult run_episode(const RunConfig& config, EpisodeObserver* observer = nullptr);

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryPoint>& points);
void write_decisions_csv(const std::string& path, const std::vector<DecisionRow>& rows);

}  // namespace saegt

#endif  // SAEGT_EPISODE_HPP_
