#ifndef SAEGT_PLANNER_HPP_
#define SAEGT_PLANNER_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "saegt/grid.hpp"
#include "saegt/regions.hpp"

namespace saegt {

struct PlannerConfig {
    std::optional<Vec2> goal;  // present iff goal-directed
    int top_n = 10;            // frontier candidates to consider

    bool goal_directed() const { return goal.has_value(); }
    void validate() const;
};

enum class SubgoalReason {
    FrontierSelected,
    GoalReachableDirectly,
    ExplorationComplete,
    Stalled,
};

std::string to_string(SubgoalReason reason);

struct SubgoalDecision {
    Vec2 target{};
    SubgoalReason reason = SubgoalReason::ExplorationComplete;
    int candidate_count = 0;
    std::uint32_t cell = 0;       // grid index of the target (when in-grid)
    double width = 0.0;           // confidence width at the chosen cell
    double goal_distance = std::numeric_limits<double>::quiet_NaN();
};

/// Goal-directed selection: the goal itself when its cell is already safe,
/// otherwise the widest-interval cell among the top_n frontier cells
/// nearest the goal. Ties (equal distance or equal width) break toward the
/// lower row-major cell index. An empty frontier with an unsafe goal cell
/// yields ExplorationComplete.
SubgoalDecision select_subgoal(const CellMask& frontier, const ConfidenceField& conf,
                               const PlannerConfig& cfg, const CellMask& safe,
                               const Grid& grid);

/// Goal-free selection: the frontier cell with the widest confidence
/// interval; ties break toward the lower row-major index.
SubgoalDecision select_explore_target(const CellMask& frontier,
                                      const ConfidenceField& conf, const Grid& grid);

enum class EpisodeStatus {
    Running,
    GoalReached,
    FrontierExhausted,
    MaxIterations,
};

std::string to_string(EpisodeStatus status);

EpisodeStatus check_termination(const Vec2& robot, const PlannerConfig& cfg,
                                const CellMask& safe, const CellMask& frontier,
                                int iter, int max_iter, const Grid& grid);

}  // namespace saegt

#endif  // SAEGT_PLANNER_HPP_
