#include "saegt/planner.hpp"

#include <algorithm>
#include <stdexcept>

namespace saegt {

void PlannerConfig::validate() const {
    if (top_n < 1)
        throw std::invalid_argument("planner: top_n must be >= 1");
    if (goal && !goal->finite())
        throw std::invalid_argument("planner: goal must be finite");
}

std::string to_string(SubgoalReason reason) {
    switch (reason) {
        case SubgoalReason::FrontierSelected: return "frontier-selected";
        case SubgoalReason::GoalReachableDirectly: return "goal-reachable-directly";
        case SubgoalReason::ExplorationComplete: return "exploration-complete";
        case SubgoalReason::Stalled: return "stalled";
    }
    return "unknown";
}

std::string to_string(EpisodeStatus status) {
    switch (status) {
        case EpisodeStatus::Running: return "running";
        case EpisodeStatus::GoalReached: return "goal-reached";
        case EpisodeStatus::FrontierExhausted: return "frontier-exhausted";
        case EpisodeStatus::MaxIterations: return "max-iterations";
    }
    return "unknown";
}

namespace {

// Widest-interval cell among candidates; equal widths break toward the
// lower row-major index (candidates arrive index-ascending for that case).
SubgoalDecision pick_widest(const std::vector<std::uint32_t>& candidates,
                            const ConfidenceField& conf, const Grid& grid) {
    std::uint32_t best = candidates.front();
    double best_width = conf.width(best);
    for (const std::uint32_t idx : candidates) {
        const double w = conf.width(idx);
        if (w > best_width || (w == best_width && idx < best)) {
            best = idx;
            best_width = w;
        }
    }
    SubgoalDecision decision;
    decision.target = grid.cell_center(best);
    decision.reason = SubgoalReason::FrontierSelected;
    decision.candidate_count = static_cast<int>(candidates.size());
    decision.cell = best;
    decision.width = best_width;
    return decision;
}

}  // namespace

SubgoalDecision select_subgoal(const CellMask& frontier, const ConfidenceField& conf,
                               const PlannerConfig& cfg, const CellMask& safe,
                               const Grid& grid) {
    cfg.validate();
    if (!cfg.goal_directed())
        throw std::invalid_argument("select_subgoal: requires a goal");
    const Vec2 goal = *cfg.goal;

    // Mission shortcut: the goal cell is already verified safe.
    if (const auto cell = grid.world_to_cell(goal)) {
        const std::size_t idx = grid.index(*cell);
        if (safe.test(idx)) {
            SubgoalDecision decision;
            decision.target = goal;
            decision.reason = SubgoalReason::GoalReachableDirectly;
            decision.cell = static_cast<std::uint32_t>(idx);
            decision.width = conf.width(idx);
            decision.goal_distance = 0.0;
            return decision;
        }
    }

    if (frontier.empty()) {
        SubgoalDecision decision;
        decision.target = goal;
        decision.reason = SubgoalReason::ExplorationComplete;
        return decision;
    }

    // Nearest-to-goal window, then most informative within it.
    std::vector<std::uint32_t> cells = frontier.indices();
    std::vector<double> dist(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        dist[i] = distance(grid.cell_center(cells[i]), goal);

    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return cells[a] < cells[b];
    });

    const std::size_t window =
        std::min(static_cast<std::size_t>(cfg.top_n), order.size());
    std::vector<std::uint32_t> candidates(window);
    for (std::size_t i = 0; i < window; ++i) candidates[i] = cells[order[i]];

    SubgoalDecision decision = pick_widest(candidates, conf, grid);
    decision.goal_distance = distance(grid.cell_center(decision.cell), goal);
    return decision;
}

SubgoalDecision select_explore_target(const CellMask& frontier,
                                      const ConfidenceField& conf, const Grid& grid) {
    if (frontier.empty()) {
        SubgoalDecision decision;
        decision.reason = SubgoalReason::ExplorationComplete;
        return decision;
    }
    return pick_widest(frontier.indices(), conf, grid);
}

EpisodeStatus check_termination(const Vec2& robot, const PlannerConfig& cfg,
                                const CellMask& safe, const CellMask& frontier,
                                int iter, int max_iter, const Grid& grid) {
    if (cfg.goal_directed() && distance(robot, *cfg.goal) <= grid.resolution)
        return EpisodeStatus::GoalReached;

    bool goal_cell_safe = false;
    if (cfg.goal_directed()) {
        if (const auto cell = grid.world_to_cell(*cfg.goal))
            goal_cell_safe = safe.test(grid.index(*cell));
    }
    if (frontier.empty() && !goal_cell_safe) return EpisodeStatus::FrontierExhausted;
    if (iter >= max_iter) return EpisodeStatus::MaxIterations;
    return EpisodeStatus::Running;
}

}  // namespace saegt
