#include <doctest.h>

#include <vector>

#include "saegt/planner.hpp"

using namespace saegt;

namespace {

ConfidenceField flat_conf(const Grid& grid, double lower, double upper) {
    ConfidenceField conf;
    conf.lower.assign(grid.cell_count(), lower);
    conf.upper.assign(grid.cell_count(), upper);
    return conf;
}

}  // namespace

TEST_CASE("goal cell inside the safe set short-circuits selection") {
    const Grid grid{6, 6, 1.0, {0, 0}};
    PlannerConfig cfg;
    cfg.goal = Vec2{4.2, 3.9};  // rounds to cell (4, 4)
    CellMask safe{grid.cell_count()};
    safe.set(grid.index(4, 4));
    CellMask frontier{grid.cell_count()};
    frontier.set(grid.index(1, 1));
    const ConfidenceField conf = flat_conf(grid, 0.0, 1.0);

    const SubgoalDecision d = select_subgoal(frontier, conf, cfg, safe, grid);
    CHECK(d.reason == SubgoalReason::GoalReachableDirectly);
    CHECK(d.target == *cfg.goal);
}

TEST_CASE("goal-biased selection windows by distance then maximizes width") {
    // Mirrors the three-candidate hand example: a nearest but narrow,
    // b widest but outside the window, c in the window and widest there.
    const Grid grid{10, 1, 1.0, {0, 0}};
    PlannerConfig cfg;
    cfg.goal = Vec2{0.0, 0.0};
    cfg.top_n = 2;

    CellMask frontier{grid.cell_count()};
    const std::size_t a = grid.index(2, 0);  // dist 2
    const std::size_t b = grid.index(5, 0);  // dist 5
    const std::size_t c = grid.index(3, 0);  // dist 3
    frontier.set(a);
    frontier.set(b);
    frontier.set(c);
    CellMask safe = frontier;

    ConfidenceField conf = flat_conf(grid, 0.0, 0.0);
    conf.upper[a] = 1.0;
    conf.upper[b] = 9.0;
    conf.upper[c] = 2.0;

    const SubgoalDecision d = select_subgoal(frontier, conf, cfg, safe, grid);
    CHECK(d.reason == SubgoalReason::FrontierSelected);
    CHECK(d.cell == c);
    CHECK(d.target == grid.cell_center(c));
    CHECK(d.candidate_count == 2);
    CHECK(d.width == 2.0);
}

TEST_CASE("equal widths break ties toward the lower row-major index") {
    const Grid grid{5, 5, 1.0, {0, 0}};
    PlannerConfig cfg;
    cfg.goal = Vec2{2.0, 2.0};
    cfg.top_n = 10;

    CellMask frontier{grid.cell_count()};
    frontier.set(grid.index(1, 2));
    frontier.set(grid.index(3, 2));  // same distance to goal, same width
    CellMask safe = frontier;
    const ConfidenceField conf = flat_conf(grid, 0.0, 1.0);

    const SubgoalDecision d = select_subgoal(frontier, conf, cfg, safe, grid);
    CHECK(d.cell == grid.index(1, 2));
}

TEST_CASE("equal distances are windowed by index before width comparison") {
    // Both candidates sit at distance 1 from the goal; top_n = 1 must keep
    // the lower index even though the other is wider.
    const Grid grid{5, 5, 1.0, {0, 0}};
    PlannerConfig cfg;
    cfg.goal = Vec2{2.0, 2.0};
    cfg.top_n = 1;

    CellMask frontier{grid.cell_count()};
    const std::size_t lowidx = grid.index(2, 1);
    const std::size_t highidx = grid.index(2, 3);
    frontier.set(lowidx);
    frontier.set(highidx);
    CellMask safe = frontier;
    ConfidenceField conf = flat_conf(grid, 0.0, 1.0);
    conf.upper[highidx] = 50.0;

    const SubgoalDecision d = select_subgoal(frontier, conf, cfg, safe, grid);
    CHECK(d.cell == lowidx);
    CHECK(d.candidate_count == 1);
}

TEST_CASE("empty frontier without reachable goal is exploration-complete") {
    const Grid grid{4, 4, 1.0, {0, 0}};
    PlannerConfig cfg;
    cfg.goal = Vec2{3.0, 3.0};
    const CellMask frontier{grid.cell_count()};
    CellMask safe{grid.cell_count()};
    safe.set(grid.index(0, 0));
    const ConfidenceField conf = flat_conf(grid, 0.0, 1.0);

    const SubgoalDecision d = select_subgoal(frontier, conf, cfg, safe, grid);
    CHECK(d.reason == SubgoalReason::ExplorationComplete);
}

TEST_CASE("explore target is the global width argmax with index tie-break") {
    const Grid grid{4, 4, 1.0, {0, 0}};
    CellMask frontier{grid.cell_count()};
    frontier.set(1);
    frontier.set(6);
    frontier.set(9);
    ConfidenceField conf = flat_conf(grid, 0.0, 0.5);
    conf.upper[6] = 3.0;

    SubgoalDecision d = select_explore_target(frontier, conf, grid);
    CHECK(d.reason == SubgoalReason::FrontierSelected);
    CHECK(d.cell == 6);
    CHECK(d.candidate_count == 3);

    // all equal: lowest index wins
    conf.upper[6] = 0.5;
    d = select_explore_target(frontier, conf, grid);
    CHECK(d.cell == 1);

    d = select_explore_target(CellMask{grid.cell_count()}, conf, grid);
    CHECK(d.reason == SubgoalReason::ExplorationComplete);
}

TEST_CASE("termination: goal proximity, exhaustion, iteration cap") {
    const Grid grid{6, 6, 1.0, {0, 0}};
    PlannerConfig goal_cfg;
    goal_cfg.goal = Vec2{5.0, 5.0};
    PlannerConfig free_cfg;

    CellMask safe{grid.cell_count()};
    safe.set(0);
    CellMask frontier{grid.cell_count()};
    frontier.set(0);
    const CellMask empty{grid.cell_count()};

    // within one resolution of the goal
    CHECK(check_termination({4.3, 5.0}, goal_cfg, safe, frontier, 3, 100, grid) ==
          EpisodeStatus::GoalReached);
    CHECK(check_termination({3.0, 5.0}, goal_cfg, safe, frontier, 3, 100, grid) ==
          EpisodeStatus::Running);
    // goal proximity wins over the iteration cap
    CHECK(check_termination({5.0, 5.0}, goal_cfg, safe, empty, 100, 100, grid) ==
          EpisodeStatus::GoalReached);
    CHECK(check_termination({0.0, 0.0}, goal_cfg, safe, empty, 3, 100, grid) ==
          EpisodeStatus::FrontierExhausted);
    CHECK(check_termination({0.0, 0.0}, goal_cfg, safe, frontier, 100, 100, grid) ==
          EpisodeStatus::MaxIterations);
    CHECK(check_termination({0.0, 0.0}, free_cfg, safe, empty, 3, 100, grid) ==
          EpisodeStatus::FrontierExhausted);
    CHECK(check_termination({0.0, 0.0}, free_cfg, safe, frontier, 3, 100, grid) ==
          EpisodeStatus::Running);
}

TEST_CASE("status and reason names are stable strings") {
    CHECK(to_string(SubgoalReason::FrontierSelected) == "frontier-selected");
    CHECK(to_string(SubgoalReason::GoalReachableDirectly) == "goal-reachable-directly");
    CHECK(to_string(SubgoalReason::ExplorationComplete) == "exploration-complete");
    CHECK(to_string(SubgoalReason::Stalled) == "stalled");
    CHECK(to_string(EpisodeStatus::Running) == "running");
    CHECK(to_string(EpisodeStatus::GoalReached) == "goal-reached");
    CHECK(to_string(EpisodeStatus::FrontierExhausted) == "frontier-exhausted");
    CHECK(to_string(EpisodeStatus::MaxIterations) == "max-iterations");
}
