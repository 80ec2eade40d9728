#include <doctest.h>

#include <cmath>
#include <vector>

#include "saegt/free_space.hpp"
#include "saegt/grid.hpp"
#include "saegt/navigator.hpp"

using namespace saegt;

namespace {

// One big square hull with the usual border obstacle around it.
FreeSpaceModel open_room() {
    const Grid grid{11, 11, 1.0, {0, 0}};
    CellMask safe{grid.cell_count()};
    for (std::size_t i = 0; i < grid.cell_count(); ++i) safe.set(i);
    return build_free_space(safe, grid, FreeSpaceParams::defaults_for(1.0));
}

bool in_free_space(const FreeSpaceModel& model, const Vec2& p) {
    return model.contains(p, 1e-9);
}

}  // namespace

TEST_CASE("clip_convex cuts the square at a half-plane") {
    const std::vector<Vec2> square = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    const auto clipped = clip_convex(square, {0.5, 0.0}, {1.0, 0.0});
    REQUIRE(clipped.size() == 4);
    for (const Vec2& v : clipped) CHECK(v.x >= 0.5 - 1e-12);
    CHECK(ring_signed_area(clipped) == doctest::Approx(3.0));

    // plane outside the square: everything kept / everything gone
    CHECK(clip_convex(square, {-1.0, 0.0}, {1.0, 0.0}).size() == 4);
    CHECK(clip_convex(square, {3.0, 0.0}, {1.0, 0.0}).empty());
}

TEST_CASE("project_to_convex returns interior points unchanged") {
    const std::vector<Vec2> square = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};
    CHECK(project_to_convex(square, {1, 2}) == Vec2{1, 2});
    CHECK(project_to_convex(square, {7, 2}) == Vec2{4, 2});
    const Vec2 corner = project_to_convex(square, {7, 8});
    CHECK(corner == Vec2{4, 4});
}

TEST_CASE("local free space is the sensing polygon away from walls") {
    const FreeSpaceModel model = open_room();
    const RobotState robot{{5.0, 5.0}, 0.5};
    const LocalFreeSpace lfs = local_free_space(robot, model, 2.0);
    REQUIRE(lfs.ring.size() == 16);
    for (const Vec2& v : lfs.ring) {
        CHECK(distance(v, robot.position) == doctest::Approx(2.0));
        CHECK(in_free_space(model, v));
    }
    CHECK(lfs.contains(robot.position));
}

TEST_CASE("a nearby wall clips the local free space at its distance") {
    const FreeSpaceModel model = open_room();
    const RobotState robot{{5.0, 0.8}, 0.5};  // hull boundary at y = 0
    const LocalFreeSpace lfs = local_free_space(robot, model, 2.0);
    REQUIRE(lfs.ring.size() >= 3);
    double min_y = 1e9;
    for (const Vec2& v : lfs.ring) {
        min_y = std::min(min_y, v.y);
        CHECK(in_free_space(model, v));
    }
    CHECK(min_y >= -1e-9);          // never beyond the wall
    CHECK(min_y < 0.8 - 0.7);       // but the wall plane was reached
}

TEST_CASE("local free space demands a robot inside the hulls") {
    const FreeSpaceModel model = open_room();
    CHECK_THROWS_AS(local_free_space({{40.0, 40.0}, 0.5}, model, 2.0),
                    std::logic_error);
    CHECK_THROWS_AS(local_free_space({{5.0, 5.0}, 0.5}, model, 0.0),
                    std::invalid_argument);
}

TEST_CASE("step arrives, advances by max_step, and respects the region") {
    LocalFreeSpace lfs;
    lfs.ring = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};

    const RobotState robot{{1.0, 1.0}, 0.5};
    // close subgoal: exact arrival
    CHECK(step(robot, {1.2, 1.0}, lfs).position == Vec2{1.2, 1.0});
    // far subgoal: exactly max_step along the line
    const RobotState moved = step(robot, {1.0, 3.0}, lfs);
    CHECK(moved.position == Vec2{1.0, 1.5});
    // subgoal outside: head for its projection
    const RobotState toward = step(robot, {9.0, 1.0}, lfs);
    CHECK(toward.position == Vec2{1.5, 1.0});
    CHECK(lfs.contains(toward.position));
}

TEST_CASE("navigate_to makes monotone progress on open ground") {
    const FreeSpaceModel model = open_room();
    RobotState robot{{1.0, 1.0}, 0.5};
    NavParams params;
    params.sensing_radius = 5.0;
    params.arrival_tolerance = 0.25;

    const Vec2 subgoal{8.0, 7.0};
    double last = distance(robot.position, subgoal);
    Vec2 prev = robot.position;
    const LegResult result = navigate_to(
        robot, subgoal, model, params, [&](const RobotState& r, const LocalFreeSpace&) {
            const double d = distance(r.position, subgoal);
            CHECK(d < last);
            CHECK(distance(r.position, prev) <= 0.5 + 1e-12);
            CHECK(in_free_space(model, r.position));
            last = d;
            prev = r.position;
        });
    CHECK(result.outcome == LegOutcome::Arrived);
    CHECK(distance(robot.position, subgoal) <= 0.25);
    CHECK(result.ticks > 0);
}

TEST_CASE("an unreachable subgoal stalls instead of escaping") {
    const FreeSpaceModel model = open_room();
    RobotState robot{{9.0, 5.0}, 0.5};
    NavParams params;
    params.sensing_radius = 5.0;
    params.arrival_tolerance = 0.25;
    params.stall_window = 40;

    // far beyond the east wall
    const LegResult result = navigate_to(
        robot, {30.0, 5.0}, model, params,
        [&](const RobotState& r, const LocalFreeSpace&) {
            CHECK(in_free_space(model, r.position));
        });
    CHECK(result.outcome == LegOutcome::Stalled);
    CHECK(robot.position.x <= 10.0 + 1e-9);
    CHECK(robot.position.x > 9.5);  // it did reach the wall
}

TEST_CASE("nav parameter validation") {
    NavParams p;
    p.sensing_radius = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.arrival_tolerance = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.stall_window = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
