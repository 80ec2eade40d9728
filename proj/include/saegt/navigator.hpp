#ifndef SAEGT_NAVIGATOR_HPP_
#define SAEGT_NAVIGATOR_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "saegt/free_space.hpp"
#include "saegt/geom2d.hpp"

namespace saegt {

struct RobotState {
    Vec2 position{0.0, 0.0};
    double max_step = 0.1;
};

// Convex region around the robot, guaranteed inside the free space.
struct LocalFreeSpace {
    std::vector<Vec2> ring;  // CCW convex polygon

    bool contains(const Vec2& p, double eps = 1e-9) const;
};

struct NavParams {
    double sensing_radius = 0.5;
    double arrival_tolerance = 0.05;
    int stall_window = 50;
    double stall_progress_factor = 0.01;  // of max_step
    int max_leg_ticks = 100000;

    void validate() const;
};

// Clips a convex CCW ring against the closed half-plane
// {p : dot(p - anchor, normal) >= 0}.
std::vector<Vec2> clip_convex(const std::vector<Vec2>& ring, const Vec2& anchor,
                              const Vec2& normal);

// Euclidean projection onto a convex ring (closed region).
Vec2 project_to_convex(const std::vector<Vec2>& ring, const Vec2& p);

// Sensing disk (16-gon) around the robot, cut back by one half-plane per
// obstacle edge within sensing range. Throws std::logic_error if the robot
// is outside every hull.
LocalFreeSpace local_free_space(const RobotState& robot, const FreeSpaceModel& model,
                                double sensing_radius);

// One control tick: move toward the projection of the subgoal onto the
// local free space, at most max_step.
RobotState step(const RobotState& robot, const Vec2& subgoal,
                const LocalFreeSpace& lfs);

enum class LegOutcome : std::uint8_t { Arrived, Stalled };

struct LegResult {
    LegOutcome outcome = LegOutcome::Stalled;
    int ticks = 0;
};

// Drives the robot toward the subgoal tick by tick until it arrives
// (within arrival_tolerance) or stalls. on_tick, when set, observes every
// post-step state together with the local free space used for that tick.
LegResult navigate_to(RobotState& robot, const Vec2& subgoal,
                      const FreeSpaceModel& model, const NavParams& params,
                      const std::function<void(const RobotState&,
                                               const LocalFreeSpace&)>& on_tick = {});

}  // namespace saegt

#endif  // SAEGT_NAVIGATOR_HPP_
