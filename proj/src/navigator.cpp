#include "saegt/navigator.hpp"

#include <cmath>
#include <stdexcept>

namespace saegt {

bool LocalFreeSpace::contains(const Vec2& p, double eps) const {
    if (ring.size() < 3) return false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % ring.size()];
        if (cross(a, b, p) < -eps) return false;
    }
    return true;
}

void NavParams::validate() const {
    if (!(sensing_radius > 0.0))
        throw std::invalid_argument("nav: sensing_radius must be > 0");
    if (!(arrival_tolerance > 0.0))
        throw std::invalid_argument("nav: arrival_tolerance must be > 0");
    if (stall_window < 1)
        throw std::invalid_argument("nav: stall_window must be >= 1");
    if (!(stall_progress_factor > 0.0))
        throw std::invalid_argument("nav: stall_progress_factor must be > 0");
    if (max_leg_ticks < 1)
        throw std::invalid_argument("nav: max_leg_ticks must be >= 1");
}

std::vector<Vec2> clip_convex(const std::vector<Vec2>& ring, const Vec2& anchor,
                              const Vec2& normal) {
    std::vector<Vec2> out;
    const std::size_t n = ring.size();
    if (n == 0) return out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& s = ring[i];
        const Vec2& e = ring[(i + 1) % n];
        const double ds = (s - anchor).dot(normal);
        const double de = (e - anchor).dot(normal);
        if (ds >= 0.0) {
            out.push_back(s);
            if (de < 0.0) {
                const double t = ds / (ds - de);
                out.push_back(s + (e - s) * t);
            }
        } else if (de >= 0.0) {
            const double t = ds / (ds - de);
            out.push_back(s + (e - s) * t);
        }
    }
    return out;
}

Vec2 project_to_convex(const std::vector<Vec2>& ring, const Vec2& p) {
    if (ring.empty()) return p;
    if (ring.size() < 3) return ring.front();

    bool inside = true;
    for (std::size_t i = 0; i < ring.size() && inside; ++i)
        inside = cross(ring[i], ring[(i + 1) % ring.size()], p) >= 0.0;
    if (inside) return p;

    Vec2 best = ring.front();
    double best_d2 = (p - best).squared_norm();
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vec2 c =
            closest_point_on_segment(p, ring[i], ring[(i + 1) % ring.size()]);
        const double d2 = (p - c).squared_norm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

namespace {

std::vector<Vec2> sensing_polygon(const Vec2& center, double radius) {
    constexpr int kSides = 16;
    std::vector<Vec2> ring(kSides);
    for (int k = 0; k < kSides; ++k) {
        const double theta = 2.0 * 3.14159265358979323846 * k / kSides;
        ring[k] = {center.x + radius * std::cos(theta),
                   center.y + radius * std::sin(theta)};
    }
    return ring;
}

// One half-plane per obstacle edge within range, anchored at the closest
// boundary point with the normal toward the robot. Any kept point whose
// segment to the robot would cross that edge ends up on the far side of
// the anchor plane, so the clipped region never enters an obstacle.
// Each plane is inset a hair toward the robot so step targets keep a
// strictly positive clearance and boundary contact cannot accumulate.
void clip_by_ring(std::vector<Vec2>& region, const std::vector<Vec2>& ring,
                  const Vec2& robot, double radius, double inset) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n && region.size() >= 3; ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % n];
        const Vec2 c = closest_point_on_segment(robot, a, b);
        const Vec2 away = robot - c;
        const double d = away.norm();
        if (d >= radius) continue;
        if (d > inset) {
            const Vec2 u = away * (1.0 / d);
            region = clip_convex(region, c + u * inset, u);
        } else {
            // Robot sits on (or within rounding of) the edge: keep its
            // free side (interiors lie left of CCW outers and CW holes,
            // free space to the right).
            const Vec2 dir = b - a;
            const double len = dir.norm();
            if (len == 0.0) continue;
            const Vec2 u = Vec2{dir.y, -dir.x} * (1.0 / len);
            region = clip_convex(region, a + u * inset, u);
        }
    }
}

}  // namespace

LocalFreeSpace local_free_space(const RobotState& robot, const FreeSpaceModel& model,
                                double sensing_radius) {
    if (!(sensing_radius > 0.0))
        throw std::invalid_argument("local_free_space: sensing_radius must be > 0");
    if (!model.contains(robot.position))
        throw std::logic_error("local_free_space: robot left the free space");

    LocalFreeSpace lfs;
    lfs.ring = sensing_polygon(robot.position, sensing_radius);
    const double inset = 1e-9 * sensing_radius;
    const Rect& ws = model.workspace;
    lfs.ring = clip_convex(lfs.ring, {ws.lo.x + inset, ws.lo.y}, {1.0, 0.0});
    lfs.ring = clip_convex(lfs.ring, {ws.lo.x, ws.lo.y + inset}, {0.0, 1.0});
    lfs.ring = clip_convex(lfs.ring, {ws.hi.x - inset, ws.hi.y}, {-1.0, 0.0});
    lfs.ring = clip_convex(lfs.ring, {ws.hi.x, ws.hi.y - inset}, {0.0, -1.0});
    for (const Polygon& obs : model.obstacles) {
        clip_by_ring(lfs.ring, obs.outer, robot.position, sensing_radius, inset);
        for (const auto& hole : obs.holes)
            clip_by_ring(lfs.ring, hole, robot.position, sensing_radius, inset);
        if (lfs.ring.size() < 3) break;
    }
    return lfs;
}

RobotState step(const RobotState& robot, const Vec2& subgoal,
                const LocalFreeSpace& lfs) {
    const Vec2 target = project_to_convex(lfs.ring, subgoal);
    const Vec2 delta = target - robot.position;
    const double d = delta.norm();
    RobotState next = robot;
    if (d > 0.0) {
        const double advance = std::min(robot.max_step, d);
        next.position = robot.position + delta * (advance / d);
    }
    return next;
}

LegResult navigate_to(RobotState& robot, const Vec2& subgoal,
                      const FreeSpaceModel& model, const NavParams& params,
                      const std::function<void(const RobotState&,
                                               const LocalFreeSpace&)>& on_tick) {
    params.validate();
    LegResult result;
    const double min_progress = params.stall_progress_factor * robot.max_step;
    double best = distance(robot.position, subgoal);
    int since_progress = 0;

    while (distance(robot.position, subgoal) > params.arrival_tolerance) {
        if (result.ticks >= params.max_leg_ticks) return result;
        const LocalFreeSpace lfs = local_free_space(robot, model, params.sensing_radius);
        robot = step(robot, subgoal, lfs);
        ++result.ticks;
        if (on_tick) on_tick(robot, lfs);

        const double d = distance(robot.position, subgoal);
        if (d < best - min_progress) {
            best = d;
            since_progress = 0;
        } else if (++since_progress >= params.stall_window) {
            return result;
        }
    }
    result.outcome = LegOutcome::Arrived;
    return result;
}

}  // namespace saegt
