#include "saegt/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "saegt/terrain.hpp"
#include "saegt/textio.hpp"

namespace saegt {

std::string snapshot_basename(int t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "iter_%06d", t);
    return buf;
}

namespace {

void write_layer(const std::string& dir, int t, const char* layer, const Grid& grid,
                 const std::vector<double>& values) {
    TerrainGrid out;
    out.grid = grid;
    out.values = values;
    save_terrain(out, dir + "/" + snapshot_basename(t) + "_" + layer + ".grid");
}

std::vector<double> mask_values(const CellMask& mask) {
    std::vector<double> v(mask.size(), 0.0);
    for (std::size_t i = 0; i < mask.size(); ++i) v[i] = mask.test(i) ? 1.0 : 0.0;
    return v;
}

void write_ring(std::ofstream& out, const char* tag, const std::vector<Vec2>& ring) {
    out << tag << " " << ring.size();
    for (const Vec2& v : ring) out << " " << fmt_g17(v.x) << " " << fmt_g17(v.y);
    out << "\n";
}

}  // namespace

void write_snapshot(const std::string& dir, const Grid& grid, const CellMask& safe,
                    const CellMask& frontier, const ConfidenceField& conf,
                    const GeomSnapshot& geom) {
    write_layer(dir, geom.t, "safe", grid, mask_values(safe));
    write_layer(dir, geom.t, "frontier", grid, mask_values(frontier));
    write_layer(dir, geom.t, "lower", grid, conf.lower);
    write_layer(dir, geom.t, "upper", grid, conf.upper);

    const std::string path = dir + "/" + snapshot_basename(geom.t) + ".geom";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write snapshot: " + path);
    out << "SNAPSHOT " << geom.t << " " << geom.status << " "
        << fmt_g17(geom.threshold) << "\n";
    out << "WORKSPACE " << fmt_g17(geom.workspace.lo.x) << " "
        << fmt_g17(geom.workspace.lo.y) << " " << fmt_g17(geom.workspace.hi.x) << " "
        << fmt_g17(geom.workspace.hi.y) << "\n";
    for (const Polygon& h : geom.hulls) write_ring(out, "HULL", h.outer);
    for (const Polygon& o : geom.obstacles) {
        write_ring(out, "OBSTACLE", o.outer);
        for (const auto& hole : o.holes) write_ring(out, "OBSTACLE_HOLE", hole);
    }
    if (geom.lfs) write_ring(out, "LFS", *geom.lfs);
    out << "ROBOT " << fmt_g17(geom.robot.x) << " " << fmt_g17(geom.robot.y) << "\n";
    if (geom.subgoal)
        out << "SUBGOAL " << fmt_g17(geom.subgoal->x) << " "
            << fmt_g17(geom.subgoal->y) << "\n";
    if (geom.goal)
        out << "GOAL " << fmt_g17(geom.goal->x) << " " << fmt_g17(geom.goal->y) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

[[noreturn]] void geom_fail(const std::string& path, int line, const std::string& what) {
    std::ostringstream msg;
    msg << path << ":" << line << ": " << what;
    throw std::runtime_error(msg.str());
}

std::vector<Vec2> parse_ring(std::istringstream& in, const std::string& path, int lineno) {
    std::size_t n = 0;
    if (!(in >> n)) geom_fail(path, lineno, "missing vertex count");
    std::vector<Vec2> ring(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(in >> ring[i].x >> ring[i].y))
            geom_fail(path, lineno, "truncated ring");
    }
    return ring;
}

}  // namespace

GeomSnapshot load_snapshot_geom(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);

    GeomSnapshot geom;
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream fields{line};
        std::string tag;
        fields >> tag;
        if (tag == "SNAPSHOT") {
            if (!(fields >> geom.t >> geom.status >> geom.threshold))
                geom_fail(path, lineno, "bad SNAPSHOT header");
            saw_header = true;
        } else if (tag == "WORKSPACE") {
            if (!(fields >> geom.workspace.lo.x >> geom.workspace.lo.y >>
                  geom.workspace.hi.x >> geom.workspace.hi.y))
                geom_fail(path, lineno, "bad WORKSPACE record");
        } else if (tag == "HULL") {
            Polygon p;
            p.outer = parse_ring(fields, path, lineno);
            geom.hulls.push_back(std::move(p));
        } else if (tag == "OBSTACLE") {
            Polygon p;
            p.outer = parse_ring(fields, path, lineno);
            geom.obstacles.push_back(std::move(p));
        } else if (tag == "OBSTACLE_HOLE") {
            if (geom.obstacles.empty())
                geom_fail(path, lineno, "OBSTACLE_HOLE before any OBSTACLE");
            geom.obstacles.back().holes.push_back(parse_ring(fields, path, lineno));
        } else if (tag == "LFS") {
            geom.lfs = parse_ring(fields, path, lineno);
        } else if (tag == "ROBOT") {
            if (!(fields >> geom.robot.x >> geom.robot.y))
                geom_fail(path, lineno, "bad ROBOT record");
        } else if (tag == "SUBGOAL") {
            Vec2 v;
            if (!(fields >> v.x >> v.y)) geom_fail(path, lineno, "bad SUBGOAL record");
            geom.subgoal = v;
        } else if (tag == "GOAL") {
            Vec2 v;
            if (!(fields >> v.x >> v.y)) geom_fail(path, lineno, "bad GOAL record");
            geom.goal = v;
        } else {
            geom_fail(path, lineno, "unknown record '" + tag + "'");
        }
    }
    if (!saw_header) geom_fail(path, 1, "missing SNAPSHOT header");
    return geom;
}

SnapshotObserver::SnapshotObserver(std::string dir, const Grid& grid,
                                   double threshold, std::optional<Vec2> goal,
                                   int every)
    : dir_(std::move(dir)), grid_(grid), threshold_(threshold), goal_(goal),
      every_(every) {}

void SnapshotObserver::on_tick(const TrajectoryPoint&, const RobotState&,
                               const LocalFreeSpace& lfs, const FreeSpaceModel&) {
    last_lfs_ = lfs.ring;
}

void SnapshotObserver::on_iteration(int t, const ConfidenceField& conf,
                                    const CellMask& safe, const CellMask& frontier,
                                    const FreeSpaceModel& model,
                                    const SubgoalDecision& decision,
                                    const RobotState& robot, EpisodeStatus status) {
    const bool is_final = status != EpisodeStatus::Running;
    const bool on_cadence = every_ > 0 && t % every_ == 0;
    if (!is_final && !on_cadence) return;

    GeomSnapshot geom;
    geom.t = t;
    geom.status = to_string(status);
    geom.threshold = threshold_;
    geom.workspace = model.workspace;
    geom.hulls = model.hulls;
    geom.obstacles = model.obstacles;
    geom.lfs = last_lfs_;
    geom.robot = robot.position;
    if (t > 0 && decision.reason != SubgoalReason::ExplorationComplete)
        geom.subgoal = decision.target;
    geom.goal = goal_;

    write_snapshot(dir_, grid_, safe, frontier, conf, geom);
    written_.push_back(t);
}

}  // namespace saegt
