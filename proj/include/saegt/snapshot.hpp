#ifndef SAEGT_SNAPSHOT_HPP_
#define SAEGT_SNAPSHOT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "saegt/episode.hpp"
#include "saegt/free_space.hpp"
#include "saegt/geom2d.hpp"
#include "saegt/grid.hpp"
#include "saegt/regions.hpp"

namespace saegt {

// Geometry side of one snapshot. The cell layers (safe, frontier, lower,
// upper) live in sibling .grid files sharing the terrain file format.
struct GeomSnapshot {
    int t = 0;
    std::string status = "running";
    double threshold = 0.0;
    Rect workspace{};
    std::vector<Polygon> hulls;
    std::vector<Polygon> obstacles;
    std::optional<std::vector<Vec2>> lfs;
    Vec2 robot{};
    std::optional<Vec2> subgoal;
    std::optional<Vec2> goal;
};

std::string snapshot_basename(int t);  // "iter_000010"

// Writes <dir>/iter_<t>_{safe,frontier,lower,upper}.grid and
// <dir>/iter_<t>.geom.
void write_snapshot(const std::string& dir, const Grid& grid, const CellMask& safe,
                    const CellMask& frontier, const ConfidenceField& conf,
                    const GeomSnapshot& geom);

GeomSnapshot load_snapshot_geom(const std::string& path);

// Emits a snapshot every `every` iterations (0 = only the final one) plus
// the final iteration. Remembers the most recent local free space so the
// snapshot shows the controller's last view.
class SnapshotObserver : public EpisodeObserver {
public:
    SnapshotObserver(std::string dir, const Grid& grid, double threshold,
                     std::optional<Vec2> goal, int every);

    void on_iteration(int t, const ConfidenceField& conf, const CellMask& safe,
                      const CellMask& frontier, const FreeSpaceModel& model,
                      const SubgoalDecision& decision, const RobotState& robot,
                      EpisodeStatus status) override;
    void on_tick(const TrajectoryPoint& point, const RobotState& robot,
                 const LocalFreeSpace& lfs, const FreeSpaceModel& model) override;

    const std::vector<int>& written() const { return written_; }

private:
    std::string dir_;
    Grid grid_;
    double threshold_;
    std::optional<Vec2> goal_;
    int every_;
    std::optional<std::vector<Vec2>> last_lfs_;
    std::vector<int> written_;
};

}  // namespace saegt

#endif  // SAEGT_SNAPSHOT_HPP_
