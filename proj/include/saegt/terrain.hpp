#ifndef SAEGT_TERRAIN_HPP_
#define SAEGT_TERRAIN_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "saegt/geom2d.hpp"
#include "saegt/grid.hpp"
#include "saegt/rng.hpp"

namespace saegt {

class TerrainParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TerrainGrid {
    Grid grid;
    std::vector<double> values;                 // row-major, grid.index order
    std::optional<double> lipschitz_bound;

    double value(const Cell& c) const { return values[grid.index(c)]; }
    // Bilinear interpolation over cell centers, constant beyond the
    // outermost centers. Throws std::out_of_range outside the extent.
    double interpolate(const Vec2& x) const;
    void validate() const;
};

// Largest |Δf| / distance over horizontally, vertically, and diagonally
// adjacent cell pairs.
double lipschitz_scan(const TerrainGrid& terrain);

double measure(const TerrainGrid& terrain, const Vec2& x, double noise_sd, Rng& rng);

// File format: "GRID <width> <height> <resolution> <origin_x> <origin_y>"
// followed by height rows of width values, northernmost row first.
// A "<path>.meta" sidecar carries the declared Lipschitz bound.
TerrainGrid load_terrain(const std::string& path);
void save_terrain(const TerrainGrid& terrain, const std::string& path);

TerrainGrid generate_uniform(const Grid& grid, double value);
TerrainGrid generate_ramp(const Grid& grid, double base, const Vec2& gradient);

// Low-traversability band across the grid with a gap corridor, edges
// ramped linearly over smooth_width.
struct BandParams {
    double high = 1500.0;
    double low = 500.0;
    double band_y0 = 0.0;
    double band_y1 = 0.0;
    double gap_x0 = 0.0;
    double gap_x1 = 0.0;
    double smooth_width = 1.0;
};
TerrainGrid generate_band(const Grid& grid, const BandParams& params);

struct BlobParams {
    double high = 1500.0;
    double low = 500.0;
    int count = 3;
    double radius_min = 1.0;
    double radius_max = 3.0;
    double smooth_width = 1.0;
};
TerrainGrid generate_blobs(const Grid& grid, const BlobParams& params,
                           std::uint64_t seed);

}  // namespace saegt

#endif  // SAEGT_TERRAIN_HPP_
