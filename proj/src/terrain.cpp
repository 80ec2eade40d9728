#include "saegt/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "saegt/textio.hpp"

namespace saegt {

void TerrainGrid::validate() const {
    grid.validate();
    if (values.size() != grid.cell_count())
        throw std::invalid_argument("terrain: value count does not match grid");
    for (const double v : values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("terrain: non-finite value");
    }
}

double TerrainGrid::interpolate(const Vec2& x) const {
    if (!grid.extent().contains(x))
        throw std::out_of_range("terrain: position outside extent");
    const double gx = std::clamp((x.x - grid.origin.x) / grid.resolution, 0.0,
                                 static_cast<double>(grid.width - 1));
    const double gy = std::clamp((x.y - grid.origin.y) / grid.resolution, 0.0,
                                 static_cast<double>(grid.height - 1));
    const int ix0 = std::min(static_cast<int>(gx), grid.width - 2 >= 0 ? grid.width - 2 : 0);
    const int iy0 = std::min(static_cast<int>(gy), grid.height - 2 >= 0 ? grid.height - 2 : 0);
    const int ix1 = std::min(ix0 + 1, grid.width - 1);
    const int iy1 = std::min(iy0 + 1, grid.height - 1);
    const double fx = gx - ix0;
    const double fy = gy - iy0;
    const double v00 = values[grid.index(ix0, iy0)];
    const double v10 = values[grid.index(ix1, iy0)];
    const double v01 = values[grid.index(ix0, iy1)];
    const double v11 = values[grid.index(ix1, iy1)];
    // Nested lerps: exact on constant fields, unlike the four-weight sum.
    const double south = v00 + fx * (v10 - v00);
    const double north = v01 + fx * (v11 - v01);
    return south + fy * (north - south);
}

double lipschitz_scan(const TerrainGrid& terrain) {
    const Grid& g = terrain.grid;
    const double straight = g.resolution;
    const double diag = g.resolution * std::sqrt(2.0);
    double worst = 0.0;
    for (int iy = 0; iy < g.height; ++iy) {
        for (int ix = 0; ix < g.width; ++ix) {
            const double v = terrain.values[g.index(ix, iy)];
            if (ix + 1 < g.width)
                worst = std::max(worst,
                                 std::abs(terrain.values[g.index(ix + 1, iy)] - v) / straight);
            if (iy + 1 < g.height)
                worst = std::max(worst,
                                 std::abs(terrain.values[g.index(ix, iy + 1)] - v) / straight);
            if (ix + 1 < g.width && iy + 1 < g.height)
                worst = std::max(
                    worst, std::abs(terrain.values[g.index(ix + 1, iy + 1)] - v) / diag);
            if (ix > 0 && iy + 1 < g.height)
                worst = std::max(
                    worst, std::abs(terrain.values[g.index(ix - 1, iy + 1)] - v) / diag);
        }
    }
    return worst;
}

double measure(const TerrainGrid& terrain, const Vec2& x, double noise_sd, Rng& rng) {
    if (!(noise_sd >= 0.0))
        throw std::invalid_argument("measure: noise_sd must be >= 0");
    return terrain.interpolate(x) + noise_sd * rng.gaussian();
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
    std::ostringstream msg;
    msg << path << ":" << line << ": " << what;
    throw TerrainParseError(msg.str());
}

std::optional<double> read_meta_lipschitz(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    while (std::getline(in, line)) {
        const auto parts = split(line, '=');
        if (parts.size() != 2) continue;
        if (trim(parts[0]) == "lipschitz") {
            if (const auto v = parse_double(trim(parts[1]))) return *v;
        }
    }
    return std::nullopt;
}

}  // namespace

TerrainGrid load_terrain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TerrainParseError("cannot open terrain file: " + path);

    std::string line;
    if (!std::getline(in, line)) parse_fail(path, 1, "missing header");
    std::istringstream header(line);
    std::string magic;
    TerrainGrid terrain;
    header >> magic >> terrain.grid.width >> terrain.grid.height >>
        terrain.grid.resolution >> terrain.grid.origin.x >> terrain.grid.origin.y;
    if (!header || magic != "GRID")
        parse_fail(path, 1, "expected 'GRID <width> <height> <resolution> <ox> <oy>'");
    try {
        terrain.grid.validate();
    } catch (const std::invalid_argument& e) {
        parse_fail(path, 1, e.what());
    }

    terrain.values.resize(terrain.grid.cell_count());
    for (int row = 0; row < terrain.grid.height; ++row) {
        const int lineno = 2 + row;
        if (!std::getline(in, line)) parse_fail(path, lineno, "missing data row");
        const int iy = terrain.grid.height - 1 - row;  // northernmost row first
        int ix = 0;
        for (const auto tok : split(line, ' ')) {
            const auto t = trim(tok);
            if (t.empty()) continue;
            if (ix >= terrain.grid.width) parse_fail(path, lineno, "too many values in row");
            const auto v = parse_double(t);
            if (!v || !std::isfinite(*v))
                parse_fail(path, lineno, "bad value '" + std::string(t) + "'");
            terrain.values[terrain.grid.index(ix++, iy)] = *v;
        }
        if (ix != terrain.grid.width) parse_fail(path, lineno, "too few values in row");
    }
    while (std::getline(in, line)) {
        if (!trim(line).empty())
            parse_fail(path, 2 + terrain.grid.height, "trailing data after grid rows");
    }

    terrain.lipschitz_bound = read_meta_lipschitz(path + ".meta");
    return terrain;
}

void save_terrain(const TerrainGrid& terrain, const std::string& path) {
    terrain.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write terrain file: " + path);
    out << "GRID " << terrain.grid.width << " " << terrain.grid.height << " "
        << fmt_g17(terrain.grid.resolution) << " " << fmt_g17(terrain.grid.origin.x)
        << " " << fmt_g17(terrain.grid.origin.y) << "\n";
    for (int iy = terrain.grid.height - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < terrain.grid.width; ++ix) {
            if (ix) out << " ";
            out << fmt_g17(terrain.values[terrain.grid.index(ix, iy)]);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);

    if (terrain.lipschitz_bound) {
        std::ofstream meta(path + ".meta");
        if (!meta) throw std::runtime_error("cannot write sidecar: " + path + ".meta");
        meta << "lipschitz = " << fmt_g17(*terrain.lipschitz_bound) << "\n";
    }
}

TerrainGrid generate_uniform(const Grid& grid, double value) {
    grid.validate();
    if (!std::isfinite(value))
        throw std::invalid_argument("generate_uniform: non-finite value");
    TerrainGrid t;
    t.grid = grid;
    t.values.assign(grid.cell_count(), value);
    t.lipschitz_bound = 0.0;
    return t;
}

TerrainGrid generate_ramp(const Grid& grid, double base, const Vec2& gradient) {
    grid.validate();
    if (!std::isfinite(base) || !gradient.finite())
        throw std::invalid_argument("generate_ramp: non-finite parameter");
    TerrainGrid t;
    t.grid = grid;
    t.values.resize(grid.cell_count());
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            const Vec2 p = grid.cell_center(ix, iy);
            t.values[grid.index(ix, iy)] = base + gradient.x * p.x + gradient.y * p.y;
        }
    }
    t.lipschitz_bound = gradient.norm();
    return t;
}

namespace {

double rect_distance(const Vec2& p, const Vec2& lo, const Vec2& hi) {
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    return std::hypot(dx, dy);
}

// value = low + span * clamp(d / smooth, 0, 1) where d is the distance to
// the low region; the distance field has Lipschitz constant 1, so the
// declared bound is span / smooth.
TerrainGrid from_distance_field(const Grid& grid, double high, double low,
                                double smooth_width,
                                const std::function<double(const Vec2&)>& dist) {
    if (!(smooth_width > 0.0))
        throw std::invalid_argument("terrain generator: smooth_width must be > 0");
    if (!(high >= low))
        throw std::invalid_argument("terrain generator: high must be >= low");
    TerrainGrid t;
    t.grid = grid;
    t.values.resize(grid.cell_count());
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            const double d = dist(grid.cell_center(ix, iy));
            t.values[grid.index(ix, iy)] =
                low + (high - low) * std::clamp(d / smooth_width, 0.0, 1.0);
        }
    }
    t.lipschitz_bound = (high - low) / smooth_width;
    const double scanned = lipschitz_scan(t);
    if (scanned > *t.lipschitz_bound * (1.0 + 1e-12))
        throw std::invalid_argument("terrain generator: declared bound violated");
    return t;
}

}  // namespace

TerrainGrid generate_band(const Grid& grid, const BandParams& params) {
    grid.validate();
    if (!(params.band_y1 > params.band_y0))
        throw std::invalid_argument("generate_band: band_y1 must exceed band_y0");
    const Rect ext = grid.extent();
    const bool has_gap = params.gap_x1 > params.gap_x0;
    // Low region: the band minus the gap corridor, i.e. up to two rectangles.
    const auto dist = [&](const Vec2& p) {
        if (!has_gap)
            return rect_distance(p, {ext.lo.x, params.band_y0}, {ext.hi.x, params.band_y1});
        const double left =
            rect_distance(p, {ext.lo.x, params.band_y0}, {params.gap_x0, params.band_y1});
        const double right =
            rect_distance(p, {params.gap_x1, params.band_y0}, {ext.hi.x, params.band_y1});
        return std::min(left, right);
    };
    return from_distance_field(grid, params.high, params.low, params.smooth_width, dist);
}

TerrainGrid generate_blobs(const Grid& grid, const BlobParams& params,
                           std::uint64_t seed) {
    grid.validate();
    if (params.count < 0)
        throw std::invalid_argument("generate_blobs: count must be >= 0");
    if (!(params.radius_min > 0.0) || !(params.radius_max >= params.radius_min))
        throw std::invalid_argument("generate_blobs: bad radius range");

    Rng rng(seed);
    const Rect ext = grid.extent();
    std::vector<Vec2> centers(static_cast<std::size_t>(params.count));
    std::vector<double> radii(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        centers[i] = {ext.lo.x + rng.uniform() * ext.width(),
                      ext.lo.y + rng.uniform() * ext.height()};
        radii[i] =
            params.radius_min + rng.uniform() * (params.radius_max - params.radius_min);
    }
    const auto dist = [&](const Vec2& p) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < centers.size(); ++i)
            d = std::min(d, std::max(0.0, distance(p, centers[i]) - radii[i]));
        return d;
    };
    return from_distance_field(grid, params.high, params.low, params.smooth_width, dist);
}

}  // namespace saegt
