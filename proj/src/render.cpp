#include "saegt/render.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace saegt {

namespace {

constexpr std::array<std::uint8_t, 3> kWhite{255, 255, 255};
constexpr std::array<std::uint8_t, 3> kGray{128, 128, 128};
constexpr std::array<std::uint8_t, 3> kBlack{0, 0, 0};
constexpr std::array<std::uint8_t, 3> kLightBlue{150, 200, 255};
constexpr std::array<std::uint8_t, 3> kRed{220, 40, 40};
constexpr std::array<std::uint8_t, 3> kGreen{60, 180, 75};
constexpr std::array<std::uint8_t, 3> kPurple{140, 30, 160};
constexpr std::array<std::uint8_t, 3> kDarkBlue{0, 0, 140};

void put(Image& img, int px, int py, const std::array<std::uint8_t, 3>& c) {
    std::uint8_t* p = img.pixel(px, py);
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
}

}  // namespace

Image render_snapshot(const GeomSnapshot& geom, const Grid& grid,
                      const CellMask& safe, const CellMask& frontier,
                      const TerrainGrid* terrain, int supersample) {
    if (supersample < 1)
        throw std::invalid_argument("render: supersample must be >= 1");
    if (safe.size() != grid.cell_count() || frontier.size() != grid.cell_count())
        throw std::invalid_argument("render: layer size does not match grid");
    if (terrain && terrain->grid != grid)
        throw std::invalid_argument("render: terrain grid does not match snapshot");

    Image img;
    img.width = grid.width * supersample;
    img.height = grid.height * supersample;
    img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3, 255);

    const double step = grid.resolution / supersample;
    const Rect ext = grid.extent();
    const double marker_radius = 0.75 * grid.resolution;
    const double goal_radius = 1.0 * grid.resolution;

    for (int py = 0; py < img.height; ++py) {
        // Top image row shows the northernmost cells.
        const double wy = ext.hi.y - (py + 0.5) * step;
        for (int px = 0; px < img.width; ++px) {
            const double wx = ext.lo.x + (px + 0.5) * step;
            const Vec2 p{wx, wy};
            const auto cell = grid.world_to_cell(p);
            const std::size_t idx = cell ? grid.index(*cell) : 0;

            std::array<std::uint8_t, 3> color = kWhite;
            if (terrain && cell)
                color = terrain->value(*cell) >= geom.threshold ? kWhite : kGray;

            if (geom.workspace.contains(p)) {
                for (const Polygon& obs : geom.obstacles) {
                    if (obs.contains(p)) {
                        color = kBlack;
                        break;
                    }
                }
            }
            if (cell && safe.test(idx)) color = kLightBlue;
            if (cell && frontier.test(idx)) color = kRed;
            if (geom.lfs && geom.lfs->size() >= 3 &&
                ring_contains(*geom.lfs, p))
                color = kGreen;
            if (geom.goal && distance(p, *geom.goal) <= goal_radius)
                color = kDarkBlue;
            if (geom.subgoal && distance(p, *geom.subgoal) <= marker_radius)
                color = kPurple;
            put(img, px, py, color);
        }
    }
    return img;
}

void write_ppm(const Image& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + path);
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              static_cast<std::streamsize>(image.rgb.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t fnv1a_hash(std::span<const std::uint8_t> bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const std::uint8_t b : bytes) {
        hash ^= b;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::uint64_t image_hash(const Image& image) {
    char header[64];
    std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", image.width,
                  image.height);
    std::uint64_t hash = 14695981039346656037ULL;
    for (const char* c = header; *c; ++c) {
        hash ^= static_cast<std::uint8_t>(*c);
        hash *= 1099511628211ULL;
    }
    for (const std::uint8_t b : image.rgb) {
        hash ^= b;
        hash *= 1099511628211ULL;
    }
    return hash;
}

}  // namespace saegt
