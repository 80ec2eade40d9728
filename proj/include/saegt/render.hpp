#ifndef SAEGT_RENDER_HPP_
#define SAEGT_RENDER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "saegt/grid.hpp"
#include "saegt/snapshot.hpp"
#include "saegt/terrain.hpp"

namespace saegt {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, top row first

    std::uint8_t* pixel(int px, int py) {
        return rgb.data() + 3 * (static_cast<std::size_t>(py) * width + px);
    }
};

// Rasterizes one snapshot at `supersample` pixels per cell edge. Layers,
// back to front: ground truth (white where f >= threshold, gray below;
// plain white when terrain is null), obstacles black, safe cells light
// blue, frontier cells red, local free space green, goal dark blue,
// subgoal purple.
Image render_snapshot(const GeomSnapshot& geom, const Grid& grid,
                      const CellMask& safe, const CellMask& frontier,
                      const TerrainGrid* terrain, int supersample = 4);

void write_ppm(const Image& image, const std::string& path);

std::uint64_t fnv1a_hash(std::span<const std::uint8_t> bytes);

// Hash of the PPM encoding of the image (the golden-image fingerprint).
std::uint64_t image_hash(const Image& image);

}  // namespace saegt

#endif  // SAEGT_RENDER_HPP_
