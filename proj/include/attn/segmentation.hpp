#pragma once

#include <cstdint>
#include <vector>

#include "attn/image.hpp"

namespace attn {

struct SegmentationParams {
    double seed_threshold = 40.0;    // max color distance candidate <-> region seed color
    double border_threshold = 25.0;  // max color distance candidate <-> adjacent border pixel
    int min_region_size = 8;         // smaller remnants merge into the most similar neighbor
};

/// A connected set of similarly colored pixels on one slice.
struct Region {
    int id = 0;
    int size = 0;
    int left = 0, top = 0, right = 0, bottom = 0;  // bounding box, inclusive
    double centroid_x = 0.0, centroid_y = 0.0;
    double mean_r = 0.0, mean_g = 0.0, mean_b = 0.0;
    std::vector<int> neighbors;  // sorted ids of 4-adjacent regions

    /// Lowest / highest second-axis coordinate occupied. On spatiotemporal
    /// slices the second axis is time.
    int first_row() const { return top; }
    int last_row() const { return bottom; }

    double color_distance_to(const Region& other) const;
};

/// Maps every slice position to a region id. Ids are compact (0..n-1),
/// assigned in raster order of first occurrence.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;  // row-major

    std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    std::int32_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
};

struct Segmentation {
    std::vector<Region> regions;  // regions[i].id == i
    LabelMap label_map;
};

/// Seeded region growing over 4-connectivity: a raster scan starts a new
/// region at every unlabeled pixel; a candidate joins when it is within
/// seed_threshold of the region's seed color and within border_threshold
/// of the region pixel it is reached from. Remnants below min_region_size
/// are merged into the neighbor with the closest mean color (ties to the
/// lowest id). Always yields a total partition with >= 1 region.
Segmentation segment_slice(const RgbImage& image, const SegmentationParams& params);

/// 4-adjacency sets: i and j are adjacent iff some pixel of i touches some
/// pixel of j horizontally or vertically. Symmetric, irreflexive, sorted.
std::vector<std::vector<int>> compute_adjacency(const LabelMap& label_map);

/// Recomputes the full region list (stats + adjacency) from a label map
/// with compact ids.
std::vector<Region> build_regions(const LabelMap& label_map, const RgbImage& image);

/// Debug rendering: each region id mapped to a deterministic pseudo-random
/// color.
RgbImage render_label_colors(const LabelMap& label_map, std::uint64_t seed = 0);

}  // namespace attn
