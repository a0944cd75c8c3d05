#pragma once

#include <vector>

#include "attn/segmentation.hpp"

namespace attn {

/// Spatiotemporal orientation of one slice region, in degrees.
/// 90 means no motion along the slice's spatial axis; values below 90 are
/// leftward/upward motion, above 90 rightward/downward.
struct RegionAngle {
    int region_id = 0;
    double phi_deg = 90.0;
};

/// Orientation of a region's trace on a spatiotemporal slice: the angle
/// between (c_first - c_last, h) and the positive spatial axis, where
/// c_first / c_last are the mean spatial coordinates of the region's pixels
/// in its lowest- and highest-t rows and h is the temporal extent in rows.
/// A single-row region (h == 0) carries no motion evidence and maps to 90.
RegionAngle spatiotemporal_angle(const Region& region, const LabelMap& label_map);

/// Angles for every region of every slice of an X-T or Y-T stack.
/// Result is indexed [slice][region_id].
std::vector<std::vector<RegionAngle>> angles_for_stack(
    const std::vector<Segmentation>& segmentations);

/// Debug rendering: per-pixel angle as gray level (90 deg -> mid-gray).
GrayImage render_angle_map(const std::vector<RegionAngle>& angles, const LabelMap& label_map);

}  // namespace attn
