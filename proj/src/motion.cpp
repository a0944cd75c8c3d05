#include "attn/motion.hpp"

#include <cmath>
#include <numbers>

namespace attn {

namespace {

// Mean x of the region's member pixels in one row. Rows can be ragged, so
// the mean is taken over the actual members, not the bbox span.
double row_center(const Region& region, const LabelMap& lm, int row) {
    double sum = 0.0;
    int count = 0;
    for (int x = region.left; x <= region.right; ++x) {
        if (lm.at(x, row) == region.id) {
            sum += x;
            ++count;
        }
    }
    return sum / count;  // every occupied row has >= 1 member pixel
}

}  // namespace

RegionAngle spatiotemporal_angle(const Region& region, const LabelMap& lm) {
    const int h = region.last_row() - region.first_row();
    if (h == 0) return {region.id, 90.0};
    const double c_first = row_center(region, lm, region.first_row());
    const double c_last = row_center(region, lm, region.last_row());
    const double dx = c_first - c_last;
    if (std::abs(dx) < 1e-9) return {region.id, 90.0};
    const double phi = std::atan2(static_cast<double>(h), dx) * 180.0 / std::numbers::pi;
    return {region.id, phi};
}

std::vector<std::vector<RegionAngle>> angles_for_stack(
    const std::vector<Segmentation>& segmentations) {
    std::vector<std::vector<RegionAngle>> out(segmentations.size());
    for (std::size_t s = 0; s < segmentations.size(); ++s) {
        const Segmentation& seg = segmentations[s];
        out[s].reserve(seg.regions.size());
        for (const Region& r : seg.regions) {
            out[s].push_back(spatiotemporal_angle(r, seg.label_map));
        }
    }
    return out;
}

GrayImage render_angle_map(const std::vector<RegionAngle>& angles, const LabelMap& lm) {
    GrayImage out(lm.width, lm.height);
    for (int y = 0; y < lm.height; ++y) {
        for (int x = 0; x < lm.width; ++x) {
            const double phi = angles[lm.at(x, y)].phi_deg;
            out.at(x, y) = static_cast<std::uint8_t>(std::lround(phi / 180.0 * 255.0));
        }
    }
    return out;
}

}  // namespace attn
