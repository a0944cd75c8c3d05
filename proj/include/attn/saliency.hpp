#pragma once

#include <vector>

#include "attn/motion.hpp"
#include "attn/segmentation.hpp"

namespace attn {

enum class WeightMode {
    LinearFalloff,  // w = 1 - d / d_diag
    Uniform,        // w = 1
};

struct SaliencyParams {
    WeightMode weight_mode = WeightMode::LinearFalloff;
    bool normalize_by_region_count = false;  // divide slice sums by (n - 1)
};

/// Per-region motion saliency for one spatiotemporal slice, indexed by id.
struct SliceSaliency {
    std::vector<double> values;
};

/// Per-region motion saliency for one X-Y frame, with suppression flags
/// used by inhibition of return.
struct FrameSaliency {
    int frame_index = 0;  // t within the volume
    std::vector<double> values;
    std::vector<bool> suppressed;
};

/// Contribution weight between two regions of the same slice: closer
/// centroids contribute more. Linear falloff over the slice diagonal,
/// clamped to [0, 1].
double distance_weight(const Region& a, const Region& b, int slice_width, int slice_height,
                       WeightMode mode = WeightMode::LinearFalloff);

/// Bottom-up motion saliency of every region on one slice: the sum over
/// all other regions of the angle difference (normalized by 180 degrees)
/// times the distance weight.
SliceSaliency motion_saliency(const Segmentation& slice_segmentation,
                              const std::vector<RegionAngle>& angles,
                              const SaliencyParams& params);

/// Back-projects spatiotemporal slice saliency into the X-Y frame t: every
/// member pixel of an X-Y region looks up the X-T slice at its row and the
/// Y-T slice at its column, and the region averages the two contributions.
FrameSaliency project_to_frame(int t, const Segmentation& xy_segmentation,
                               const std::vector<SliceSaliency>& xt_saliencies,
                               const std::vector<SliceSaliency>& yt_saliencies,
                               const std::vector<Segmentation>& xt_segmentations,
                               const std::vector<Segmentation>& yt_segmentations);

/// Region with the maximum saliency among non-suppressed regions; ties go
/// to the lowest id. Throws NoFoaError when everything is suppressed.
int select_foa(const FrameSaliency& frame_saliency);

/// Saliency rendered per pixel, scaled so the frame maximum maps to 255.
/// Suppressed regions render as 0; an all-zero frame stays black.
GrayImage render_saliency_map(const FrameSaliency& frame_saliency, const LabelMap& label_map);

}  // namespace attn
