#include "attn/saliency.hpp"

#include <algorithm>
#include <cmath>

#include "attn/errors.hpp"

namespace attn {

double distance_weight(const Region& a, const Region& b, int slice_width, int slice_height,
                       WeightMode mode) {
    if (mode == WeightMode::Uniform) return 1.0;
    const double dx = a.centroid_x - b.centroid_x;
    const double dy = a.centroid_y - b.centroid_y;
    const double d = std::sqrt(dx * dx + dy * dy);
    const double diag = std::sqrt(double(slice_width) * slice_width +
                                  double(slice_height) * slice_height);
    return std::clamp(1.0 - d / diag, 0.0, 1.0);
}

SliceSaliency motion_saliency(const Segmentation& seg, const std::vector<RegionAngle>& angles,
                              const SaliencyParams& params) {
    const int n = static_cast<int>(seg.regions.size());
    const int w = seg.label_map.width, h = seg.label_map.height;
    SliceSaliency out;
    out.values.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double diff = std::abs(angles[i].phi_deg - angles[j].phi_deg) / 180.0;
            sum += diff * distance_weight(seg.regions[i], seg.regions[j], w, h,
                                          params.weight_mode);
        }
        if (params.normalize_by_region_count && n > 1) sum /= (n - 1);
        out.values[i] = sum;
    }
    return out;
}

FrameSaliency project_to_frame(int t, const Segmentation& xy_seg,
                               const std::vector<SliceSaliency>& xt_sal,
                               const std::vector<SliceSaliency>& yt_sal,
                               const std::vector<Segmentation>& xt_segs,
                               const std::vector<Segmentation>& yt_segs) {
    FrameSaliency out;
    out.frame_index = t;
    out.values.assign(xy_seg.regions.size(), 0.0);
    out.suppressed.assign(xy_seg.regions.size(), false);
    for (const Region& r : xy_seg.regions) {
        double sum = 0.0;
        for (int pos_y = r.top; pos_y <= r.bottom; ++pos_y) {
            const LabelMap& xt_lm = xt_segs[pos_y].label_map;
            for (int pos_x = r.left; pos_x <= r.right; ++pos_x) {
                if (xy_seg.label_map.at(pos_x, pos_y) != r.id) continue;
                const int index_xt = xt_lm.at(pos_x, t);
                const int index_yt = yt_segs[pos_x].label_map.at(pos_y, t);
                sum += xt_sal[pos_y].values[index_xt] + yt_sal[pos_x].values[index_yt];
            }
        }
        out.values[r.id] = sum * 0.5 / r.size;
    }
    return out;
}

int select_foa(const FrameSaliency& fs) {
    int best = -1;
    double best_value = 0.0;
    for (std::size_t i = 0; i < fs.values.size(); ++i) {
        if (fs.suppressed[i]) continue;
        if (best < 0 || fs.values[i] > best_value) {
            best = static_cast<int>(i);
            best_value = fs.values[i];
        }
    }
    if (best < 0) throw NoFoaError();
    return best;
}

GrayImage render_saliency_map(const FrameSaliency& fs, const LabelMap& lm) {
    double max_value = 0.0;
    for (std::size_t i = 0; i < fs.values.size(); ++i) {
        if (!fs.suppressed[i]) max_value = std::max(max_value, fs.values[i]);
    }
    GrayImage out(lm.width, lm.height, 0);
    if (max_value <= 0.0) return out;
    for (int y = 0; y < lm.height; ++y) {
        for (int x = 0; x < lm.width; ++x) {
            const int id = lm.at(x, y);
            const double v = fs.suppressed[id] ? 0.0 : fs.values[id];
            out.at(x, y) = static_cast<std::uint8_t>(std::lround(v / max_value * 255.0));
        }
    }
    return out;
}

}  // namespace attn
