#pragma once

#include <string>
#include <vector>

#include "attn/image.hpp"

namespace attn {

/// Manually marked object mask for one frame (>127 = object).
struct GroundTruth {
    int frame_index = 0;
    GrayImage mask;
};

struct RocPoint {
    double threshold = 0.0;
    double tp_rate = 0.0;
    double fp_rate = 0.0;
};

struct SelectionMetrics {
    double tp_rate = 0.0;
    double fp_rate = 0.0;
    bool gt_empty = false;  // tp_rate is defined as 1 on empty ground truth
};

/// Sweeps `levels` thresholds evenly spanning [0, 255] over a saliency map
/// with strict `>` comparison; pixels above the threshold are predicted as
/// object. Rates are non-increasing in the threshold.
std::vector<RocPoint> threshold_sweep(const GrayImage& saliency_map, const GrayImage& gt_mask,
                                      int levels);

/// Single-operating-point rates for a binary selection mask.
SelectionMetrics selection_metrics(const GrayImage& mask, const GrayImage& gt_mask);

/// Per-threshold mean of several per-frame sweeps (all with equal levels).
std::vector<RocPoint> mean_sweep(const std::vector<std::vector<RocPoint>>& sweeps);

/// Mean rates over per-frame metrics.
SelectionMetrics aggregate_metrics(const std::vector<SelectionMetrics>& per_frame);

/// Loads externally produced grayscale saliency maps (one per frame index)
/// for side-by-side sweeps. Missing files or mismatched dimensions throw.
std::vector<GrayImage> load_external_saliency(const std::string& directory,
                                              const std::string& pattern,
                                              const std::vector<int>& frame_indices,
                                              int expect_width, int expect_height);

void write_roc_csv(const std::string& path, const std::vector<RocPoint>& points);

/// Minimal ROC scatter/curve plot (FP rate on x, TP rate on y).
struct PlotSeries {
    std::string name;
    std::vector<RocPoint> curve;    // drawn as a polyline when non-empty
    std::vector<RocPoint> points;   // drawn as markers
};
void write_roc_svg(const std::string& path, const std::vector<PlotSeries>& series);

}  // namespace attn
