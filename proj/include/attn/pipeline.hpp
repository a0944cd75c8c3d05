#pragma once

#include <string>
#include <vector>

#include "attn/config.hpp"
#include "attn/evaluation.hpp"
#include "attn/grouping.hpp"

namespace attn {

/// One object selection as recorded in the run report.
struct SelectionRecord {
    int frame_index = 0;
    int cycle = 0;
    int foa_region = -1;
    std::vector<int> members;
    long long size = 0;
    int left = 0, top = 0, right = 0, bottom = 0;
};

struct FrameRecord {
    int frame_index = 0;   // global sequence index
    int volume_index = 0;
    int t = 0;             // position within the volume
    int region_count = 0;  // X-Y segmentation of this frame
    std::vector<SelectionRecord> selections;
};

struct VolumeRecord {
    int volume_index = 0;
    int start_frame = 0;  // global index of the first frame
    int frame_count = 0;
};

struct FrameMetrics {
    int frame_index = 0;
    SelectionMetrics metrics;
};

/// Everything a run produced, kept in memory so callers can evaluate or
/// inspect without re-reading artifacts. Serialized reports contain only
/// algorithm parameters and results — nothing execution-dependent — so two
/// runs with the same inputs and parameters serialize byte-identically.
struct RunReport {
    int width = 0;
    int height = 0;
    int frames_processed = 0;
    PipelineConfig config;
    std::vector<VolumeRecord> volumes;
    std::vector<FrameRecord> frames;
    std::vector<ObjectSelection> selections;  // with pixel masks

    bool has_metrics = false;  // set when ground truth was supplied
    std::vector<FrameMetrics> frame_metrics;
    SelectionMetrics aggregate_metrics;
};

std::string report_to_json(const RunReport& report);

/// Loads frames, processes every volume window (slice, segment, angles,
/// saliency, grouping with inhibition-of-return cycles), writes artifacts
/// under config.out_dir (masks/, saliency/, report.json, optional debug
/// maps) and returns the in-memory report. Stage timings go to stderr.
RunReport run_pipeline(const PipelineConfig& config);

/// Per-frame selection mask filename: union of members of one cycle.
std::string selection_mask_name(int frame_index, int cycle);

/// Frame index / cycle pairs found for masks named by selection_mask_name
/// in a directory, sorted. Throws when the directory cannot be read.
std::vector<std::pair<int, int>> scan_selection_masks(const std::string& directory);

struct EvaluateOptions {
    std::string selections_dir;  // masks written by the pipeline
    std::string gt_dir;
    std::string gt_pattern = "frame_%04d.png";
    // Named directories of per-frame grayscale saliency maps to sweep
    // alongside the selections (e.g. this.pipeline's saliency/, or maps
    // from other methods). Each uses saliency_pattern.
    std::vector<std::pair<std::string, std::string>> saliency_dirs;
    std::string saliency_pattern = "sal_f%04d.png";
    std::string out_dir;
    int levels = 256;
};

struct EvaluationResult {
    std::vector<int> frame_indices;
    SelectionMetrics selection;                  // aggregate over frames
    std::vector<FrameMetrics> per_frame;
    std::vector<PlotSeries> curves;              // one mean ROC per saliency dir
};

/// Compares selection masks (and optional saliency map sets) against
/// ground truth: per-frame operating points, aggregate rates, and one mean
/// ROC curve per saliency directory. Writes metrics.json, roc_<name>.csv
/// and roc.svg under out_dir. The evaluated frame set is taken from the
/// selection masks and must exactly match the ground-truth directory.
EvaluationResult evaluate_run(const EvaluateOptions& options);

}  // namespace attn
