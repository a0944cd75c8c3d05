#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "attn/grouping.hpp"
#include "attn/saliency.hpp"
#include "attn/segmentation.hpp"

namespace attn {

/// Every knob of the full pipeline in one reproducible record. Defaults
/// are the reference operating point: volume_size 10, tau 44, sigma 10,
/// eta 1.5.
struct PipelineConfig {
    // input
    std::string input_dir;
    std::string frame_pattern = "frame_%04d.png";
    int frame_start = 0;
    int frame_count = -1;  // < 0: read consecutive files until the first gap
    std::string gt_dir;    // optional; enables selection metrics in the report
    std::string gt_pattern = "frame_%04d.png";

    // output
    std::string out_dir;
    bool write_masks = true;
    bool save_saliency = true;
    bool save_labels = false;
    bool save_angles = false;

    // processing
    int volume_size = 10;
    SegmentationParams segmentation;
    SaliencyParams saliency;
    GroupingParams grouping;
    int levels = 256;  // evaluation threshold count

    // execution (never part of reports; must not affect outputs)
    int threads = 1;
    std::uint32_t rng_seed = 1;  // debug renderings only
};

/// Throws attn::Error on out-of-range values or an invalid frame pattern.
void validate(const PipelineConfig& config);

using KeyValues = std::map<std::string, std::string>;

/// Parses a flat `key = value` file. '#' starts a comment, blank lines are
/// skipped, whitespace around keys and values is trimmed.
KeyValues read_key_value_file(const std::string& path);

/// Applies file values onto a config. Unknown keys and unparsable values
/// throw, naming the key.
void apply_key_values(PipelineConfig& config, const KeyValues& values);

/// The full default config in key=value form (reproducible-record schema).
std::string config_defaults_text();

WeightMode parse_weight_mode(const std::string& name);
NoiseMode parse_noise_mode(const std::string& name);
std::string to_string(WeightMode mode);
std::string to_string(NoiseMode mode);

}  // namespace attn
