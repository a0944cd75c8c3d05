#include "attn/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "attn/errors.hpp"
#include "attn/volume.hpp"

namespace attn {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw Error("config key '" + key + "': expected an integer, got '" + value + "'");
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used == value.size()) return out;
    } catch (const std::exception&) {
    }
    throw Error("config key '" + key + "': expected a number, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "off" || value == "no") return false;
    throw Error("config key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

WeightMode parse_weight_mode(const std::string& name) {
    if (name == "linear") return WeightMode::LinearFalloff;
    if (name == "uniform") return WeightMode::Uniform;
    throw Error("unknown weight_mode '" + name + "' (expected linear or uniform)");
}

NoiseMode parse_noise_mode(const std::string& name) {
    if (name == "or") return NoiseMode::Or;
    if (name == "and") return NoiseMode::And;
    throw Error("unknown noise_mode '" + name + "' (expected or/and)");
}

std::string to_string(WeightMode mode) {
    return mode == WeightMode::LinearFalloff ? "linear" : "uniform";
}

std::string to_string(NoiseMode mode) { return mode == NoiseMode::Or ? "or" : "and"; }

void validate(const PipelineConfig& config) {
    if (config.volume_size < 2) throw Error("volume_size must be >= 2");
    if (config.frame_count == 0 || config.frame_count == 1) {
        throw Error("frame_count must be >= 2 (or negative to auto-detect)");
    }
    if (config.segmentation.seed_threshold < 0 || config.segmentation.border_threshold < 0) {
        throw Error("segmentation thresholds must be >= 0");
    }
    if (config.segmentation.min_region_size < 1) throw Error("min_region_size must be >= 1");
    if (config.grouping.tau <= 0) throw Error("tau must be > 0");
    if (config.grouping.sigma_xt < 0 || config.grouping.sigma_yt < 0) {
        throw Error("noise floors must be >= 0");
    }
    if (config.grouping.eta <= 0) throw Error("eta must be > 0");
    if (config.grouping.cycles < 0) throw Error("cycles must be >= 0");
    if (config.levels < 2) throw Error("levels must be >= 2");
    if (config.threads < 1) throw Error("threads must be >= 1");
    format_frame_name(config.frame_pattern, 0);  // throws on a bad pattern
    if (!config.gt_dir.empty()) format_frame_name(config.gt_pattern, 0);
}

KeyValues read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    KeyValues out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw Error(path + ":" + std::to_string(line_no) + ": empty key");
        }
        out[key] = value;
    }
    return out;
}

void apply_key_values(PipelineConfig& config, const KeyValues& values) {
    using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"input_dir", [](PipelineConfig& c, const std::string&, const std::string& v) { c.input_dir = v; }},
        {"frame_pattern", [](PipelineConfig& c, const std::string&, const std::string& v) { c.frame_pattern = v; }},
        {"frame_start", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.frame_start = parse_int(k, v); }},
        {"frame_count", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.frame_count = parse_int(k, v); }},
        {"gt_dir", [](PipelineConfig& c, const std::string&, const std::string& v) { c.gt_dir = v; }},
        {"gt_pattern", [](PipelineConfig& c, const std::string&, const std::string& v) { c.gt_pattern = v; }},
        {"out_dir", [](PipelineConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
        {"write_masks", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.write_masks = parse_bool(k, v); }},
        {"save_saliency", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.save_saliency = parse_bool(k, v); }},
        {"save_labels", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.save_labels = parse_bool(k, v); }},
        {"save_angles", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.save_angles = parse_bool(k, v); }},
        {"volume_size", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.volume_size = parse_int(k, v); }},
        {"seed_threshold", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.segmentation.seed_threshold = parse_double(k, v); }},
        {"border_threshold", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.segmentation.border_threshold = parse_double(k, v); }},
        {"min_region_size", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.segmentation.min_region_size = parse_int(k, v); }},
        {"weight_mode", [](PipelineConfig& c, const std::string&, const std::string& v) { c.saliency.weight_mode = parse_weight_mode(v); }},
        {"normalize_saliency", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.saliency.normalize_by_region_count = parse_bool(k, v); }},
        {"tau", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.grouping.tau = parse_double(k, v); }},
        {"sigma_xt", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.grouping.sigma_xt = parse_double(k, v); }},
        {"sigma_yt", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.grouping.sigma_yt = parse_double(k, v); }},
        {"eta", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.grouping.eta = parse_double(k, v); }},
        {"noise_mode", [](PipelineConfig& c, const std::string&, const std::string& v) { c.grouping.noise_mode = parse_noise_mode(v); }},
        {"cycles", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.grouping.cycles = parse_int(k, v); }},
        {"similarity_check", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.grouping.similarity_check = parse_bool(k, v); }},
        {"levels", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.levels = parse_int(k, v); }},
        {"threads", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.threads = parse_int(k, v); }},
        {"rng_seed", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.rng_seed = static_cast<std::uint32_t>(parse_int(k, v)); }},
    };
    for (const auto& [key, value] : values) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw Error("unknown config key '" + key + "'");
        it->second(config, key, value);
    }
}

std::string config_defaults_text() {
    const PipelineConfig d;
    std::ostringstream out;
    out << "# input\n"
        << "input_dir = " << d.input_dir << "\n"
        << "frame_pattern = " << d.frame_pattern << "\n"
        << "frame_start = " << d.frame_start << "\n"
        << "frame_count = " << d.frame_count << "\n"
        << "gt_dir = " << d.gt_dir << "\n"
        << "gt_pattern = " << d.gt_pattern << "\n"
        << "# output\n"
        << "out_dir = " << d.out_dir << "\n"
        << "write_masks = " << (d.write_masks ? "true" : "false") << "\n"
        << "save_saliency = " << (d.save_saliency ? "true" : "false") << "\n"
        << "save_labels = " << (d.save_labels ? "true" : "false") << "\n"
        << "save_angles = " << (d.save_angles ? "true" : "false") << "\n"
        << "# processing\n"
        << "volume_size = " << d.volume_size << "\n"
        << "seed_threshold = " << d.segmentation.seed_threshold << "\n"
        << "border_threshold = " << d.segmentation.border_threshold << "\n"
        << "min_region_size = " << d.segmentation.min_region_size << "\n"
        << "weight_mode = " << to_string(d.saliency.weight_mode) << "\n"
        << "normalize_saliency = " << (d.saliency.normalize_by_region_count ? "true" : "false")
        << "\n"
        << "tau = " << d.grouping.tau << "\n"
        << "sigma_xt = " << d.grouping.sigma_xt << "\n"
        << "sigma_yt = " << d.grouping.sigma_yt << "\n"
        << "eta = " << d.grouping.eta << "\n"
        << "noise_mode = " << to_string(d.grouping.noise_mode) << "\n"
        << "cycles = " << d.grouping.cycles << "\n"
        << "similarity_check = " << (d.grouping.similarity_check ? "true" : "false") << "\n"
        << "levels = " << d.levels << "\n"
        << "# execution\n"
        << "threads = " << d.threads << "\n"
        << "rng_seed = " << d.rng_seed << "\n";
    return out.str();
}

}  // namespace attn
