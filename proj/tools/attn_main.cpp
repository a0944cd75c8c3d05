// Command-line front end: synth / segment / saliency / select / run /
// evaluate subcommands over the attn_core library.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "attn/config.hpp"
#include "attn/errors.hpp"
#include "attn/image_io.hpp"
#include "attn/pipeline.hpp"
#include "attn/segmentation.hpp"
#include "attn/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

/// Collects pipeline options for one subcommand. Values resolve in layers:
/// built-in defaults, then the --config file, then explicitly passed flags.
struct PipelineCli {
    attn::PipelineConfig staging;  // parse target for the flags
    std::string config_path;
    std::string weight_mode = attn::to_string(attn::SaliencyParams{}.weight_mode);
    std::string noise_mode = attn::to_string(attn::GroupingParams{}.noise_mode);
    std::vector<std::pair<CLI::Option*, std::function<void(attn::PipelineConfig&)>>> overrides;

    void track(CLI::Option* option, std::function<void(attn::PipelineConfig&)> apply) {
        overrides.emplace_back(option, std::move(apply));
    }

    void add_common(CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file");
        track(sub->add_option("--input", staging.input_dir, "frame directory"),
              [this](attn::PipelineConfig& c) { c.input_dir = staging.input_dir; });
        track(sub->add_option("--pattern", staging.frame_pattern,
                              "frame filename pattern (printf-style, one %0Nd)"),
              [this](attn::PipelineConfig& c) { c.frame_pattern = staging.frame_pattern; });
        track(sub->add_option("--start", staging.frame_start, "first frame index"),
              [this](attn::PipelineConfig& c) { c.frame_start = staging.frame_start; });
        track(sub->add_option("--count", staging.frame_count,
                              "frame count (negative: until first gap)"),
              [this](attn::PipelineConfig& c) { c.frame_count = staging.frame_count; });
        track(sub->add_option("--gt", staging.gt_dir, "ground-truth mask directory (optional)"),
              [this](attn::PipelineConfig& c) { c.gt_dir = staging.gt_dir; });
        track(sub->add_option("--gt-pattern", staging.gt_pattern, "ground-truth filename pattern"),
              [this](attn::PipelineConfig& c) { c.gt_pattern = staging.gt_pattern; });
        track(sub->add_option("--out", staging.out_dir, "output directory"),
              [this](attn::PipelineConfig& c) { c.out_dir = staging.out_dir; });
        track(sub->add_option("--volume", staging.volume_size, "frames per volume"),
              [this](attn::PipelineConfig& c) { c.volume_size = staging.volume_size; });
        track(sub->add_option("--seed-threshold", staging.segmentation.seed_threshold,
                              "segmentation: max distance to the region seed color"),
              [this](attn::PipelineConfig& c) {
                  c.segmentation.seed_threshold = staging.segmentation.seed_threshold;
              });
        track(sub->add_option("--border-threshold", staging.segmentation.border_threshold,
                              "segmentation: max distance to the touching border pixel"),
              [this](attn::PipelineConfig& c) {
                  c.segmentation.border_threshold = staging.segmentation.border_threshold;
              });
        track(sub->add_option("--min-region", staging.segmentation.min_region_size,
                              "segmentation: merge regions smaller than this"),
              [this](attn::PipelineConfig& c) {
                  c.segmentation.min_region_size = staging.segmentation.min_region_size;
              });
        track(sub->add_option("--weight-mode", weight_mode, "saliency weight: linear|uniform")
                  ->check(CLI::IsMember({"linear", "uniform"})),
              [this](attn::PipelineConfig& c) {
                  c.saliency.weight_mode = attn::parse_weight_mode(weight_mode);
              });
        track(sub->add_flag("--normalize-saliency", staging.saliency.normalize_by_region_count,
                            "divide slice saliency by the region count"),
              [this](attn::PipelineConfig& c) {
                  c.saliency.normalize_by_region_count = true;
              });
        track(sub->add_option("--tau", staging.grouping.tau,
                              "grouping: max signature distance to the seed"),
              [this](attn::PipelineConfig& c) { c.grouping.tau = staging.grouping.tau; });
        track(sub->add_option("--sigma-xt", staging.grouping.sigma_xt,
                              "grouping: horizontal noise floor (degrees)"),
              [this](attn::PipelineConfig& c) { c.grouping.sigma_xt = staging.grouping.sigma_xt; });
        track(sub->add_option("--sigma-yt", staging.grouping.sigma_yt,
                              "grouping: vertical noise floor (degrees)"),
              [this](attn::PipelineConfig& c) { c.grouping.sigma_yt = staging.grouping.sigma_yt; });
        track(sub->add_option("--eta", staging.grouping.eta,
                              "grouping: max growth vs the largest previous object"),
              [this](attn::PipelineConfig& c) { c.grouping.eta = staging.grouping.eta; });
        track(sub->add_option("--noise-mode", noise_mode, "noise floor on both axes: or|and")
                  ->check(CLI::IsMember({"or", "and"})),
              [this](attn::PipelineConfig& c) {
                  c.grouping.noise_mode = attn::parse_noise_mode(noise_mode);
              });
        track(sub->add_option("--cycles", staging.grouping.cycles,
                              "objects to select per frame"),
              [this](attn::PipelineConfig& c) { c.grouping.cycles = staging.grouping.cycles; });
        track(sub->add_flag("--no-similarity", "disable the signature-distance growth test"),
              [](attn::PipelineConfig& c) { c.grouping.similarity_check = false; });
        track(sub->add_option("--levels", staging.levels, "evaluation threshold count"),
              [this](attn::PipelineConfig& c) { c.levels = staging.levels; });
        track(sub->add_option("--threads,-j", staging.threads, "worker cap"),
              [this](attn::PipelineConfig& c) { c.threads = staging.threads; });
        track(sub->add_option("--rng-seed", staging.rng_seed, "seed for debug renderings"),
              [this](attn::PipelineConfig& c) { c.rng_seed = staging.rng_seed; });
        track(sub->add_flag("--save-labels", "write colored label maps"),
              [](attn::PipelineConfig& c) { c.save_labels = true; });
        track(sub->add_flag("--save-angles", "write per-frame signature angle maps"),
              [](attn::PipelineConfig& c) { c.save_angles = true; });
    }

    attn::PipelineConfig resolve() const {
        attn::PipelineConfig config;
        if (!config_path.empty()) {
            attn::apply_key_values(config, attn::read_key_value_file(config_path));
        }
        for (const auto& [option, apply] : overrides) {
            if (option->count() > 0) apply(config);
        }
        return config;
    }
};

int run_synth(const std::string& spec_path, const std::string& out_dir) {
    const attn::SceneSpec spec = attn::scene_spec_from_json_file(spec_path);
    const attn::Scene scene = attn::generate_scene(spec);
    attn::write_scene(scene, out_dir);
    // Echo the normalized spec next to the frames as a reproducibility record.
    std::ofstream echo(fs::path(out_dir) / "scene.json", std::ios::binary);
    if (!echo) throw attn::Error("cannot write scene.json under '" + out_dir + "'");
    echo << attn::scene_spec_to_json(spec);
    std::cout << "wrote " << scene.frames.size() << " frames to " << out_dir << "\n";
    return 0;
}

int run_segment(const std::string& image_path, const std::string& out_dir,
                const attn::SegmentationParams& params, std::uint32_t rng_seed) {
    const attn::RgbImage image = attn::read_image(image_path);
    const attn::Segmentation seg = attn::segment_slice(image, params);
    fs::create_directories(out_dir);
    attn::write_png((fs::path(out_dir) / "labels.png").string(),
                    attn::render_label_colors(seg.label_map, rng_seed));
    json j;
    j["width"] = image.width();
    j["height"] = image.height();
    j["regions"] = json::array();
    for (const attn::Region& r : seg.regions) {
        j["regions"].push_back({{"id", r.id},
                                {"size", r.size},
                                {"bbox", {r.left, r.top, r.right, r.bottom}},
                                {"centroid", {r.centroid_x, r.centroid_y}},
                                {"mean_color", {r.mean_r, r.mean_g, r.mean_b}},
                                {"neighbors", r.neighbors}});
    }
    std::ofstream out(fs::path(out_dir) / "regions.json", std::ios::binary);
    if (!out) throw attn::Error("cannot write regions.json under '" + out_dir + "'");
    out << j.dump(2) << "\n";
    std::cout << seg.regions.size() << " regions -> " << out_dir << "\n";
    return 0;
}

int run_stage(const PipelineCli& cli, const char* stage) {
    attn::PipelineConfig config = cli.resolve();
    if (std::string(stage) == "saliency") {
        config.grouping.cycles = 0;  // saliency maps only
        config.write_masks = false;
        config.save_saliency = true;
    } else if (std::string(stage) == "select") {
        config.write_masks = true;
        config.save_saliency = false;
    }
    const attn::RunReport report = attn::run_pipeline(config);
    std::cout << "processed " << report.frames_processed << " frames in "
              << report.volumes.size() << " volume(s)";
    if (report.has_metrics) {
        std::cout << "; tp_rate=" << report.aggregate_metrics.tp_rate
                  << " fp_rate=" << report.aggregate_metrics.fp_rate;
    }
    std::cout << "\n";
    return 0;
}

int run_evaluate(const attn::EvaluateOptions& options) {
    const attn::EvaluationResult result = attn::evaluate_run(options);
    std::cout << "frames=" << result.frame_indices.size()
              << " tp_rate=" << result.selection.tp_rate
              << " fp_rate=" << result.selection.fp_rate << "\n";
    for (const attn::PlotSeries& s : result.curves) {
        std::cout << "curve " << s.name << ": " << s.curve.size() << " thresholds\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Region-based motion saliency and perceptual grouping for image sequences"};
    app.set_version_flag("--version", [] {
        return std::string("attn ") + kVersion + "\n\ndefault configuration:\n" +
               attn::config_defaults_text();
    });
    app.require_subcommand(0, 1);

    // synth
    auto* synth = app.add_subcommand("synth", "render a synthetic scene plus ground truth");
    std::string synth_spec, synth_out;
    synth->add_option("--spec", synth_spec, "scene description (JSON)")->required();
    synth->add_option("--out", synth_out, "output directory")->required();

    // segment
    auto* segment = app.add_subcommand("segment", "segment a single image into regions");
    std::string segment_image, segment_out;
    attn::SegmentationParams segment_params;
    std::uint32_t segment_seed = 1;
    segment->add_option("--image", segment_image, "input image (PNG or PPM)")->required();
    segment->add_option("--out", segment_out, "output directory")->required();
    segment->add_option("--seed-threshold", segment_params.seed_threshold,
                        "max distance to the region seed color");
    segment->add_option("--border-threshold", segment_params.border_threshold,
                        "max distance to the touching border pixel");
    segment->add_option("--min-region", segment_params.min_region_size,
                        "merge regions smaller than this");
    segment->add_option("--rng-seed", segment_seed, "label color seed");

    // pipeline stages
    auto* saliency = app.add_subcommand("saliency", "compute per-frame saliency maps");
    PipelineCli saliency_cli;
    saliency_cli.add_common(saliency);

    auto* select = app.add_subcommand("select", "select and group moving objects");
    PipelineCli select_cli;
    select_cli.add_common(select);

    auto* run = app.add_subcommand("run", "full pipeline: saliency, selection, report");
    PipelineCli run_cli;
    run_cli.add_common(run);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score selections against ground truth");
    attn::EvaluateOptions eval_options;
    std::vector<std::string> eval_saliency_args;
    evaluate->add_option("--selections", eval_options.selections_dir,
                         "directory with sel_f*_c*.png masks")
        ->required();
    evaluate->add_option("--gt", eval_options.gt_dir, "ground-truth mask directory")->required();
    evaluate->add_option("--gt-pattern", eval_options.gt_pattern, "ground-truth filename pattern");
    evaluate->add_option("--saliency", eval_saliency_args,
                         "name=dir of per-frame saliency maps to sweep (repeatable)");
    evaluate->add_option("--saliency-pattern", eval_options.saliency_pattern,
                         "saliency map filename pattern");
    evaluate->add_option("--out", eval_options.out_dir, "output directory for metrics/plots");
    evaluate->add_option("--levels", eval_options.levels, "threshold count");

    try {
        app.parse(argc, argv);

        if (synth->parsed()) return run_synth(synth_spec, synth_out);
        if (segment->parsed()) {
            return run_segment(segment_image, segment_out, segment_params, segment_seed);
        }
        if (saliency->parsed()) return run_stage(saliency_cli, "saliency");
        if (select->parsed()) return run_stage(select_cli, "select");
        if (run->parsed()) return run_stage(run_cli, "run");
        if (evaluate->parsed()) {
            for (const std::string& arg : eval_saliency_args) {
                const auto eq = arg.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
                    std::cerr << "error: --saliency expects name=dir, got '" << arg << "'\n";
                    return 1;
                }
                eval_options.saliency_dirs.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
            }
            return run_evaluate(eval_options);
        }

        std::cout << app.help();
        return 1;  // no subcommand given
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const attn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
