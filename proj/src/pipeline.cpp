#include "attn/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>

#include <json.hpp>

#include "attn/errors.hpp"
#include "attn/image_io.hpp"
#include "attn/motion.hpp"
#include "attn/parallel.hpp"
#include "attn/volume.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace attn {

namespace {

using Clock = std::chrono::steady_clock;

struct StageTimes {
    double load = 0, segment = 0, angles = 0, saliency = 0, grouping = 0, io = 0;
};

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct VolumeProducts {
    std::vector<Segmentation> xy_segs;                      // per t
    std::vector<FrameSaliency> raw_saliency;                // per t, before IOR
    std::vector<std::vector<MotionSignature>> signatures;   // per t, per region
    std::vector<std::vector<ObjectSelection>> selections;   // per t, per cycle
};

VolumeProducts process_volume(const FrameVolume& volume, const PipelineConfig& config,
                              StageTimes& times) {
    const int width = volume.width();
    const int height = volume.height();
    const int depth = volume.depth();

    auto tick = Clock::now();
    const SliceStack xy = extract_slices(volume, SliceAxis::XY);
    const SliceStack xt = extract_slices(volume, SliceAxis::XT);
    const SliceStack yt = extract_slices(volume, SliceAxis::YT);

    VolumeProducts out;
    out.xy_segs.resize(depth);
    std::vector<Segmentation> xt_segs(height);
    std::vector<Segmentation> yt_segs(width);
    parallel_for(depth, config.threads,
                 [&](int i) { out.xy_segs[i] = segment_slice(xy.slices[i], config.segmentation); });
    parallel_for(height, config.threads,
                 [&](int i) { xt_segs[i] = segment_slice(xt.slices[i], config.segmentation); });
    parallel_for(width, config.threads,
                 [&](int i) { yt_segs[i] = segment_slice(yt.slices[i], config.segmentation); });
    times.segment += ms_since(tick);

    tick = Clock::now();
    const std::vector<std::vector<RegionAngle>> xt_angles = angles_for_stack(xt_segs);
    const std::vector<std::vector<RegionAngle>> yt_angles = angles_for_stack(yt_segs);
    times.angles += ms_since(tick);

    tick = Clock::now();
    std::vector<SliceSaliency> xt_sal(height);
    std::vector<SliceSaliency> yt_sal(width);
    parallel_for(height, config.threads, [&](int i) {
        xt_sal[i] = motion_saliency(xt_segs[i], xt_angles[i], config.saliency);
    });
    parallel_for(width, config.threads, [&](int i) {
        yt_sal[i] = motion_saliency(yt_segs[i], yt_angles[i], config.saliency);
    });

    out.raw_saliency.resize(depth);
    out.signatures.resize(depth);
    parallel_for(depth, config.threads, [&](int t) {
        out.raw_saliency[t] =
            project_to_frame(t, out.xy_segs[t], xt_sal, yt_sal, xt_segs, yt_segs);
        const std::vector<Region>& regions = out.xy_segs[t].regions;
        out.signatures[t].resize(regions.size());
        for (std::size_t r = 0; r < regions.size(); ++r) {
            out.signatures[t][r] = average_motion_signature(
                regions[r], t, out.xy_segs[t].label_map, xt_angles, xt_segs, yt_angles, yt_segs);
        }
    });
    times.saliency += ms_since(tick);

    // Grouping runs frames in order: the size-growth bound compares each
    // frame's object against the largest one seen earlier in the volume.
    tick = Clock::now();
    out.selections.resize(depth);
    std::vector<std::optional<long long>> max_prev_sizes(
        static_cast<std::size_t>(std::max(config.grouping.cycles, 0)));
    for (int t = 0; t < depth; ++t) {
        FrameContext ctx;
        ctx.t = t;
        ctx.frame_index = volume.frame_index(t);
        ctx.xy_segmentation = &out.xy_segs[t];
        ctx.signatures = out.signatures[t];
        ctx.saliency = out.raw_saliency[t];
        out.selections[t] = select_objects(ctx, max_prev_sizes, config.grouping);
    }
    times.grouping += ms_since(tick);
    return out;
}

std::string two_index_name(const char* prefix, int frame_index, int cycle) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%s_f%04d_c%d.png", prefix, frame_index, cycle);
    return buffer;
}

/// Gray rendering of one signature component per region (angle / 180 * 255).
GrayImage render_signature_map(const std::vector<MotionSignature>& signatures,
                               const LabelMap& label_map, bool horizontal) {
    GrayImage out(label_map.width, label_map.height, 0);
    for (int y = 0; y < label_map.height; ++y) {
        for (int x = 0; x < label_map.width; ++x) {
            const MotionSignature& s = signatures[label_map.at(x, y)];
            const double phi = horizontal ? s.h_phi : s.v_phi;
            out.at(x, y) = static_cast<std::uint8_t>(std::lround(phi / 180.0 * 255.0));
        }
    }
    return out;
}

json parameters_to_json(const PipelineConfig& c) {
    json p;
    p["volume_size"] = c.volume_size;
    p["seed_threshold"] = c.segmentation.seed_threshold;
    p["border_threshold"] = c.segmentation.border_threshold;
    p["min_region_size"] = c.segmentation.min_region_size;
    p["weight_mode"] = to_string(c.saliency.weight_mode);
    p["normalize_saliency"] = c.saliency.normalize_by_region_count;
    p["tau"] = c.grouping.tau;
    p["sigma_xt"] = c.grouping.sigma_xt;
    p["sigma_yt"] = c.grouping.sigma_yt;
    p["eta"] = c.grouping.eta;
    p["noise_mode"] = to_string(c.grouping.noise_mode);
    p["cycles"] = c.grouping.cycles;
    p["similarity_check"] = c.grouping.similarity_check;
    p["levels"] = c.levels;
    p["rng_seed"] = c.rng_seed;
    return p;
}

json metrics_to_json(const SelectionMetrics& m) {
    json j;
    j["tp_rate"] = m.tp_rate;
    j["fp_rate"] = m.fp_rate;
    j["gt_empty"] = m.gt_empty;
    return j;
}

GrayImage union_mask(const std::vector<const GrayImage*>& masks, int width, int height) {
    GrayImage out(width, height, 0);
    for (const GrayImage* m : masks) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                if (m->at(x, y) > 127) out.at(x, y) = 255;
            }
        }
    }
    return out;
}

/// Converts a printf-style frame pattern into a regex with one numeric
/// capture group, for directory scans.
std::regex pattern_to_regex(const std::string& pattern) {
    format_frame_name(pattern, 0);  // validates: exactly one %[0-9]*d
    std::string re;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const char ch = pattern[i];
        if (ch == '%') {
            while (i + 1 < pattern.size() && pattern[i + 1] != 'd') ++i;
            ++i;  // consume 'd'
            re += "([0-9]+)";
        } else if (std::string("\\^$.|?*+()[]{}").find(ch) != std::string::npos) {
            re += '\\';
            re += ch;
        } else {
            re += ch;
        }
    }
    return std::regex("^" + re + "$");
}

std::vector<int> scan_pattern_indices(const std::string& directory, const std::string& pattern) {
    if (!fs::is_directory(directory)) {
        throw Error("'" + directory + "' is not a readable directory");
    }
    const std::regex re = pattern_to_regex(pattern);
    std::set<int> indices;
    for (const fs::directory_entry& entry : fs::directory_iterator(directory)) {
        std::smatch match;
        const std::string name = entry.path().filename().string();
        if (std::regex_match(name, match, re)) indices.insert(std::stoi(match[1].str()));
    }
    return {indices.begin(), indices.end()};
}

std::string joined(const std::vector<int>& values, std::size_t limit = 8) {
    std::string out;
    for (std::size_t i = 0; i < values.size() && i < limit; ++i) {
        if (i) out += ", ";
        out += std::to_string(values[i]);
    }
    if (values.size() > limit) out += ", ...";
    return out;
}

}  // namespace

std::string selection_mask_name(int frame_index, int cycle) {
    return two_index_name("sel", frame_index, cycle);
}

std::vector<std::pair<int, int>> scan_selection_masks(const std::string& directory) {
    if (!fs::is_directory(directory)) {
        throw Error("'" + directory + "' is not a readable directory");
    }
    static const std::regex re("^sel_f([0-9]+)_c([0-9]+)\\.png$");
    std::vector<std::pair<int, int>> out;
    for (const fs::directory_entry& entry : fs::directory_iterator(directory)) {
        std::smatch match;
        const std::string name = entry.path().filename().string();
        if (std::regex_match(name, match, re)) {
            out.emplace_back(std::stoi(match[1].str()), std::stoi(match[2].str()));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string report_to_json(const RunReport& report) {
    json j;
    j["input"] = {{"width", report.width},
                  {"height", report.height},
                  {"frames_processed", report.frames_processed}};
    j["parameters"] = parameters_to_json(report.config);
    j["volumes"] = json::array();
    for (const VolumeRecord& v : report.volumes) {
        j["volumes"].push_back({{"index", v.volume_index},
                                {"start_frame", v.start_frame},
                                {"frame_count", v.frame_count}});
    }
    j["frames"] = json::array();
    for (const FrameRecord& f : report.frames) {
        json jf;
        jf["frame"] = f.frame_index;
        jf["volume"] = f.volume_index;
        jf["t"] = f.t;
        jf["regions"] = f.region_count;
        jf["selections"] = json::array();
        for (const SelectionRecord& s : f.selections) {
            jf["selections"].push_back({{"cycle", s.cycle},
                                        {"foa", s.foa_region},
                                        {"members", s.members},
                                        {"size", s.size},
                                        {"bbox", {s.left, s.top, s.right, s.bottom}}});
        }
        j["frames"].push_back(std::move(jf));
    }
    if (report.has_metrics) {
        json m;
        m["aggregate"] = metrics_to_json(report.aggregate_metrics);
        m["frames"] = json::array();
        for (const FrameMetrics& fm : report.frame_metrics) {
            json jm = metrics_to_json(fm.metrics);
            jm["frame"] = fm.frame_index;
            m["frames"].push_back(std::move(jm));
        }
        j["metrics"] = std::move(m);
    }
    return j.dump(2) + "\n";
}

RunReport run_pipeline(const PipelineConfig& config) {
    validate(config);
    if (config.input_dir.empty()) throw Error("input_dir is required");

    StageTimes times;
    const auto run_start = Clock::now();
    auto tick = Clock::now();
    std::vector<Frame> frames =
        load_frames(config.input_dir, config.frame_pattern, config.frame_start,
                    config.frame_count);
    const auto windows = volume_windows(static_cast<int>(frames.size()), config.volume_size);
    if (windows.empty()) {
        throw Error("need at least 2 frames to form a volume, got " +
                    std::to_string(frames.size()));
    }

    RunReport report;
    report.config = config;
    report.width = frames.front().image.width();
    report.height = frames.front().image.height();

    // All reference masks load up front: a broken ground-truth set must not
    // leave partial outputs behind.
    std::vector<GrayImage> gt_masks;
    if (!config.gt_dir.empty()) {
        for (const VolumeWindow& w : windows) {
            for (int t = 0; t < w.count; ++t) {
                const int index = frames[w.start + t].index;
                const fs::path path =
                    fs::path(config.gt_dir) / format_frame_name(config.gt_pattern, index);
                GrayImage gt = read_gray(path.string());
                if (gt.width() != report.width || gt.height() != report.height) {
                    throw Error("ground truth '" + path.string() + "' is " +
                                std::to_string(gt.width()) + "x" + std::to_string(gt.height()) +
                                ", frames are " + std::to_string(report.width) + "x" +
                                std::to_string(report.height));
                }
                gt_masks.push_back(std::move(gt));
            }
        }
    }
    times.load += ms_since(tick);

    fs::path out_root;
    const bool writing = !config.out_dir.empty();
    if (writing) {
        out_root = config.out_dir;
        fs::create_directories(out_root);
        if (config.write_masks && config.grouping.cycles > 0) {
            fs::create_directories(out_root / "masks");
        }
        if (config.save_saliency) fs::create_directories(out_root / "saliency");
        if (config.save_labels) fs::create_directories(out_root / "labels");
        if (config.save_angles) fs::create_directories(out_root / "angles");
    }

    std::size_t gt_cursor = 0;
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        const VolumeWindow& w = windows[wi];
        std::vector<Frame> volume_frames(frames.begin() + w.start,
                                         frames.begin() + w.start + w.count);
        const FrameVolume volume = FrameVolume::from_frames(std::move(volume_frames));
        VolumeProducts products = process_volume(volume, config, times);

        report.volumes.push_back(
            {static_cast<int>(wi), volume.frame_index(0), volume.depth()});

        auto io_tick = Clock::now();
        for (int t = 0; t < volume.depth(); ++t) {
            const int frame_index = volume.frame_index(t);
            if (writing) {
                if (config.save_saliency) {
                    write_png((out_root / "saliency" /
                               format_frame_name("sal_f%04d.png", frame_index))
                                  .string(),
                              render_saliency_map(products.raw_saliency[t],
                                                  products.xy_segs[t].label_map));
                }
                if (config.write_masks) {
                    for (const ObjectSelection& sel : products.selections[t]) {
                        write_png((out_root / "masks" /
                                   selection_mask_name(frame_index, sel.cycle))
                                      .string(),
                                  sel.mask);
                    }
                }
                if (config.save_labels) {
                    write_png((out_root / "labels" /
                               format_frame_name("xy_f%04d.png", frame_index))
                                  .string(),
                              render_label_colors(products.xy_segs[t].label_map,
                                                  config.rng_seed));
                }
                if (config.save_angles) {
                    const LabelMap& lm = products.xy_segs[t].label_map;
                    write_png((out_root / "angles" /
                               format_frame_name("hphi_f%04d.png", frame_index))
                                  .string(),
                              render_signature_map(products.signatures[t], lm, true));
                    write_png((out_root / "angles" /
                               format_frame_name("vphi_f%04d.png", frame_index))
                                  .string(),
                              render_signature_map(products.signatures[t], lm, false));
                }
            }
            times.io += ms_since(io_tick);
            io_tick = Clock::now();

            FrameRecord record;
            record.frame_index = frame_index;
            record.volume_index = static_cast<int>(wi);
            record.t = t;
            record.region_count = static_cast<int>(products.xy_segs[t].regions.size());
            for (const ObjectSelection& sel : products.selections[t]) {
                record.selections.push_back({sel.frame_index, sel.cycle, sel.seed_region,
                                             sel.members, sel.size, sel.left, sel.top, sel.right,
                                             sel.bottom});
            }

            if (!gt_masks.empty()) {
                std::vector<const GrayImage*> frame_masks;
                for (const ObjectSelection& sel : products.selections[t]) {
                    frame_masks.push_back(&sel.mask);
                }
                const GrayImage merged = union_mask(frame_masks, report.width, report.height);
                report.frame_metrics.push_back(
                    {frame_index, selection_metrics(merged, gt_masks[gt_cursor])});
            }
            ++gt_cursor;

            report.frames.push_back(std::move(record));
            for (ObjectSelection& sel : products.selections[t]) {
                report.selections.push_back(std::move(sel));
            }
            ++report.frames_processed;
        }
    }

    if (!gt_masks.empty()) {
        report.has_metrics = true;
        std::vector<SelectionMetrics> per_frame;
        per_frame.reserve(report.frame_metrics.size());
        for (const FrameMetrics& fm : report.frame_metrics) per_frame.push_back(fm.metrics);
        report.aggregate_metrics = aggregate_metrics(per_frame);
    }

    if (writing) {
        const auto io_tick = Clock::now();
        std::ofstream out(out_root / "report.json", std::ios::binary);
        if (!out) throw Error("cannot write report to '" + (out_root / "report.json").string() + "'");
        out << report_to_json(report);
        times.io += ms_since(io_tick);
    }

    std::fprintf(stderr,
                 "[timing] load=%.1fms segment=%.1fms angles=%.1fms saliency=%.1fms "
                 "grouping=%.1fms io=%.1fms total=%.1fms\n",
                 times.load, times.segment, times.angles, times.saliency, times.grouping,
                 times.io, ms_since(run_start));
    return report;
}

EvaluationResult evaluate_run(const EvaluateOptions& options) {
    if (options.levels < 2) throw Error("levels must be >= 2");

    const std::vector<std::pair<int, int>> masks = scan_selection_masks(options.selections_dir);
    if (masks.empty()) {
        throw Error("no selection masks (sel_f*_c*.png) in '" + options.selections_dir + "'");
    }
    EvaluationResult result;
    for (const auto& [frame, cycle] : masks) {
        if (result.frame_indices.empty() || result.frame_indices.back() != frame) {
            result.frame_indices.push_back(frame);
        }
    }

    const std::vector<int> gt_indices =
        scan_pattern_indices(options.gt_dir, options.gt_pattern);
    if (gt_indices != result.frame_indices) {
        throw Error("frame sets differ: selections cover [" + joined(result.frame_indices) +
                    "], ground truth covers [" + joined(gt_indices) + "]");
    }

    // Load and merge per-frame masks; dimensions come from the first one.
    int width = 0, height = 0;
    std::vector<GrayImage> merged;
    std::vector<GrayImage> gts;
    std::size_t cursor = 0;
    for (int frame : result.frame_indices) {
        std::vector<GrayImage> cycle_masks;
        while (cursor < masks.size() && masks[cursor].first == frame) {
            const fs::path path = fs::path(options.selections_dir) /
                                  selection_mask_name(frame, masks[cursor].second);
            cycle_masks.push_back(read_gray(path.string()));
            ++cursor;
        }
        for (const GrayImage& m : cycle_masks) {
            if (width == 0) {
                width = m.width();
                height = m.height();
            } else if (m.width() != width || m.height() != height) {
                throw Error("selection masks disagree on dimensions");
            }
        }
        std::vector<const GrayImage*> pointers;
        for (const GrayImage& m : cycle_masks) pointers.push_back(&m);
        merged.push_back(union_mask(pointers, width, height));

        const fs::path gt_path =
            fs::path(options.gt_dir) / format_frame_name(options.gt_pattern, frame);
        GrayImage gt = read_gray(gt_path.string());
        if (gt.width() != width || gt.height() != height) {
            throw Error("ground truth '" + gt_path.string() + "' does not match mask size");
        }
        gts.push_back(std::move(gt));
    }

    std::vector<SelectionMetrics> per_frame;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const SelectionMetrics m = selection_metrics(merged[i], gts[i]);
        per_frame.push_back(m);
        result.per_frame.push_back({result.frame_indices[i], m});
    }
    result.selection = aggregate_metrics(per_frame);

    for (const auto& [name, dir] : options.saliency_dirs) {
        if (name.empty() ||
            name.find_first_not_of(
                "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
                std::string::npos) {
            throw Error("saliency series name '" + name +
                        "' must be alphanumeric/underscore/dash");
        }
        const std::vector<GrayImage> maps = load_external_saliency(
            dir, options.saliency_pattern, result.frame_indices, width, height);
        std::vector<std::vector<RocPoint>> sweeps;
        sweeps.reserve(maps.size());
        for (std::size_t i = 0; i < maps.size(); ++i) {
            sweeps.push_back(threshold_sweep(maps[i], gts[i], options.levels));
        }
        PlotSeries series;
        series.name = name;
        series.curve = mean_sweep(sweeps);
        result.curves.push_back(std::move(series));
    }

    if (!options.out_dir.empty()) {
        const fs::path out_root = options.out_dir;
        fs::create_directories(out_root);

        json j;
        j["frames"] = json::array();
        for (const FrameMetrics& fm : result.per_frame) {
            json jf = metrics_to_json(fm.metrics);
            jf["frame"] = fm.frame_index;
            j["frames"].push_back(std::move(jf));
        }
        j["selection"] = metrics_to_json(result.selection);
        j["curves"] = json::array();
        for (const PlotSeries& s : result.curves) j["curves"].push_back(s.name);
        std::ofstream out(out_root / "metrics.json", std::ios::binary);
        if (!out) throw Error("cannot write metrics.json");
        out << j.dump(2) << "\n";

        for (const PlotSeries& s : result.curves) {
            write_roc_csv((out_root / ("roc_" + s.name + ".csv")).string(), s.curve);
        }

        std::vector<PlotSeries> plot = result.curves;
        PlotSeries operating;
        operating.name = "selection";
        operating.points.push_back(
            {128.0, result.selection.tp_rate, result.selection.fp_rate});
        plot.push_back(std::move(operating));
        write_roc_svg((out_root / "roc.svg").string(), plot);
    }
    return result;
}

}  // namespace attn
