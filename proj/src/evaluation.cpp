#include "attn/evaluation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "attn/errors.hpp"
#include "attn/image_io.hpp"
#include "attn/volume.hpp"

namespace fs = std::filesystem;

namespace attn {

namespace {

void require_same_size(const GrayImage& a, const GrayImage& b, const char* what) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw Error(std::string(what) + ": dimensions differ (" + std::to_string(a.width()) +
                    "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()) + ")");
    }
}

struct Counts {
    long long tp = 0, fp = 0, gt = 0, non_gt = 0;
};

SelectionMetrics rates_from(const Counts& c) {
    SelectionMetrics m;
    m.gt_empty = (c.gt == 0);
    m.tp_rate = m.gt_empty ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.gt);
    m.fp_rate = (c.non_gt == 0) ? 0.0 : static_cast<double>(c.fp) / static_cast<double>(c.non_gt);
    return m;
}

}  // namespace

std::vector<RocPoint> threshold_sweep(const GrayImage& map, const GrayImage& gt, int levels) {
    require_same_size(map, gt, "threshold_sweep");
    if (levels < 2) throw Error("threshold_sweep needs at least 2 levels");

    // One histogram pass instead of per-threshold rescans.
    long long gt_hist[256] = {0};
    long long non_gt_hist[256] = {0};
    long long gt_total = 0;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const bool in_gt = gt.at(x, y) > 127;
            if (in_gt) {
                gt_hist[map.at(x, y)]++;
                gt_total++;
            } else {
                non_gt_hist[map.at(x, y)]++;
            }
        }
    }
    const long long non_gt_total = static_cast<long long>(map.pixel_count()) - gt_total;

    std::vector<RocPoint> out;
    out.reserve(levels);
    for (int k = 0; k < levels; ++k) {
        const double theta = 255.0 * k / (levels - 1);
        Counts c;
        c.gt = gt_total;
        c.non_gt = non_gt_total;
        for (int v = 0; v < 256; ++v) {
            if (static_cast<double>(v) > theta) {
                c.tp += gt_hist[v];
                c.fp += non_gt_hist[v];
            }
        }
        const SelectionMetrics m = rates_from(c);
        out.push_back({theta, m.tp_rate, m.fp_rate});
    }
    return out;
}

SelectionMetrics selection_metrics(const GrayImage& mask, const GrayImage& gt) {
    require_same_size(mask, gt, "selection_metrics");
    Counts c;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            const bool predicted = mask.at(x, y) > 127;
            const bool in_gt = gt.at(x, y) > 127;
            if (in_gt) {
                c.gt++;
                if (predicted) c.tp++;
            } else {
                c.non_gt++;
                if (predicted) c.fp++;
            }
        }
    }
    return rates_from(c);
}

std::vector<RocPoint> mean_sweep(const std::vector<std::vector<RocPoint>>& sweeps) {
    if (sweeps.empty()) return {};
    const std::size_t levels = sweeps.front().size();
    for (const auto& s : sweeps) {
        if (s.size() != levels) throw Error("mean_sweep: sweeps have differing level counts");
    }
    std::vector<RocPoint> out(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        out[k].threshold = sweeps.front()[k].threshold;
        for (const auto& s : sweeps) {
            out[k].tp_rate += s[k].tp_rate;
            out[k].fp_rate += s[k].fp_rate;
        }
        out[k].tp_rate /= sweeps.size();
        out[k].fp_rate /= sweeps.size();
    }
    return out;
}

SelectionMetrics aggregate_metrics(const std::vector<SelectionMetrics>& per_frame) {
    SelectionMetrics out;
    if (per_frame.empty()) return out;
    for (const SelectionMetrics& m : per_frame) {
        out.tp_rate += m.tp_rate;
        out.fp_rate += m.fp_rate;
    }
    out.tp_rate /= per_frame.size();
    out.fp_rate /= per_frame.size();
    return out;
}

std::vector<GrayImage> load_external_saliency(const std::string& directory,
                                              const std::string& pattern,
                                              const std::vector<int>& frame_indices,
                                              int expect_width, int expect_height) {
    if (!fs::is_directory(directory)) {
        throw Error("saliency directory '" + directory + "' does not exist");
    }
    std::vector<GrayImage> maps;
    maps.reserve(frame_indices.size());
    for (int index : frame_indices) {
        const fs::path path = fs::path(directory) / format_frame_name(pattern, index);
        if (!fs::exists(path)) {
            throw Error("missing saliency map for frame " + std::to_string(index) + ": '" +
                        path.string() + "'");
        }
        GrayImage map = read_gray(path.string());
        if (map.width() != expect_width || map.height() != expect_height) {
            throw Error("saliency map '" + path.string() + "' is " + std::to_string(map.width()) +
                        "x" + std::to_string(map.height()) + ", expected " +
                        std::to_string(expect_width) + "x" + std::to_string(expect_height));
        }
        maps.push_back(std::move(map));
    }
    return maps;
}

void write_roc_csv(const std::string& path, const std::vector<RocPoint>& points) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "threshold,tp_rate,fp_rate\n";
    char line[128];
    for (const RocPoint& p : points) {
        std::snprintf(line, sizeof(line), "%.6g,%.9g,%.9g\n", p.threshold, p.tp_rate, p.fp_rate);
        out << line;
    }
}

void write_roc_svg(const std::string& path, const std::vector<PlotSeries>& series) {
    static const char* colors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad",
                                   "#d35400", "#16a085", "#7f8c8d"};
    const double size = 480.0, margin = 50.0;
    const double span = size - 2 * margin;
    auto px = [&](double fp) { return margin + fp * span; };
    auto py = [&](double tp) { return size - margin - tp * span; };

    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size << "' height='" << size
        << "' font-family='sans-serif' font-size='11'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    // axes with 0.2 ticks
    out << "<g stroke='#444' fill='none'>";
    out << "<path d='M" << px(0) << " " << py(0) << " L" << px(1) << " " << py(0) << "'/>";
    out << "<path d='M" << px(0) << " " << py(0) << " L" << px(0) << " " << py(1) << "'/>";
    out << "</g>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        out << "<text x='" << px(v) - 8 << "' y='" << py(0) + 16 << "'>" << v << "</text>\n";
        out << "<text x='" << px(0) - 28 << "' y='" << py(v) + 4 << "'>" << v << "</text>\n";
    }
    out << "<text x='" << px(0.5) - 20 << "' y='" << size - 8 << "'>FP rate</text>\n";
    out << "<text x='12' y='" << py(0.5) << "' transform='rotate(-90 12 " << py(0.5)
        << ")'>TP rate</text>\n";

    int color_index = 0;
    double legend_y = margin;
    for (const PlotSeries& s : series) {
        const char* color = colors[color_index % 7];
        ++color_index;
        if (!s.curve.empty()) {
            out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
            for (const RocPoint& p : s.curve) out << px(p.fp_rate) << "," << py(p.tp_rate) << " ";
            out << "'/>\n";
        }
        for (const RocPoint& p : s.points) {
            out << "<circle cx='" << px(p.fp_rate) << "' cy='" << py(p.tp_rate)
                << "' r='4' fill='" << color << "'/>\n";
        }
        out << "<text x='" << size - margin - 150 << "' y='" << legend_y << "' fill='" << color
            << "'>" << s.name << "</text>\n";
        legend_y += 14;
    }
    out << "</svg>\n";
}

}  // namespace attn
