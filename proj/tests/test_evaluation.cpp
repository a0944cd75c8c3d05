#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "attn/errors.hpp"
#include "attn/evaluation.hpp"
#include "attn/image_io.hpp"
#include "test_util.hpp"

using namespace attn;
namespace fs = std::filesystem;

namespace {

GrayImage gray_from(const std::vector<std::vector<int>>& rows) {
    GrayImage img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            img.at(x, y) = static_cast<std::uint8_t>(rows[y][x]);
        }
    }
    return img;
}

/// Pixel-counting reference for one threshold: predicted = value > theta,
/// object = gt > 127.
RocPoint count_rates(const GrayImage& map, const GrayImage& gt, double theta) {
    long long tp = 0, fp = 0, pos = 0, neg = 0;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const bool object = gt.at(x, y) > 127;
            const bool predicted = map.at(x, y) > theta;
            if (object) {
                ++pos;
                if (predicted) ++tp;
            } else {
                ++neg;
                if (predicted) ++fp;
            }
        }
    }
    RocPoint p;
    p.threshold = theta;
    p.tp_rate = pos == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(pos);
    p.fp_rate = neg == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(neg);
    return p;
}

GrayImage random_gray(testutil::Rng& rng, int width, int height) {
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            img.at(x, y) = static_cast<std::uint8_t>(rng.below(256));
        }
    }
    return img;
}

}  // namespace

TEST_CASE("threshold_sweep counts hits above a strict threshold") {
    // 2x2: map 200/100/50/0 against gt marking the left column.
    const GrayImage map = gray_from({{200, 100}, {50, 0}});
    const GrayImage gt = gray_from({{255, 0}, {255, 0}});
    const std::vector<RocPoint> sweep = threshold_sweep(map, gt, 256);

    REQUIRE(sweep.size() == 256);
    CHECK(sweep[0].threshold == doctest::Approx(0.0));
    CHECK(sweep[255].threshold == doctest::Approx(255.0));

    // theta = 0: strict > keeps the 0-valued pixel out.
    CHECK(sweep[0].tp_rate == doctest::Approx(1.0));
    CHECK(sweep[0].fp_rate == doctest::Approx(0.5));
    // theta = 100: only 200 remains -> one of two object pixels.
    CHECK(sweep[100].tp_rate == doctest::Approx(0.5));
    CHECK(sweep[100].fp_rate == doctest::Approx(0.0));
    // theta = 99: 100 and 200 remain.
    CHECK(sweep[99].tp_rate == doctest::Approx(0.5));
    CHECK(sweep[99].fp_rate == doctest::Approx(0.5));
    // theta = 255: nothing exceeds the top level.
    CHECK(sweep[255].tp_rate == doctest::Approx(0.0));
    CHECK(sweep[255].fp_rate == doctest::Approx(0.0));
}

TEST_CASE("sweep thresholds span 0..255 for any level count") {
    const GrayImage map = gray_from({{10}});
    const GrayImage gt = gray_from({{255}});
    const std::vector<RocPoint> sweep = threshold_sweep(map, gt, 5);
    REQUIRE(sweep.size() == 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(sweep[k].threshold == doctest::Approx(k * 255.0 / 4.0));
    }
}

TEST_CASE("threshold_sweep matches pixel counting on random maps") {
    testutil::Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 1 + rng.below(12);
        const int h = 1 + rng.below(12);
        const GrayImage map = random_gray(rng, w, h);
        GrayImage gt = random_gray(rng, w, h);
        if (trial % 10 == 0) gt = GrayImage(w, h, 0);  // exercise empty ground truth
        const int levels = 2 + rng.below(63);
        const std::vector<RocPoint> sweep = threshold_sweep(map, gt, levels);
        REQUIRE(static_cast<int>(sweep.size()) == levels);
        for (const RocPoint& p : sweep) {
            const RocPoint ref = count_rates(map, gt, p.threshold);
            REQUIRE(p.tp_rate == doctest::Approx(ref.tp_rate).epsilon(1e-12));
            REQUIRE(p.fp_rate == doctest::Approx(ref.fp_rate).epsilon(1e-12));
        }
        // Rates never increase as the threshold rises.
        for (std::size_t k = 1; k < sweep.size(); ++k) {
            REQUIRE(sweep[k].tp_rate <= sweep[k - 1].tp_rate + 1e-12);
            REQUIRE(sweep[k].fp_rate <= sweep[k - 1].fp_rate + 1e-12);
        }
    }
}

TEST_CASE("empty ground truth defines the hit rate as one") {
    const GrayImage map = gray_from({{200, 0}});
    const GrayImage gt = gray_from({{0, 0}});
    const std::vector<RocPoint> sweep = threshold_sweep(map, gt, 3);
    for (const RocPoint& p : sweep) CHECK(p.tp_rate == doctest::Approx(1.0));
    CHECK(sweep[0].fp_rate == doctest::Approx(0.5));
}

TEST_CASE("sweep rejects mismatched dimensions and bad level counts") {
    const GrayImage map = gray_from({{1, 2}});
    const GrayImage gt = gray_from({{1}});
    CHECK_THROWS_AS(static_cast<void>(threshold_sweep(map, gt, 4)), Error);
    CHECK_THROWS_AS(static_cast<void>(threshold_sweep(map, map, 1)), Error);
}

TEST_CASE("selection metrics on a binary mask") {
    const GrayImage gt = gray_from({{255, 255, 0, 0}});

    SelectionMetrics exact = selection_metrics(gray_from({{255, 255, 0, 0}}), gt);
    CHECK(exact.tp_rate == doctest::Approx(1.0));
    CHECK(exact.fp_rate == doctest::Approx(0.0));
    CHECK_FALSE(exact.gt_empty);

    SelectionMetrics nothing = selection_metrics(gray_from({{0, 0, 0, 0}}), gt);
    CHECK(nothing.tp_rate == doctest::Approx(0.0));
    CHECK(nothing.fp_rate == doctest::Approx(0.0));

    SelectionMetrics inverted = selection_metrics(gray_from({{0, 0, 255, 255}}), gt);
    CHECK(inverted.tp_rate == doctest::Approx(0.0));
    CHECK(inverted.fp_rate == doctest::Approx(1.0));

    SelectionMetrics half = selection_metrics(gray_from({{255, 0, 255, 0}}), gt);
    CHECK(half.tp_rate == doctest::Approx(0.5));
    CHECK(half.fp_rate == doctest::Approx(0.5));

    SelectionMetrics empty_gt = selection_metrics(gray_from({{255, 0, 0, 0}}),
                                                  gray_from({{0, 0, 0, 0}}));
    CHECK(empty_gt.tp_rate == doctest::Approx(1.0));
    CHECK(empty_gt.gt_empty);
}

TEST_CASE("selection metrics equal the sweep at the midpoint threshold") {
    testutil::Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 1 + rng.below(10);
        const int h = 1 + rng.below(10);
        GrayImage mask(w, h);
        GrayImage gt(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                mask.at(x, y) = rng.below(2) ? 255 : 0;
                gt.at(x, y) = rng.below(2) ? 255 : 0;
            }
        }

        const SelectionMetrics direct = selection_metrics(mask, gt);
        const std::vector<RocPoint> sweep = threshold_sweep(mask, gt, 256);
        REQUIRE(direct.tp_rate == doctest::Approx(sweep[128].tp_rate).epsilon(1e-12));
        REQUIRE(direct.fp_rate == doctest::Approx(sweep[128].fp_rate).epsilon(1e-12));
    }
}

TEST_CASE("mean_sweep averages per-frame curves pointwise") {
    std::vector<std::vector<RocPoint>> sweeps{
        {{0.0, 1.0, 0.4}, {255.0, 0.2, 0.0}},
        {{0.0, 0.5, 0.2}, {255.0, 0.4, 0.1}},
    };
    const std::vector<RocPoint> mean = mean_sweep(sweeps);
    REQUIRE(mean.size() == 2);
    CHECK(mean[0].threshold == doctest::Approx(0.0));
    CHECK(mean[0].tp_rate == doctest::Approx(0.75));
    CHECK(mean[0].fp_rate == doctest::Approx(0.3));
    CHECK(mean[1].tp_rate == doctest::Approx(0.3));
    CHECK(mean[1].fp_rate == doctest::Approx(0.05));
}

TEST_CASE("mean_sweep handles empty input and rejects ragged level counts") {
    CHECK(mean_sweep({}).empty());
    std::vector<std::vector<RocPoint>> ragged{
        {{0.0, 1.0, 0.0}},
        {{0.0, 1.0, 0.0}, {255.0, 0.0, 0.0}},
    };
    CHECK_THROWS_AS(static_cast<void>(mean_sweep(ragged)), Error);
}

TEST_CASE("aggregate_metrics averages frame rates") {
    std::vector<SelectionMetrics> per_frame(2);
    per_frame[0].tp_rate = 1.0;
    per_frame[0].fp_rate = 0.2;
    per_frame[1].tp_rate = 0.5;
    per_frame[1].fp_rate = 0.0;
    const SelectionMetrics agg = aggregate_metrics(per_frame);
    CHECK(agg.tp_rate == doctest::Approx(0.75));
    CHECK(agg.fp_rate == doctest::Approx(0.1));

    const SelectionMetrics none = aggregate_metrics({});
    CHECK(none.tp_rate == doctest::Approx(0.0));
    CHECK(none.fp_rate == doctest::Approx(0.0));
}

TEST_CASE("external saliency maps load by frame index") {
    testutil::TempDir dir("ext_sal");
    for (int f : {3, 5}) {
        GrayImage img(4, 2, static_cast<std::uint8_t>(f * 10));
        char name[64];
        std::snprintf(name, sizeof(name), "sal_f%04d.png", f);
        write_png((dir.path() / name).string(), img);
    }

    const std::vector<GrayImage> maps =
        load_external_saliency(dir.path().string(), "sal_f%04d.png", {3, 5}, 4, 2);
    REQUIRE(maps.size() == 2);
    CHECK(maps[0].at(0, 0) == 30);
    CHECK(maps[1].at(3, 1) == 50);

    CHECK_THROWS_WITH_AS(
        static_cast<void>(load_external_saliency(dir.path().string(), "sal_f%04d.png", {3, 4}, 4,
                                                 2)),
        doctest::Contains("sal_f0004.png"), Error);
    CHECK_THROWS_AS(
        static_cast<void>(load_external_saliency(dir.path().string(), "sal_f%04d.png", {3}, 8, 2)),
        Error);
}

TEST_CASE("roc csv lists threshold and rates per line") {
    testutil::TempDir dir("roc_csv");
    const fs::path path = dir.path() / "roc.csv";
    write_roc_csv(path.string(), {{0.0, 1.0, 0.25}, {255.0, 0.0, 0.0}});

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header, line1, line2;
    std::getline(in, header);
    std::getline(in, line1);
    std::getline(in, line2);
    CHECK(header.find("threshold") != std::string::npos);
    CHECK(line1.find("0.25") != std::string::npos);
    CHECK(line2.find("255") != std::string::npos);
}

TEST_CASE("roc svg embeds every series") {
    testutil::TempDir dir("roc_svg");
    const fs::path path = dir.path() / "roc.svg";
    PlotSeries curve;
    curve.name = "baseline";
    curve.curve = {{0.0, 1.0, 1.0}, {128.0, 0.7, 0.2}, {255.0, 0.0, 0.0}};
    PlotSeries marker;
    marker.name = "selection";
    marker.points = {{128.0, 0.8, 0.05}};
    write_roc_svg(path.string(), {curve, marker});

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.find("<svg") != std::string::npos);
    CHECK(content.find("baseline") != std::string::npos);
    CHECK(content.find("selection") != std::string::npos);
    CHECK(content.find("polyline") != std::string::npos);
}
