#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "attn/errors.hpp"
#include "attn/image_io.hpp"
#include "attn/motion.hpp"
#include "attn/segmentation.hpp"
#include "attn/synth.hpp"
#include "attn/volume.hpp"
#include "test_util.hpp"

using namespace attn;
namespace fs = std::filesystem;

namespace {

SceneSpec one_mover(int vx, int vy) {
    SceneSpec spec;
    spec.width = 120;
    spec.height = 90;
    spec.frame_count = 8;
    spec.background.color = {15, 15, 15};
    SynthObject obj;
    obj.x = 50;
    obj.y = 40;
    obj.width = 20;
    obj.height = 14;
    obj.vx = vx;
    obj.vy = vy;
    obj.color = {220, 60, 60};
    spec.objects.push_back(obj);
    return spec;
}

}  // namespace

TEST_CASE("object boxes translate by integer velocity per frame") {
    SynthObject obj;
    obj.x = 200;
    obj.y = 100;
    obj.width = 30;
    obj.height = 40;
    obj.vx = -3;
    obj.vy = 1;
    const Rect r0 = object_rect(obj, 0);
    CHECK(r0.left == 200);
    CHECK(r0.right == 229);
    CHECK(r0.top == 100);
    CHECK(r0.bottom == 139);
    const Rect r5 = object_rect(obj, 5);
    CHECK(r5.left == 185);
    CHECK(r5.right == 214);
    CHECK(r5.top == 105);
    CHECK(r5.bottom == 144);
}

TEST_CASE("zero velocity and zero noise give identical frames") {
    const SceneSpec spec = one_mover(0, 0);
    const Scene scene = generate_scene(spec);
    REQUIRE(scene.frames.size() == 8);
    REQUIRE(scene.gt_masks.size() == 8);
    for (std::size_t t = 1; t < scene.frames.size(); ++t) {
        CHECK(scene.frames[t] == scene.frames[0]);
        CHECK(scene.gt_masks[t] == scene.gt_masks[0]);
    }
}

TEST_CASE("frames render the object over the background with matching masks") {
    const Scene scene = generate_scene(one_mover(2, 0));
    for (int t = 0; t < 8; ++t) {
        const RgbImage& frame = scene.frames[t];
        const GrayImage& gt = scene.gt_masks[t];
        const int left = 50 + 2 * t;
        for (int y = 0; y < frame.height(); ++y) {
            for (int x = 0; x < frame.width(); ++x) {
                const bool inside = x >= left && x < left + 20 && y >= 40 && y < 54;
                REQUIRE(gt.at(x, y) == (inside ? 255 : 0));
                REQUIRE(frame.at(x, y) == (inside ? Rgb8{220, 60, 60} : Rgb8{15, 15, 15}));
            }
        }
    }
}

TEST_CASE("ground truth is the union of all object boxes") {
    SceneSpec spec = one_mover(0, 0);
    SynthObject second;
    second.x = 10;
    second.y = 10;
    second.width = 6;
    second.height = 6;
    second.color = {60, 60, 220};
    spec.objects.push_back(second);
    const Scene scene = generate_scene(spec);
    CHECK(scene.gt_masks[0].at(12, 12) == 255);
    CHECK(scene.gt_masks[0].at(55, 45) == 255);
    CHECK(scene.gt_masks[0].at(30, 30) == 0);
}

TEST_CASE("two-tone objects split into two colored halves") {
    SceneSpec spec = one_mover(0, 0);
    spec.objects[0].two_tone = true;
    spec.objects[0].color_b = {30, 190, 30};
    spec.objects[0].split = 'v';
    const Scene scene = generate_scene(spec);
    // width 20 at x=50: columns 50..59 first tone, 60..69 second.
    CHECK(scene.frames[0].at(52, 45) == Rgb8{220, 60, 60});
    CHECK(scene.frames[0].at(65, 45) == Rgb8{30, 190, 30});

    spec.objects[0].split = 'h';
    const Scene hsplit = generate_scene(spec);
    // height 14 at y=40: rows 40..46 first tone, 47..53 second.
    CHECK(hsplit.frames[0].at(52, 42) == Rgb8{220, 60, 60});
    CHECK(hsplit.frames[0].at(52, 50) == Rgb8{30, 190, 30});
}

TEST_CASE("an object that exits the frame is rejected with its index") {
    SceneSpec spec = one_mover(-9, 0);  // x=50, 8 frames: 50 - 9*7 < 0
    CHECK_THROWS_WITH_AS(static_cast<void>(generate_scene(spec)),
                         doctest::Contains("leaves the frame"), Error);
    CHECK_THROWS_AS(static_cast<void>(generate_scene(one_mover(0, 8))), Error);
}

TEST_CASE("noise is deterministic in the seed and bounded by the amplitude") {
    SceneSpec spec = one_mover(1, 0);
    spec.noise_amplitude = 12;
    spec.rng_seed = 99;
    const Scene a = generate_scene(spec);
    const Scene b = generate_scene(spec);
    for (int t = 0; t < 8; ++t) REQUIRE(a.frames[t] == b.frames[t]);

    spec.rng_seed = 100;
    const Scene c = generate_scene(spec);
    CHECK(a.frames[0] != c.frames[0]);

    // Every pixel stays within amplitude of the clean render.
    SceneSpec clean = one_mover(1, 0);
    const Scene base = generate_scene(clean);
    for (int y = 0; y < 90; ++y) {
        for (int x = 0; x < 120; ++x) {
            const Rgb8 noisy = a.frames[3].at(x, y);
            const Rgb8 ref = base.frames[3].at(x, y);
            REQUIRE(std::abs(int(noisy.r) - int(ref.r)) <= 12);
            REQUIRE(std::abs(int(noisy.g) - int(ref.g)) <= 12);
            REQUIRE(std::abs(int(noisy.b) - int(ref.b)) <= 12);
        }
    }
    // Noise must actually perturb something at this amplitude.
    CHECK(a.frames[3] != base.frames[3]);
}

TEST_CASE("tiled backgrounds scroll by their velocity") {
    SceneSpec spec;
    spec.width = 80;
    spec.height = 60;
    spec.frame_count = 4;
    spec.background.kind = SynthBackground::Kind::Tiles;
    spec.background.tile_size = 10;
    spec.background.palette = {{20, 20, 20}, {200, 200, 200}};
    spec.background.vx = 3;
    const Scene scene = generate_scene(spec);
    // Frame t shifted right by 3t: pixel (x, y) at t equals (x - 3, y) at t-1.
    for (int t = 1; t < 4; ++t) {
        for (int y = 0; y < 60; ++y) {
            for (int x = 3; x < 80; ++x) {
                REQUIRE(scene.frames[t].at(x, y) == scene.frames[t - 1].at(x - 3, y));
            }
        }
    }
    // A tile boundary exists: both palette colors appear.
    bool saw_dark = false, saw_light = false;
    for (int x = 0; x < 80; ++x) {
        const Rgb8 px = scene.frames[0].at(x, 0);
        saw_dark |= (px == Rgb8{20, 20, 20});
        saw_light |= (px == Rgb8{200, 200, 200});
    }
    CHECK(saw_dark);
    CHECK(saw_light);
}

TEST_CASE("stripe backgrounds vary along x only") {
    SceneSpec spec;
    spec.width = 40;
    spec.height = 20;
    spec.frame_count = 2;
    spec.background.kind = SynthBackground::Kind::Stripes;
    spec.background.tile_size = 5;
    spec.background.palette = {{10, 10, 10}, {240, 240, 240}};
    const Scene scene = generate_scene(spec);
    for (int y = 1; y < 20; ++y) {
        for (int x = 0; x < 40; ++x) {
            REQUIRE(scene.frames[0].at(x, y) == scene.frames[0].at(x, 0));
        }
    }
    CHECK(scene.frames[0].at(0, 0) != scene.frames[0].at(5, 0));
}

TEST_CASE("scene specs survive a json round trip") {
    SceneSpec spec = one_mover(-2, 1);
    spec.background.kind = SynthBackground::Kind::Tiles;
    spec.background.tile_size = 16;
    spec.background.palette = {{1, 2, 3}, {4, 5, 6}};
    spec.background.vx = 2;
    spec.noise_amplitude = 7;
    spec.rng_seed = 1234;
    spec.objects[0].two_tone = true;
    spec.objects[0].color_b = {9, 8, 7};
    spec.objects[0].split = 'h';

    testutil::TempDir dir("synth_json");
    const fs::path path = dir.path() / "scene.json";
    {
        std::ofstream out(path);
        out << scene_spec_to_json(spec);
    }
    const SceneSpec loaded = scene_spec_from_json_file(path.string());
    CHECK(loaded.width == spec.width);
    CHECK(loaded.height == spec.height);
    CHECK(loaded.frame_count == spec.frame_count);
    CHECK(loaded.rng_seed == spec.rng_seed);
    CHECK(loaded.noise_amplitude == 7);
    CHECK(loaded.background.kind == SynthBackground::Kind::Tiles);
    CHECK(loaded.background.tile_size == 16);
    REQUIRE(loaded.background.palette.size() == 2);
    CHECK(loaded.background.palette[1] == Rgb8{4, 5, 6});
    CHECK(loaded.background.vx == 2);
    REQUIRE(loaded.objects.size() == 1);
    CHECK(loaded.objects[0].x == 50);
    CHECK(loaded.objects[0].vx == -2);
    CHECK(loaded.objects[0].vy == 1);
    CHECK(loaded.objects[0].two_tone);
    CHECK(loaded.objects[0].color_b == Rgb8{9, 8, 7});
    CHECK(loaded.objects[0].split == 'h');

    // Round trip is render-identical.
    const Scene a = generate_scene(spec);
    const Scene b = generate_scene(loaded);
    for (int t = 0; t < spec.frame_count; ++t) REQUIRE(a.frames[t] == b.frames[t]);
}

TEST_CASE("scene spec validation rejects broken input") {
    SceneSpec bad = one_mover(0, 0);
    bad.width = 0;
    CHECK_THROWS_AS(static_cast<void>(generate_scene(bad)), Error);

    SceneSpec tiles = one_mover(0, 0);
    tiles.background.kind = SynthBackground::Kind::Tiles;
    tiles.background.palette.clear();
    CHECK_THROWS_AS(static_cast<void>(generate_scene(tiles)), Error);
    tiles.background.palette = {{1, 1, 1}};
    tiles.background.tile_size = 0;
    CHECK_THROWS_AS(static_cast<void>(generate_scene(tiles)), Error);
}

TEST_CASE("expected_angle maps velocity to a space-time orientation") {
    CHECK(expected_angle(0.0, 9) == doctest::Approx(90.0));
    CHECK(expected_angle(1.0, 9) == doctest::Approx(45.0));
    CHECK(expected_angle(-1.0, 9) == doctest::Approx(135.0));
    constexpr double kPi = 3.14159265358979323846;
    CHECK(expected_angle(3.0, 9) == doctest::Approx(std::atan2(9.0, 27.0) * 180.0 / kPi));
    CHECK(expected_angle(2.0, 5) == doctest::Approx(std::atan2(5.0, 10.0) * 180.0 / kPi));
    CHECK_THROWS_AS(static_cast<void>(expected_angle(1.0, 0)), Error);
}

TEST_CASE("written scenes load back as a volume") {
    testutil::TempDir dir("synth_write");
    const Scene scene = generate_scene(one_mover(1, 0));
    write_scene(scene, dir.path().string());
    CHECK(fs::exists(dir.path() / "frames" / "frame_0000.png"));
    CHECK(fs::exists(dir.path() / "frames" / "frame_0007.png"));
    CHECK(fs::exists(dir.path() / "gt" / "frame_0007.png"));

    const std::vector<Frame> frames =
        load_frames((dir.path() / "frames").string(), "frame_%04d.png", 0, -1);
    REQUIRE(frames.size() == 8);
    CHECK(frames[2].index == 2);
    CHECK(frames[2].image == scene.frames[2]);
    const GrayImage gt = read_gray((dir.path() / "gt" / "frame_0003.png").string());
    CHECK(gt == scene.gt_masks[3]);
}

TEST_CASE("a rendered mover produces its expected space-time angle") {
    // End-to-end oracle for the measurement chain: render a leftward mover,
    // slice horizontally, segment, and compare the bar's angle against the
    // closed-form value.
    SceneSpec spec = one_mover(-2, 0);
    spec.width = 160;
    spec.frame_count = 10;
    const Scene scene = generate_scene(spec);
    std::vector<Frame> frames;
    for (int t = 0; t < 10; ++t) frames.push_back({scene.frames[t], t});
    const FrameVolume volume = FrameVolume::from_frames(std::move(frames));
    const SliceStack xt = extract_slices(volume, SliceAxis::XT);

    const RgbImage& slice = xt.slices[45];  // row through the object
    const Segmentation seg = segment_slice(slice, {});
    int bar = -1;
    for (const Region& r : seg.regions) {
        if (r.mean_r > 150.0 && r.mean_g < 120.0) bar = r.id;
    }
    REQUIRE(bar >= 0);
    const RegionAngle angle = spatiotemporal_angle(seg.regions[bar], seg.label_map);
    // vx = -2 on screen means positive leftward velocity here.
    CHECK(angle.phi_deg == doctest::Approx(expected_angle(2.0, 9)).epsilon(0.02));
}
