#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attn/image.hpp"

namespace attn {

/// Axis-aligned rectangle moving at an integer velocity. Two-tone objects
/// split into two color halves along the given axis, which yields two
/// segmentation regions sharing one motion.
struct SynthObject {
    int x = 0, y = 0;
    int width = 1, height = 1;
    int vx = 0, vy = 0;  // px/frame, screen convention (+x right, +y down)
    Rgb8 color{255, 255, 255};
    bool two_tone = false;
    Rgb8 color_b{0, 0, 0};
    char split = 'v';  // 'v': left/right halves, 'h': top/bottom halves
};

struct SynthBackground {
    enum class Kind { Solid, Tiles, Stripes };
    Kind kind = Kind::Solid;
    Rgb8 color{0, 0, 0};          // Solid
    int tile_size = 40;           // Tiles / Stripes period
    std::vector<Rgb8> palette;    // Tiles / Stripes colors
    int vx = 0, vy = 0;           // texture scroll velocity, px/frame
};

struct SceneSpec {
    int width = 320, height = 240;
    int frame_count = 10;
    SynthBackground background;
    std::vector<SynthObject> objects;
    std::uint32_t rng_seed = 1;
    int noise_amplitude = 0;  // 0..255, additive per-channel noise
};

struct Scene {
    std::vector<RgbImage> frames;
    std::vector<GrayImage> gt_masks;  // union of object boxes, 0/255
};

struct Rect {
    int left = 0, top = 0, right = 0, bottom = 0;  // inclusive
};

/// Object's box at frame t: the initial box translated by t * (vx, vy).
Rect object_rect(const SynthObject& object, int t);

/// Renders the spec pixel-exactly and deterministically. Throws when any
/// object leaves the frame bounds during the sequence.
Scene generate_scene(const SceneSpec& spec);

/// Angle of the space-time line traced by an edge moving v px/frame over a
/// temporal extent of h rows; positive v corresponds to leftward (upward)
/// screen motion. v = 0 gives 90 degrees.
double expected_angle(double v, int h);

SceneSpec scene_spec_from_json_file(const std::string& path);
std::string scene_spec_to_json(const SceneSpec& spec);

/// Writes frames/frame_%04d.png and gt/frame_%04d.png under out_dir.
void write_scene(const Scene& scene, const std::string& out_dir);

}  // namespace attn
