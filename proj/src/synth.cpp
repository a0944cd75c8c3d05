#include "attn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "attn/errors.hpp"
#include "attn/image_io.hpp"
#include "attn/rng.hpp"
#include "attn/volume.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace attn {

namespace {

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int floor_mod(int a, int b) {
    const int m = a % b;
    return m < 0 ? m + b : m;
}

Rgb8 background_pixel(const SynthBackground& bg, int x, int y, int t) {
    switch (bg.kind) {
        case SynthBackground::Kind::Solid:
            return bg.color;
        case SynthBackground::Kind::Tiles: {
            const int tx = floor_div(x - t * bg.vx, bg.tile_size);
            const int ty = floor_div(y - t * bg.vy, bg.tile_size);
            return bg.palette[floor_mod(tx + ty, static_cast<int>(bg.palette.size()))];
        }
        case SynthBackground::Kind::Stripes: {
            const int tx = floor_div(x - t * bg.vx, bg.tile_size);
            return bg.palette[floor_mod(tx, static_cast<int>(bg.palette.size()))];
        }
    }
    return bg.color;
}

std::uint8_t clamp_channel(int v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

}  // namespace

Rect object_rect(const SynthObject& o, int t) {
    return {o.x + t * o.vx, o.y + t * o.vy,
            o.x + t * o.vx + o.width - 1, o.y + t * o.vy + o.height - 1};
}

Scene generate_scene(const SceneSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0 || spec.frame_count <= 0) {
        throw Error("scene dimensions and frame count must be positive");
    }
    if (spec.background.kind != SynthBackground::Kind::Solid) {
        if (spec.background.palette.empty()) throw Error("textured background needs a palette");
        if (spec.background.tile_size <= 0) throw Error("tile size must be positive");
    }
    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
        for (int t = 0; t < spec.frame_count; ++t) {
            const Rect r = object_rect(spec.objects[i], t);
            if (r.left < 0 || r.top < 0 || r.right >= spec.width || r.bottom >= spec.height) {
                throw Error("object " + std::to_string(i) + " leaves the frame at t=" +
                            std::to_string(t));
            }
        }
    }

    Scene scene;
    scene.frames.reserve(spec.frame_count);
    scene.gt_masks.reserve(spec.frame_count);
    for (int t = 0; t < spec.frame_count; ++t) {
        RgbImage frame(spec.width, spec.height);
        GrayImage gt(spec.width, spec.height, 0);
        for (int y = 0; y < spec.height; ++y) {
            for (int x = 0; x < spec.width; ++x) {
                frame.at(x, y) = background_pixel(spec.background, x, y, t);
            }
        }
        for (const SynthObject& o : spec.objects) {
            const Rect r = object_rect(o, t);
            for (int y = r.top; y <= r.bottom; ++y) {
                for (int x = r.left; x <= r.right; ++x) {
                    Rgb8 c = o.color;
                    if (o.two_tone) {
                        const bool second = (o.split == 'h') ? (y - r.top >= o.height / 2)
                                                             : (x - r.left >= o.width / 2);
                        if (second) c = o.color_b;
                    }
                    frame.at(x, y) = c;
                    gt.at(x, y) = 255;
                }
            }
        }
        if (spec.noise_amplitude > 0) {
            const int amp = spec.noise_amplitude;
            for (int y = 0; y < spec.height; ++y) {
                for (int x = 0; x < spec.width; ++x) {
                    const std::uint64_t h = hash_mix(
                        spec.rng_seed,
                        (static_cast<std::uint64_t>(t) << 40) ^
                            (static_cast<std::uint64_t>(y) << 20) ^ static_cast<std::uint64_t>(x));
                    Rgb8& p = frame.at(x, y);
                    // three independent offsets in [-amp, amp]
                    p.r = clamp_channel(p.r + static_cast<int>(h % (2 * amp + 1)) - amp);
                    p.g = clamp_channel(p.g + static_cast<int>((h >> 16) % (2 * amp + 1)) - amp);
                    p.b = clamp_channel(p.b + static_cast<int>((h >> 32) % (2 * amp + 1)) - amp);
                }
            }
        }
        scene.frames.push_back(std::move(frame));
        scene.gt_masks.push_back(std::move(gt));
    }
    return scene;
}

double expected_angle(double v, int h) {
    if (h < 1) throw Error("expected_angle needs h >= 1");
    return std::atan2(static_cast<double>(h), v * h) * 180.0 / 3.141592653589793238462643383279502884;
}

namespace {

Rgb8 color_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw Error("colors must be [r, g, b] arrays");
    return Rgb8{j[0].get<std::uint8_t>(), j[1].get<std::uint8_t>(), j[2].get<std::uint8_t>()};
}

json color_to_json(const Rgb8& c) { return json::array({c.r, c.g, c.b}); }

}  // namespace

SceneSpec scene_spec_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scene spec '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("malformed scene spec '" + path + "': " + e.what());
    }
    try {
        SceneSpec spec;
        spec.width = j.at("width").get<int>();
        spec.height = j.at("height").get<int>();
        spec.frame_count = j.at("frames").get<int>();
        spec.rng_seed = j.value("seed", 1u);
        spec.noise_amplitude = j.value("noise", 0);

        const json& bg = j.at("background");
        const std::string type = bg.at("type").get<std::string>();
        if (type == "solid") {
            spec.background.kind = SynthBackground::Kind::Solid;
            spec.background.color = color_from_json(bg.at("color"));
        } else if (type == "tiles" || type == "stripes") {
            spec.background.kind = (type == "tiles") ? SynthBackground::Kind::Tiles
                                                     : SynthBackground::Kind::Stripes;
            spec.background.tile_size = bg.value("tile_size", 40);
            for (const json& c : bg.at("palette")) {
                spec.background.palette.push_back(color_from_json(c));
            }
            spec.background.vx = bg.value("vx", 0);
            spec.background.vy = bg.value("vy", 0);
        } else {
            throw Error("unknown background type '" + type + "'");
        }

        for (const json& jo : j.value("objects", json::array())) {
            SynthObject o;
            o.x = jo.at("x").get<int>();
            o.y = jo.at("y").get<int>();
            o.width = jo.at("width").get<int>();
            o.height = jo.at("height").get<int>();
            o.vx = jo.value("vx", 0);
            o.vy = jo.value("vy", 0);
            o.color = color_from_json(jo.at("color"));
            if (jo.contains("color_b")) {
                o.two_tone = true;
                o.color_b = color_from_json(jo.at("color_b"));
                o.split = jo.value("split", std::string("v")) == "h" ? 'h' : 'v';
            }
            spec.objects.push_back(o);
        }
        return spec;
    } catch (const json::exception& e) {
        throw Error("invalid scene spec '" + path + "': " + e.what());
    }
}

std::string scene_spec_to_json(const SceneSpec& spec) {
    json j;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["frames"] = spec.frame_count;
    j["seed"] = spec.rng_seed;
    j["noise"] = spec.noise_amplitude;
    json bg;
    switch (spec.background.kind) {
        case SynthBackground::Kind::Solid:
            bg["type"] = "solid";
            bg["color"] = color_to_json(spec.background.color);
            break;
        case SynthBackground::Kind::Tiles:
        case SynthBackground::Kind::Stripes:
            bg["type"] = spec.background.kind == SynthBackground::Kind::Tiles ? "tiles" : "stripes";
            bg["tile_size"] = spec.background.tile_size;
            bg["palette"] = json::array();
            for (const Rgb8& c : spec.background.palette) bg["palette"].push_back(color_to_json(c));
            bg["vx"] = spec.background.vx;
            bg["vy"] = spec.background.vy;
            break;
    }
    j["background"] = std::move(bg);
    j["objects"] = json::array();
    for (const SynthObject& o : spec.objects) {
        json jo;
        jo["x"] = o.x;
        jo["y"] = o.y;
        jo["width"] = o.width;
        jo["height"] = o.height;
        jo["vx"] = o.vx;
        jo["vy"] = o.vy;
        jo["color"] = color_to_json(o.color);
        if (o.two_tone) {
            jo["color_b"] = color_to_json(o.color_b);
            jo["split"] = std::string(1, o.split);
        }
        j["objects"].push_back(std::move(jo));
    }
    return j.dump(2) + "\n";
}

void write_scene(const Scene& scene, const std::string& out_dir) {
    const fs::path frames_dir = fs::path(out_dir) / "frames";
    const fs::path gt_dir = fs::path(out_dir) / "gt";
    fs::create_directories(frames_dir);
    fs::create_directories(gt_dir);
    for (std::size_t t = 0; t < scene.frames.size(); ++t) {
        const std::string name = format_frame_name("frame_%04d.png", static_cast<int>(t));
        write_png((frames_dir / name).string(), scene.frames[t]);
        write_png((gt_dir / name).string(), scene.gt_masks[t]);
    }
}

}  // namespace attn
