#include "attn/volume.hpp"

#include <cstdio>
#include <filesystem>
#include <utility>

#include "attn/errors.hpp"
#include "attn/image_io.hpp"

namespace fs = std::filesystem;

namespace attn {

FrameVolume FrameVolume::from_frames(std::vector<Frame> frames) {
    if (frames.size() < 2) {
        throw Error("a volume needs at least 2 frames, got " + std::to_string(frames.size()));
    }
    FrameVolume v;
    v.width_ = frames.front().image.width();
    v.height_ = frames.front().image.height();
    for (const Frame& f : frames) {
        if (f.image.width() != v.width_ || f.image.height() != v.height_) {
            throw Error("frame " + std::to_string(f.index) + " is " +
                        std::to_string(f.image.width()) + "x" + std::to_string(f.image.height()) +
                        " but the volume is " + std::to_string(v.width_) + "x" +
                        std::to_string(v.height_));
        }
    }
    v.frames_ = std::move(frames);
    return v;
}

SliceStack extract_slices(const FrameVolume& volume, SliceAxis axis) {
    SliceStack stack;
    stack.axis = axis;
    const int w = volume.width(), h = volume.height(), t_depth = volume.depth();
    switch (axis) {
        case SliceAxis::XY: {
            stack.slice_width = w;
            stack.slice_height = h;
            stack.slices.reserve(t_depth);
            for (int t = 0; t < t_depth; ++t) stack.slices.push_back(volume.frame(t));
            break;
        }
        case SliceAxis::XT: {
            stack.slice_width = w;
            stack.slice_height = t_depth;
            stack.slices.assign(h, RgbImage(w, t_depth));
            for (int y = 0; y < h; ++y) {
                RgbImage& slice = stack.slices[y];
                for (int t = 0; t < t_depth; ++t) {
                    const RgbImage& f = volume.frame(t);
                    for (int x = 0; x < w; ++x) slice.at(x, t) = f.at(x, y);
                }
            }
            break;
        }
        case SliceAxis::YT: {
            stack.slice_width = h;
            stack.slice_height = t_depth;
            stack.slices.assign(w, RgbImage(h, t_depth));
            for (int t = 0; t < t_depth; ++t) {
                const RgbImage& f = volume.frame(t);
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x) stack.slices[x].at(y, t) = f.at(x, y);
            }
            break;
        }
    }
    return stack;
}

std::string format_frame_name(const std::string& pattern, int index) {
    // Exactly one %[0][width]d conversion; no other conversions.
    int conversions = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] != '%') continue;
        std::size_t j = i + 1;
        if (j < pattern.size() && pattern[j] == '%') {
            i = j;
            continue;
        }
        while (j < pattern.size() && (pattern[j] == '0' || std::isdigit(pattern[j]))) ++j;
        if (j >= pattern.size() || pattern[j] != 'd') {
            throw Error("frame pattern '" + pattern + "' must use a single %d-style slot");
        }
        ++conversions;
        i = j;
    }
    if (conversions != 1) {
        throw Error("frame pattern '" + pattern + "' must contain exactly one %d-style slot");
    }
    char buf[512];
    const int n = std::snprintf(buf, sizeof(buf), pattern.c_str(), index);
    if (n < 0 || n >= static_cast<int>(sizeof(buf))) {
        throw Error("frame pattern '" + pattern + "' expands to an oversized name");
    }
    return std::string(buf, static_cast<std::size_t>(n));
}

std::vector<Frame> load_frames(const std::string& directory, const std::string& pattern,
                               int start, int count) {
    std::vector<Frame> frames;
    if (count == 0) return frames;
    if (!fs::is_directory(directory)) {
        throw Error("input directory '" + directory + "' does not exist");
    }
    for (int i = 0;; ++i) {
        if (count >= 0 && i >= count) break;
        const int index = start + i;
        const fs::path path = fs::path(directory) / format_frame_name(pattern, index);
        if (!fs::exists(path)) {
            if (count < 0) break;  // auto-detect mode stops at the first gap
            throw Error("missing frame " + std::to_string(index) + ": '" + path.string() + "'");
        }
        Frame f{read_image(path.string()), index};
        if (!frames.empty()) {
            const RgbImage& first = frames.front().image;
            if (f.image.width() != first.width() || f.image.height() != first.height()) {
                throw Error("frame " + std::to_string(index) + " is " +
                            std::to_string(f.image.width()) + "x" +
                            std::to_string(f.image.height()) + " but frame " +
                            std::to_string(frames.front().index) + " is " +
                            std::to_string(first.width()) + "x" + std::to_string(first.height()));
            }
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

std::vector<VolumeWindow> volume_windows(int frame_count, int volume_size) {
    if (volume_size < 2) throw Error("volume size must be >= 2");
    std::vector<VolumeWindow> windows;
    for (int start = 0; start < frame_count; start += volume_size) {
        const int count = std::min(volume_size, frame_count - start);
        if (count < 2) break;  // a trailing single frame carries no motion evidence
        windows.push_back({start, count});
    }
    return windows;
}

}  // namespace attn
