#pragma once

#include <string>
#include <vector>

#include "attn/image.hpp"

namespace attn {

struct Frame {
    RgbImage image;
    int index = 0;  // frame number within the input sequence
};

/// T stacked same-sized frames forming an X-Y-T pixel volume. Immutable
/// after construction; safe to share read-only across workers.
class FrameVolume {
public:
    /// Requires >= 2 same-sized frames (temporal angles need two time rows).
    static FrameVolume from_frames(std::vector<Frame> frames);

    int width() const { return width_; }
    int height() const { return height_; }
    int depth() const { return static_cast<int>(frames_.size()); }

    const RgbImage& frame(int t) const { return frames_[t].image; }
    int frame_index(int t) const { return frames_[t].index; }

    Rgb8 pixel(int x, int y, int t) const { return frames_[t].image.at(x, y); }

private:
    std::vector<Frame> frames_;
    int width_ = 0;
    int height_ = 0;
};

enum class SliceAxis { XY, XT, YT };

/// One reslicing of a volume. Spatiotemporal slices keep the spatial
/// coordinate on the horizontal axis and time on the vertical axis:
///   XY: T slices of W x H (the input frames)
///   XT: H slices of W x T (slice y, pixel (x, t))
///   YT: W slices of H x T (slice x, pixel (y, t))
struct SliceStack {
    SliceAxis axis = SliceAxis::XY;
    int slice_width = 0;
    int slice_height = 0;
    std::vector<RgbImage> slices;
};

SliceStack extract_slices(const FrameVolume& volume, SliceAxis axis);

/// Loads `pattern % index` for index in [start, start+count). A negative
/// count consumes consecutive files until the first missing one.
/// The pattern must contain exactly one printf-style integer conversion.
std::vector<Frame> load_frames(const std::string& directory, const std::string& pattern,
                               int start, int count);

/// Formats a frame filename from a printf-style pattern, e.g.
/// ("frame_%04d.png", 7) -> "frame_0007.png". Validates the pattern.
std::string format_frame_name(const std::string& pattern, int index);

struct VolumeWindow {
    int start = 0;  // offset into the loaded frame list
    int count = 0;
};

/// Partitions a continuous sequence into consecutive non-overlapping
/// volumes of `volume_size` frames. A trailing window shorter than
/// `volume_size` is kept if it still has >= 2 frames, else dropped.
std::vector<VolumeWindow> volume_windows(int frame_count, int volume_size);

}  // namespace attn
