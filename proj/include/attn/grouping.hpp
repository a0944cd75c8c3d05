#pragma once

#include <optional>
#include <vector>

#include "attn/motion.hpp"
#include "attn/saliency.hpp"
#include "attn/segmentation.hpp"

namespace attn {

/// Pixel-averaged X-T and Y-T angles of an X-Y region, in degrees.
struct MotionSignature {
    double h_phi = 90.0;  // averaged X-T (horizontal-motion) angle
    double v_phi = 90.0;  // averaged Y-T (vertical-motion) angle
};

enum class NoiseMode { And, Or };

struct GroupingParams {
    double tau = 44.0;       // max signature distance candidate <-> seed
    double sigma_xt = 10.0;  // noise floor on |h_phi - 90|
    double sigma_yt = 10.0;  // noise floor on |v_phi - 90|
    double eta = 1.5;        // max size growth vs previous frames
    NoiseMode noise_mode = NoiseMode::Or;
    int cycles = 1;               // objects to select per frame
    bool similarity_check = true;  // disables the signature-distance test when false
};

/// The grouped multi-region object at a focus of attention.
struct ObjectSelection {
    int frame_index = 0;  // global sequence index
    int cycle = 0;
    int seed_region = -1;
    std::vector<int> members;  // sorted region ids, always containing the seed
    GrayImage mask;            // 0 / 255
    int left = 0, top = 0, right = 0, bottom = 0;  // union bounding box
    long long size = 0;                            // total pixels
};

enum class GrowReject { None, Similarity, NoiseFloor, SizeGrowth };

struct ConditionCheck {
    bool accepted = false;
    GrowReject reason = GrowReject::None;  // first failed condition
};

/// Looks up the low-level motion angles for every member pixel of an X-Y
/// region: the X-T slice at the pixel's row and the Y-T slice at its
/// column, both at temporal position t, averaged over the region.
MotionSignature average_motion_signature(const Region& region, int t,
                                         const LabelMap& xy_label_map,
                                         const std::vector<std::vector<RegionAngle>>& xt_angles,
                                         const std::vector<Segmentation>& xt_segmentations,
                                         const std::vector<std::vector<RegionAngle>>& yt_angles,
                                         const std::vector<Segmentation>& yt_segmentations);

/// Acceptance test for one growth candidate:
///  (a) Euclidean distance between seed and candidate signatures < tau
///  (b) candidate deviates from 90 degrees by more than the noise floor
///      (per noise_mode on the two axes)
///  (c) the object size after adding the candidate stays below
///      eta * max_prev_size; skipped while max_prev_size is unset
ConditionCheck check_conditions(const MotionSignature& seed_signature,
                                const MotionSignature& candidate_signature,
                                long long prospective_size,
                                std::optional<long long> max_prev_size,
                                const GroupingParams& params);

/// Breadth-first growth over the region adjacency graph. The seed is always
/// a member; candidates are compared against the seed's signature (not
/// their local parent's), so acceptance does not depend on visit order.
/// A seed that itself fails the noise floor terminates growth immediately.
/// Returns sorted member ids.
std::vector<int> grow_members(int seed, const std::vector<std::vector<int>>& adjacency,
                              const std::vector<MotionSignature>& signatures,
                              const std::vector<long long>& sizes,
                              std::optional<long long> max_prev_size,
                              const GroupingParams& params);

/// grow_members plus the pixel-level artifacts (mask, bbox, size).
ObjectSelection grow_object(int foa, int frame_index, const Segmentation& xy_segmentation,
                            const std::vector<MotionSignature>& signatures,
                            std::optional<long long> max_prev_size,
                            const GroupingParams& params);

/// Object-based inhibition of return: every member of the selection is
/// suppressed (value zeroed, excluded from later argmax).
FrameSaliency apply_ior(FrameSaliency frame_saliency, const ObjectSelection& selection);

/// Everything select_objects needs for one frame.
struct FrameContext {
    int t = 0;            // temporal position within the volume
    int frame_index = 0;  // global sequence index
    const Segmentation* xy_segmentation = nullptr;
    std::vector<MotionSignature> signatures;
    FrameSaliency saliency;  // mutated by IOR as cycles run
};

/// Runs cycles x (FOA -> grow -> IOR) on one frame. max_prev_sizes holds
/// one entry per cycle, carried across the frames of a volume by the
/// caller and reset at volume boundaries; unset entries skip condition (c),
/// which makes the first frame of each volume exempt. FOA exhaustion ends
/// the frame early with fewer selections.
std::vector<ObjectSelection> select_objects(FrameContext& context,
                                            std::vector<std::optional<long long>>& max_prev_sizes,
                                            const GroupingParams& params);

}  // namespace attn
