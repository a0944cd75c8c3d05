#include "attn/grouping.hpp"

#include <algorithm>
#include <cmath>

#include "attn/errors.hpp"

namespace attn {

MotionSignature average_motion_signature(const Region& region, int t,
                                         const LabelMap& xy_lm,
                                         const std::vector<std::vector<RegionAngle>>& xt_angles,
                                         const std::vector<Segmentation>& xt_segs,
                                         const std::vector<std::vector<RegionAngle>>& yt_angles,
                                         const std::vector<Segmentation>& yt_segs) {
    double sum_h = 0.0, sum_v = 0.0;
    for (int pos_y = region.top; pos_y <= region.bottom; ++pos_y) {
        const LabelMap& xt_lm = xt_segs[pos_y].label_map;
        for (int pos_x = region.left; pos_x <= region.right; ++pos_x) {
            if (xy_lm.at(pos_x, pos_y) != region.id) continue;
            const int index_xt = xt_lm.at(pos_x, t);
            const int index_yt = yt_segs[pos_x].label_map.at(pos_y, t);
            sum_h += xt_angles[pos_y][index_xt].phi_deg;
            sum_v += yt_angles[pos_x][index_yt].phi_deg;
        }
    }
    return {sum_h / region.size, sum_v / region.size};
}

namespace {

bool passes_noise_floor(const MotionSignature& sig, const GroupingParams& p) {
    const bool h_ok = std::abs(sig.h_phi - 90.0) > p.sigma_xt;
    const bool v_ok = std::abs(sig.v_phi - 90.0) > p.sigma_yt;
    return p.noise_mode == NoiseMode::Or ? (h_ok || v_ok) : (h_ok && v_ok);
}

}  // namespace

ConditionCheck check_conditions(const MotionSignature& seed_sig,
                                const MotionSignature& cand_sig, long long prospective_size,
                                std::optional<long long> max_prev_size,
                                const GroupingParams& params) {
    // (a) similar motion signature, measured as the distance between the
    // seed's and the candidate's averaged angles. Comparing the raw
    // magnitude of the candidate signature instead would reject any static
    // signature outright (|(90, 90)| is approximately 127).
    if (params.similarity_check) {
        const double dist = std::hypot(seed_sig.h_phi - cand_sig.h_phi,
                                       seed_sig.v_phi - cand_sig.v_phi);
        if (!(dist < params.tau)) return {false, GrowReject::Similarity};
    }
    // (b) minimum deviation from the static angle of 90 degrees
    if (!passes_noise_floor(cand_sig, params)) return {false, GrowReject::NoiseFloor};
    // (c) bounded growth relative to the object's size on previous frames
    if (max_prev_size.has_value()) {
        if (!(static_cast<double>(prospective_size) < params.eta *
                                                          static_cast<double>(*max_prev_size))) {
            return {false, GrowReject::SizeGrowth};
        }
    }
    return {true, GrowReject::None};
}

std::vector<int> grow_members(int seed, const std::vector<std::vector<int>>& adjacency,
                              const std::vector<MotionSignature>& signatures,
                              const std::vector<long long>& sizes,
                              std::optional<long long> max_prev_size,
                              const GroupingParams& params) {
    std::vector<int> members{seed};
    // A static-looking seed carries no usable motion signature; the object
    // stays the seed region alone.
    if (!passes_noise_floor(signatures[seed], params)) return members;

    long long current_size = sizes[seed];
    std::vector<bool> visited(adjacency.size(), false);
    visited[seed] = true;
    std::vector<int> open;  // FIFO of candidates
    for (int nb : adjacency[seed]) {
        visited[nb] = true;
        open.push_back(nb);
    }
    for (std::size_t head = 0; head < open.size(); ++head) {
        const int cand = open[head];
        const ConditionCheck check = check_conditions(signatures[seed], signatures[cand],
                                                      current_size + sizes[cand],
                                                      max_prev_size, params);
        if (!check.accepted) continue;
        members.push_back(cand);
        current_size += sizes[cand];
        for (int nb : adjacency[cand]) {
            if (!visited[nb]) {
                visited[nb] = true;
                open.push_back(nb);
            }
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

namespace {

ObjectSelection make_selection(int frame_index, int cycle, int seed,
                               std::vector<int> members, const LabelMap& lm) {
    ObjectSelection sel;
    sel.frame_index = frame_index;
    sel.cycle = cycle;
    sel.seed_region = seed;
    sel.members = std::move(members);
    sel.mask = GrayImage(lm.width, lm.height, 0);
    sel.left = lm.width;
    sel.top = lm.height;
    sel.right = -1;
    sel.bottom = -1;
    std::vector<bool> is_member(0);
    int max_id = 0;
    for (int m : sel.members) max_id = std::max(max_id, m);
    is_member.assign(max_id + 1, false);
    for (int m : sel.members) is_member[m] = true;
    for (int y = 0; y < lm.height; ++y) {
        for (int x = 0; x < lm.width; ++x) {
            const int id = lm.at(x, y);
            if (id <= max_id && is_member[id]) {
                sel.mask.at(x, y) = 255;
                sel.size++;
                sel.left = std::min(sel.left, x);
                sel.right = std::max(sel.right, x);
                sel.top = std::min(sel.top, y);
                sel.bottom = std::max(sel.bottom, y);
            }
        }
    }
    return sel;
}

}  // namespace

ObjectSelection grow_object(int foa, int frame_index, const Segmentation& xy_seg,
                            const std::vector<MotionSignature>& signatures,
                            std::optional<long long> max_prev_size,
                            const GroupingParams& params) {
    std::vector<std::vector<int>> adjacency;
    std::vector<long long> sizes;
    adjacency.reserve(xy_seg.regions.size());
    sizes.reserve(xy_seg.regions.size());
    for (const Region& r : xy_seg.regions) {
        adjacency.push_back(r.neighbors);
        sizes.push_back(r.size);
    }
    std::vector<int> members =
        grow_members(foa, adjacency, signatures, sizes, max_prev_size, params);
    return make_selection(frame_index, 0, foa, std::move(members), xy_seg.label_map);
}

FrameSaliency apply_ior(FrameSaliency fs, const ObjectSelection& selection) {
    for (int m : selection.members) {
        fs.suppressed[m] = true;
        fs.values[m] = 0.0;
    }
    return fs;
}

std::vector<ObjectSelection> select_objects(FrameContext& ctx,
                                            std::vector<std::optional<long long>>& max_prev_sizes,
                                            const GroupingParams& params) {
    const Segmentation& xy_seg = *ctx.xy_segmentation;
    std::vector<std::vector<int>> adjacency;
    std::vector<long long> sizes;
    adjacency.reserve(xy_seg.regions.size());
    sizes.reserve(xy_seg.regions.size());
    for (const Region& r : xy_seg.regions) {
        adjacency.push_back(r.neighbors);
        sizes.push_back(r.size);
    }
    if (max_prev_sizes.size() < static_cast<std::size_t>(params.cycles)) {
        max_prev_sizes.resize(params.cycles);
    }

    std::vector<ObjectSelection> selections;
    for (int cycle = 0; cycle < params.cycles; ++cycle) {
        int foa = -1;
        try {
            foa = select_foa(ctx.saliency);
        } catch (const NoFoaError&) {
            break;
        }
        std::vector<int> members = grow_members(foa, adjacency, ctx.signatures, sizes,
                                                max_prev_sizes[cycle], params);
        ObjectSelection sel = make_selection(ctx.frame_index, cycle, foa, std::move(members),
                                             xy_seg.label_map);
        ctx.saliency = apply_ior(std::move(ctx.saliency), sel);
        max_prev_sizes[cycle] =
            std::max(max_prev_sizes[cycle].value_or(0), sel.size);
        selections.push_back(std::move(sel));
    }
    return selections;
}

}  // namespace attn
