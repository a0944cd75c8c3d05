#include "attn/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "attn/errors.hpp"
#include "attn/rng.hpp"

namespace attn {

double Region::color_distance_to(const Region& other) const {
    const double dr = mean_r - other.mean_r;
    const double dg = mean_g - other.mean_g;
    const double db = mean_b - other.mean_b;
    return std::sqrt(dr * dr + dg * dg + db * db);
}

namespace {

// Grows regions by BFS from raster-order seeds. FIFO queue and a fixed
// neighbor order keep the labeling deterministic.
LabelMap grow_regions(const RgbImage& image, const SegmentationParams& params) {
    const int w = image.width(), h = image.height();
    LabelMap lm{w, h, std::vector<std::int32_t>(static_cast<std::size_t>(w) * h, -1)};
    std::vector<std::int32_t> queue;
    queue.reserve(1024);
    std::int32_t next_id = 0;
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (lm.at(sx, sy) >= 0) continue;
            const std::int32_t id = next_id++;
            const Rgb8 seed_color = image.at(sx, sy);
            lm.at(sx, sy) = id;
            queue.clear();
            queue.push_back(sy * w + sx);
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const int px = queue[head] % w, py = queue[head] / w;
                const Rgb8 border_color = image.at(px, py);
                for (int k = 0; k < 4; ++k) {
                    const int cx = px + dx[k], cy = py + dy[k];
                    if (cx < 0 || cy < 0 || cx >= w || cy >= h) continue;
                    if (lm.at(cx, cy) >= 0) continue;
                    const Rgb8 cand = image.at(cx, cy);
                    if (color_distance(cand, seed_color) <= params.seed_threshold &&
                        color_distance(cand, border_color) <= params.border_threshold) {
                        lm.at(cx, cy) = id;
                        queue.push_back(cy * w + cx);
                    }
                }
            }
        }
    }
    return lm;
}

struct MergeState {
    std::vector<long long> size;
    std::vector<double> sum_r, sum_g, sum_b;
    std::vector<std::vector<std::int32_t>> pixels;  // linear indices
    std::vector<std::set<int>> adj;
    std::vector<bool> alive;
};

// Absorbs regions below min_region_size into the neighbor with the closest
// current mean color; ties go to the lowest id. Smallest ids first; runs
// until every remaining region meets the size floor or has no neighbor.
void merge_small_regions(LabelMap& lm, const RgbImage& image, int min_region_size) {
    if (min_region_size <= 1) return;
    const int w = lm.width, h = lm.height;
    int n = 0;
    for (std::int32_t label : lm.labels) n = std::max(n, label + 1);

    MergeState st;
    st.size.assign(n, 0);
    st.sum_r.assign(n, 0.0);
    st.sum_g.assign(n, 0.0);
    st.sum_b.assign(n, 0.0);
    st.pixels.assign(n, {});
    st.adj.assign(n, {});
    st.alive.assign(n, true);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int id = lm.at(x, y);
            st.size[id]++;
            const Rgb8 p = image.at(x, y);
            st.sum_r[id] += p.r;
            st.sum_g[id] += p.g;
            st.sum_b[id] += p.b;
            st.pixels[id].push_back(y * w + x);
            if (x + 1 < w && lm.at(x + 1, y) != id) {
                st.adj[id].insert(lm.at(x + 1, y));
                st.adj[lm.at(x + 1, y)].insert(id);
            }
            if (y + 1 < h && lm.at(x, y + 1) != id) {
                st.adj[id].insert(lm.at(x, y + 1));
                st.adj[lm.at(x, y + 1)].insert(id);
            }
        }
    }

    auto mean_dist = [&](int a, int b) {
        const double dr = st.sum_r[a] / st.size[a] - st.sum_r[b] / st.size[b];
        const double dg = st.sum_g[a] / st.size[a] - st.sum_g[b] / st.size[b];
        const double db = st.sum_b[a] / st.size[a] - st.sum_b[b] / st.size[b];
        return std::sqrt(dr * dr + dg * dg + db * db);
    };

    std::set<int> smalls;
    for (int id = 0; id < n; ++id)
        if (st.size[id] < min_region_size) smalls.insert(id);

    while (!smalls.empty()) {
        const int r = *smalls.begin();
        smalls.erase(smalls.begin());
        if (!st.alive[r] || st.size[r] >= min_region_size) continue;
        if (st.adj[r].empty()) continue;  // isolated remnant stays

        int target = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int nb : st.adj[r]) {
            const double d = mean_dist(r, nb);
            if (d < best) {
                best = d;
                target = nb;
            }
        }

        for (std::int32_t pix : st.pixels[r]) lm.labels[pix] = target;
        st.pixels[target].insert(st.pixels[target].end(), st.pixels[r].begin(), st.pixels[r].end());
        st.pixels[r].clear();
        st.size[target] += st.size[r];
        st.sum_r[target] += st.sum_r[r];
        st.sum_g[target] += st.sum_g[r];
        st.sum_b[target] += st.sum_b[r];
        for (int nb : st.adj[r]) {
            st.adj[nb].erase(r);
            if (nb != target) {
                st.adj[nb].insert(target);
                st.adj[target].insert(nb);
            }
        }
        st.adj[target].erase(r);
        st.adj[r].clear();
        st.alive[r] = false;
        if (st.size[target] < min_region_size) smalls.insert(target);
    }
}

// Reassigns ids compactly in raster order of first occurrence.
void compact_labels(LabelMap& lm) {
    int n = 0;
    for (std::int32_t label : lm.labels) n = std::max(n, label + 1);
    std::vector<std::int32_t> remap(n, -1);
    std::int32_t next_id = 0;
    for (std::int32_t& label : lm.labels) {
        if (remap[label] < 0) remap[label] = next_id++;
        label = remap[label];
    }
}

}  // namespace

std::vector<std::vector<int>> compute_adjacency(const LabelMap& lm) {
    int n = 0;
    for (std::int32_t label : lm.labels) n = std::max(n, label + 1);
    std::vector<std::set<int>> adj(n);
    for (int y = 0; y < lm.height; ++y) {
        for (int x = 0; x < lm.width; ++x) {
            const int id = lm.at(x, y);
            if (x + 1 < lm.width && lm.at(x + 1, y) != id) {
                adj[id].insert(lm.at(x + 1, y));
                adj[lm.at(x + 1, y)].insert(id);
            }
            if (y + 1 < lm.height && lm.at(x, y + 1) != id) {
                adj[id].insert(lm.at(x, y + 1));
                adj[lm.at(x, y + 1)].insert(id);
            }
        }
    }
    std::vector<std::vector<int>> out(n);
    for (int i = 0; i < n; ++i) out[i].assign(adj[i].begin(), adj[i].end());
    return out;
}

std::vector<Region> build_regions(const LabelMap& lm, const RgbImage& image) {
    int n = 0;
    for (std::int32_t label : lm.labels) n = std::max(n, label + 1);
    std::vector<Region> regions(n);
    for (int i = 0; i < n; ++i) {
        regions[i].id = i;
        regions[i].left = lm.width;
        regions[i].top = lm.height;
        regions[i].right = -1;
        regions[i].bottom = -1;
    }
    std::vector<double> sx(n, 0.0), sy(n, 0.0);
    for (int y = 0; y < lm.height; ++y) {
        for (int x = 0; x < lm.width; ++x) {
            Region& r = regions[lm.at(x, y)];
            r.size++;
            r.left = std::min(r.left, x);
            r.right = std::max(r.right, x);
            r.top = std::min(r.top, y);
            r.bottom = std::max(r.bottom, y);
            const Rgb8 p = image.at(x, y);
            r.mean_r += p.r;
            r.mean_g += p.g;
            r.mean_b += p.b;
            sx[r.id] += x;
            sy[r.id] += y;
        }
    }
    for (Region& r : regions) {
        r.centroid_x = sx[r.id] / r.size;
        r.centroid_y = sy[r.id] / r.size;
        r.mean_r /= r.size;
        r.mean_g /= r.size;
        r.mean_b /= r.size;
    }
    auto adjacency = compute_adjacency(lm);
    for (int i = 0; i < n; ++i) regions[i].neighbors = std::move(adjacency[i]);
    return regions;
}

Segmentation segment_slice(const RgbImage& image, const SegmentationParams& params) {
    if (image.empty()) throw Error("cannot segment an empty image");
    LabelMap lm = grow_regions(image, params);
    merge_small_regions(lm, image, params.min_region_size);
    compact_labels(lm);
    Segmentation seg;
    seg.regions = build_regions(lm, image);
    seg.label_map = std::move(lm);
    return seg;
}

RgbImage render_label_colors(const LabelMap& lm, std::uint64_t seed) {
    RgbImage out(lm.width, lm.height);
    for (int y = 0; y < lm.height; ++y) {
        for (int x = 0; x < lm.width; ++x) {
            const std::uint64_t h = hash_mix(seed, static_cast<std::uint64_t>(lm.at(x, y)));
            out.at(x, y) = Rgb8{static_cast<std::uint8_t>(40 + (h & 0xFF) % 200),
                                static_cast<std::uint8_t>(40 + ((h >> 8) & 0xFF) % 200),
                                static_cast<std::uint8_t>(40 + ((h >> 16) & 0xFF) % 200)};
        }
    }
    return out;
}

}  // namespace attn
