#include "combopt/gtsp/reduce.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

namespace combopt::gtsp {

namespace {

// Weights clamped so that delta sums cannot overflow; the dominance semantics
// of forbidden edges survive the clamp.
constexpr Weight kClamp = Weight{1} << 55;
Weight clampw(Weight w) { return std::min(w, kClamp); }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Vertices of cluster c in descending index order: on mutual domination ties
// the higher-indexed vertex is tested (and removed) first, so the
// lower-indexed one survives.
std::vector<int> descending(const std::vector<int>& cluster) {
    std::vector<int> out(cluster.rbegin(), cluster.rend());
    return out;
}

struct VertexReducer {
    const GtspInstance& inst;
    std::vector<char> alive;

    explicit VertexReducer(const GtspInstance& i) : inst(i), alive(i.n(), 1) {}

    int alive_in_cluster(int c) const {
        int k = 0;
        for (int v : inst.cluster(c)) k += alive[v];
        return k;
    }

    // Tests whether vertex r is redundant among the currently alive vertices.
    bool redundant(int r) const {
        const int C = inst.cluster_of(r);
        std::vector<int> others;
        for (int v : inst.cluster(C))
            if (alive[v] && v != r) others.push_back(v);
        if (others.empty()) return false;

        // max over r' of the in/out deltas, per outside vertex
        const int n = inst.n();
        std::vector<Weight> max_in(n, std::numeric_limits<Weight>::min());
        std::vector<Weight> max_out(n, std::numeric_limits<Weight>::min());
        for (int x = 0; x < n; ++x) {
            if (!alive[x] || inst.cluster_of(x) == C) continue;
            for (int rp : others) {
                max_in[x] = std::max(max_in[x], clampw(inst.weight(x, r)) - clampw(inst.weight(x, rp)));
                max_out[x] =
                    std::max(max_out[x], clampw(inst.weight(r, x)) - clampw(inst.weight(rp, x)));
            }
        }

        // Accelerated negative certificate, clusters scanned in ascending index:
        // a pair of outside vertices from distinct clusters whose best deltas
        // cannot reach zero proves r irredundant.
        Weight best_in = kClamp * 4, best_out = kClamp * 4;
        bool seen_prev = false;
        for (int Z = 0; Z < inst.m(); ++Z) {
            if (Z == C) continue;
            Weight zmin_in = kClamp * 4, zmin_out = kClamp * 4;
            bool any = false;
            for (int x : inst.cluster(Z)) {
                if (!alive[x]) continue;
                zmin_in = std::min(zmin_in, max_in[x]);
                zmin_out = std::min(zmin_out, max_out[x]);
                any = true;
            }
            if (!any) continue;
            if (seen_prev && (best_in + zmin_out < 0 || zmin_in + best_out < 0)) return false;
            best_in = std::min(best_in, zmin_in);
            best_out = std::min(best_out, zmin_out);
            seen_prev = true;
        }

        // Full test: every through-pair must have a dominating r'.
        for (int X = 0; X < inst.m(); ++X) {
            if (X == C) continue;
            for (int Y = 0; Y < inst.m(); ++Y) {
                if (Y == C || Y == X) continue;
                for (int x : inst.cluster(X)) {
                    if (!alive[x]) continue;
                    for (int y : inst.cluster(Y)) {
                        if (!alive[y]) continue;
                        bool dominated = false;
                        for (int rp : others) {
                            const Weight via_rp =
                                wadd(inst.weight(x, rp), inst.weight(rp, y));
                            const Weight via_r = wadd(inst.weight(x, r), inst.weight(r, y));
                            if (via_rp <= via_r) {
                                dominated = true;
                                break;
                            }
                        }
                        if (!dominated) return false;
                    }
                }
            }
        }
        return true;
    }
};

GtspInstance build_reduced(const GtspInstance& inst, const std::vector<char>& alive,
                           std::vector<int>& vertex_map) {
    const int n = inst.n();
    vertex_map.assign(n, -1);
    int next_id = 0;
    for (int v = 0; v < n; ++v)
        if (alive[v]) vertex_map[v] = next_id++;
    std::vector<Weight> w(static_cast<std::size_t>(next_id) * next_id, 0);
    for (int i = 0; i < n; ++i) {
        if (vertex_map[i] < 0) continue;
        for (int j = 0; j < n; ++j) {
            if (vertex_map[j] < 0) continue;
            w[static_cast<std::size_t>(vertex_map[i]) * next_id + vertex_map[j]] =
                inst.weight(i, j);
        }
    }
    std::vector<std::vector<int>> clusters(inst.m());
    for (int c = 0; c < inst.m(); ++c)
        for (int v : inst.cluster(c))
            if (alive[v]) clusters[c].push_back(vertex_map[v]);
    return GtspInstance(std::move(w), std::move(clusters));
}

}  // namespace

std::pair<GtspInstance, ReductionReport> reduce_vertices(const GtspInstance& inst) {
    if (inst.m() < 3) throw std::invalid_argument("vertex reduction needs at least 3 clusters");
    const auto t0 = Clock::now();
    VertexReducer red(inst);
    std::vector<int> tested(inst.n(), 0);

    bool removed_this_cycle = true;
    while (removed_this_cycle) {
        removed_this_cycle = false;
        for (int c = 0; c < inst.m(); ++c) {
            for (int r : descending(inst.cluster(c))) {
                if (!red.alive[r] || tested[r] >= 2) continue;
                if (red.alive_in_cluster(c) <= 1) continue;
                ++tested[r];
                if (red.redundant(r)) {
                    red.alive[r] = 0;
                    removed_this_cycle = true;
                }
            }
        }
    }

    ReductionReport report;
    for (int v = 0; v < inst.n(); ++v)
        if (!red.alive[v]) report.removed_vertices.push_back(v);
    GtspInstance reduced = build_reduced(inst, red.alive, report.vertex_map);
    report.elapsed_sec = seconds_since(t0);
    return {std::move(reduced), std::move(report)};
}

std::pair<GtspInstance, ReductionReport> reduce_edges(const GtspInstance& inst) {
    if (inst.m() < 3) throw std::invalid_argument("edge reduction needs at least 3 clusters");
    const auto t0 = Clock::now();
    const int n = inst.n();
    std::vector<Weight> w = inst.weight_matrix();
    auto wat = [&](int i, int j) -> Weight& { return w[static_cast<std::size_t>(i) * n + j]; };
    long long removed = 0;

    for (int C = 0; C < inst.m(); ++C) {
        const auto& cl = inst.cluster(C);
        if (cl.size() <= 1) continue;
        for (int v : descending(cl)) {
            // lowest-indexed alternative as the pivot v''
            int pivot = -1;
            for (int cand : cl)
                if (cand != v) {
                    pivot = cand;
                    break;
                }
            // P: sorted out-deltas of v against the pivot for all x outside C
            struct Entry {
                Weight delta;
                int x;
            };
            std::vector<Entry> P;
            P.reserve(n - cl.size());
            for (int x = 0; x < n; ++x) {
                if (inst.cluster_of(x) == C) continue;
                P.push_back({clampw(wat(v, x)) - clampw(wat(pivot, x)), x});
            }
            std::sort(P.begin(), P.end(), [](const Entry& a, const Entry& b) {
                return a.delta != b.delta ? a.delta < b.delta : a.x < b.x;
            });

            for (int U = 0; U < inst.m(); ++U) {
                if (U == C) continue;
                for (int u : inst.cluster(U)) {
                    if (is_forbidden(wat(u, v))) continue;  // already suppressed
                    const Weight delta_u = clampw(wat(u, v)) - clampw(wat(u, pivot));
                    bool redundant = true;
                    for (const Entry& e : P) {
                        if (e.delta + delta_u >= 0) break;  // the rest only grows
                        if (inst.cluster_of(e.x) == U) continue;
                        // pivot fails for e.x; some other v' must dominate
                        bool saved = false;
                        for (int vp : cl) {
                            if (vp == v || vp == pivot) continue;
                            const Weight din = clampw(wat(u, v)) - clampw(wat(u, vp));
                            const Weight dout = clampw(wat(v, e.x)) - clampw(wat(vp, e.x));
                            if (din + dout >= 0) {
                                saved = true;
                                break;
                            }
                        }
                        if (!saved) {
                            redundant = false;
                            break;
                        }
                    }
                    if (redundant) {
                        wat(u, v) = kInfiniteWeight;
                        ++removed;
                    }
                }
            }
        }
    }

    ReductionReport report;
    report.removed_edges = removed;
    report.vertex_map.resize(n);
    for (int v = 0; v < n; ++v) report.vertex_map[v] = v;
    GtspInstance reduced(std::move(w), std::vector<std::vector<int>>(inst.clusters()));
    report.elapsed_sec = seconds_since(t0);
    return {std::move(reduced), std::move(report)};
}

std::pair<GtspInstance, ReductionReport> preprocess(const GtspInstance& inst) {
    const auto t0 = Clock::now();
    auto [vreduced, vreport] = reduce_vertices(inst);
    auto [ereduced, ereport] = reduce_edges(vreduced);
    ReductionReport report;
    report.removed_vertices = vreport.removed_vertices;
    report.removed_edges = ereport.removed_edges;
    report.vertex_map = vreport.vertex_map;
    report.elapsed_sec = seconds_since(t0);
    return {std::move(ereduced), std::move(report)};
}

}  // namespace combopt::gtsp
