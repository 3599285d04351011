#include "combopt/gtsp/cluster_opt.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace combopt::gtsp {

namespace {

// Rotates `order` so that the smallest cluster in it comes first.
std::vector<int> rotate_to_smallest(const GtspInstance& inst, std::vector<int> order) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (inst.cluster_size(order[i]) < inst.cluster_size(order[best])) best = i;
    std::rotate(order.begin(), order.begin() + best, order.end());
    return order;
}

// Reduction of the first cluster for a fixed order (valid for this order only).
// Returns the surviving vertices of cluster `order[0]`.
std::vector<int> reduce_first(const GtspInstance& inst, const std::vector<int>& order) {
    const auto& R = inst.cluster(order[0]);
    if (R.size() <= 1 || order.size() < 3) return R;
    const auto& U = inst.cluster(order.back());
    const auto& V = inst.cluster(order[1]);

    std::vector<Weight> l(U.size() * V.size(), kInfiniteWeight);
    std::vector<int> c(U.size() * V.size(), 0);
    for (std::size_t a = 0; a < U.size(); ++a)
        for (std::size_t b = 0; b < V.size(); ++b) {
            Weight& best = l[a * V.size() + b];
            for (int r : R) best = std::min(best, wadd(inst.weight(U[a], r), inst.weight(r, V[b])));
            int& cnt = c[a * V.size() + b];
            for (int r : R)
                if (wadd(inst.weight(U[a], r), inst.weight(r, V[b])) == best) ++cnt;
        }

    std::vector<int> alive;
    alive.reserve(R.size());
    std::vector<char> removed(R.size(), 0);
    for (std::size_t ri = 0; ri < R.size(); ++ri) {
        const int r = R[ri];
        bool needed = false;
        for (std::size_t a = 0; a < U.size() && !needed; ++a)
            for (std::size_t b = 0; b < V.size(); ++b) {
                const Weight w = wadd(inst.weight(U[a], r), inst.weight(r, V[b]));
                if (w == l[a * V.size() + b] && c[a * V.size() + b] == 1) {
                    needed = true;
                    break;
                }
            }
        if (needed) continue;
        for (std::size_t a = 0; a < U.size(); ++a)
            for (std::size_t b = 0; b < V.size(); ++b) {
                const Weight w = wadd(inst.weight(U[a], r), inst.weight(r, V[b]));
                if (w == l[a * V.size() + b]) --c[a * V.size() + b];
            }
        removed[ri] = 1;
    }
    for (std::size_t ri = 0; ri < R.size(); ++ri)
        if (!removed[ri]) alive.push_back(R[ri]);
    assert(!alive.empty());
    return alive;
}

}  // namespace

Weight co_order(const GtspInstance& inst, const std::vector<int>& order,
                std::vector<int>& vertex_of, CoRefinements ref) {
    const int m = static_cast<int>(order.size());
    std::vector<int> rot = ref.rotate_smallest ? rotate_to_smallest(inst, order) : order;

    std::vector<int> first =
        ref.reduce_first_cluster ? reduce_first(inst, rot) : inst.cluster(rot[0]);
    const int g = static_cast<int>(first.size());

    // dist[i] has g rows, one per first-layer vertex; dist[i][r * |Li| + v].
    std::vector<std::vector<Weight>> dist(m);
    std::vector<char> skipped(m, 0);
    dist[0].assign(static_cast<std::size_t>(g) * g, 0);  // unused placeholder

    auto layer = [&](int i) -> const std::vector<int>& { return inst.cluster(rot[i]); };

    {
        const auto& L1 = layer(1 % m);
        dist[1 % m].resize(static_cast<std::size_t>(g) * L1.size());
        for (int r = 0; r < g; ++r)
            for (std::size_t v = 0; v < L1.size(); ++v)
                dist[1 % m][r * L1.size() + v] = inst.weight(first[r], L1[v]);
    }

    int i = 1;
    while (i < m - 1) {
        const auto& Lc = layer(i);
        const auto& Ln = layer(i + 1);
        const bool can_skip = ref.improved_order && i + 2 <= m - 1;
        bool do_skip = false;
        if (can_skip) {
            const auto& L2 = layer(i + 2);
            const long long g_ = g, a = static_cast<long long>(Lc.size()),
                            b = static_cast<long long>(Ln.size()),
                            c = static_cast<long long>(L2.size());
            do_skip = g_ * a * b + g_ * b * c > a * b * c + g_ * a * c;
        }
        if (do_skip) {
            const auto& L2 = layer(i + 2);
            std::vector<Weight> bridge(Lc.size() * L2.size(), kInfiniteWeight);
            for (std::size_t u = 0; u < Lc.size(); ++u)
                for (std::size_t v = 0; v < L2.size(); ++v) {
                    Weight best = kInfiniteWeight;
                    for (std::size_t t = 0; t < Ln.size(); ++t)
                        best = std::min(best,
                                        wadd(inst.weight(Lc[u], Ln[t]), inst.weight(Ln[t], L2[v])));
                    bridge[u * L2.size() + v] = best;
                }
            dist[i + 2].assign(static_cast<std::size_t>(g) * L2.size(), kInfiniteWeight);
            for (int r = 0; r < g; ++r)
                for (std::size_t v = 0; v < L2.size(); ++v) {
                    Weight best = kInfiniteWeight;
                    for (std::size_t u = 0; u < Lc.size(); ++u)
                        best = std::min(best, wadd(dist[i][r * Lc.size() + u],
                                                   bridge[u * L2.size() + v]));
                    dist[i + 2][r * L2.size() + v] = best;
                }
            skipped[i + 1] = 1;
            i += 2;
        } else {
            dist[i + 1].assign(static_cast<std::size_t>(g) * Ln.size(), kInfiniteWeight);
            for (int r = 0; r < g; ++r)
                for (std::size_t v = 0; v < Ln.size(); ++v) {
                    Weight best = kInfiniteWeight;
                    for (std::size_t u = 0; u < Lc.size(); ++u)
                        best = std::min(
                            best, wadd(dist[i][r * Lc.size() + u], inst.weight(Lc[u], Ln[v])));
                    dist[i + 1][r * Ln.size() + v] = best;
                }
            i += 1;
        }
    }

    // Close the cycle.
    const auto& Lm = layer(m - 1);
    Weight best = kInfiniteWeight;
    int best_r = -1, best_v = -1;
    for (int r = 0; r < g; ++r)
        for (std::size_t v = 0; v < Lm.size(); ++v) {
            const Weight w = wadd(dist[m - 1][r * Lm.size() + v], inst.weight(Lm[v], first[r]));
            if (w < best) {
                best = w;
                best_r = r;
                best_v = static_cast<int>(v);
            }
        }
    if (best_r < 0) return kInfiniteWeight;

    // Backtrack the selection, lowest-index ties.
    std::vector<int> pick(m, -1);
    pick[0] = first[best_r];
    pick[m - 1] = Lm[best_v];
    int cur = m - 1, cur_v = best_v;
    while (cur > 1) {
        if (skipped[cur - 1]) {
            const auto& Lp = layer(cur - 2);
            const auto& Ls = layer(cur - 1);
            const auto& Lc = layer(cur);
            int chosen_u = -1, chosen_t = -1;
            for (std::size_t u = 0; u < Lp.size() && chosen_u < 0; ++u) {
                Weight bw = kInfiniteWeight;
                int bt = -1;
                for (std::size_t t = 0; t < Ls.size(); ++t) {
                    const Weight w =
                        wadd(inst.weight(Lp[u], Ls[t]), inst.weight(Ls[t], Lc[cur_v]));
                    if (w < bw) {
                        bw = w;
                        bt = static_cast<int>(t);
                    }
                }
                if (wadd(dist[cur - 2][best_r * Lp.size() + u], bw) ==
                    dist[cur][best_r * Lc.size() + cur_v]) {
                    chosen_u = static_cast<int>(u);
                    chosen_t = bt;
                }
            }
            assert(chosen_u >= 0);
            pick[cur - 1] = Ls[chosen_t];
            pick[cur - 2] = Lp[chosen_u];
            cur -= 2;
            cur_v = chosen_u;
        } else {
            const auto& Lp = layer(cur - 1);
            const auto& Lc = layer(cur);
            int chosen_u = -1;
            for (std::size_t u = 0; u < Lp.size(); ++u) {
                if (wadd(dist[cur - 1][best_r * Lp.size() + u],
                         inst.weight(Lp[u], Lc[cur_v])) ==
                    dist[cur][best_r * Lc.size() + cur_v]) {
                    chosen_u = static_cast<int>(u);
                    break;
                }
            }
            assert(chosen_u >= 0);
            pick[cur - 1] = Lp[chosen_u];
            cur -= 1;
            cur_v = chosen_u;
        }
    }

    for (int p = 0; p < m; ++p) vertex_of[rot[p]] = pick[p];
    return best;
}

CoResult cluster_optimize_checked(const GtspInstance& inst, const Tour& t, CoRefinements ref) {
    std::vector<int> order = tour_order(t, 0);
    std::vector<int> vertex_of = t.vertices;
    const Weight w = co_order(inst, order, vertex_of, ref);
    CoResult res;
    res.tour = t;
    res.tour.vertices = vertex_of;
    res.weight = w;
    res.feasible = !is_forbidden(w);
    if (!res.feasible) res.tour = t;  // leave input untouched on infeasible orders
    return res;
}

Tour cluster_optimize(const GtspInstance& inst, const Tour& t, CoRefinements ref) {
    CoResult res = cluster_optimize_checked(inst, t, ref);
    if (!res.feasible)
        throw InfeasibleOrderError("cluster order admits no tour with finite weight");
    return res.tour;
}

Weight reoptimize_clusters(const GtspInstance& inst, const std::vector<int>& order,
                           std::vector<int>& vertex_of, const std::vector<char>& affected) {
    const int m = static_cast<int>(order.size());
    int affected_count = 0;
    for (int p = 0; p < m; ++p)
        if (affected[order[p]]) ++affected_count;
    if (affected_count == m) return co_order(inst, order, vertex_of);
    if (affected_count == 0) {
        Weight total = 0;
        for (int p = 0; p < m; ++p)
            total = wadd(total, inst.weight(vertex_of[order[p]], vertex_of[order[(p + 1) % m]]));
        return total;
    }

    std::vector<char> edge_covered(m, 0);  // edge p: order[p] -> order[p+1]
    Weight total = 0;

    int start = 0;
    while (affected[order[start]]) ++start;  // exists since affected_count < m
    int p = start;
    do {
        if (affected[order[p]]) {
            int q = p;
            while (affected[order[(q + 1) % m]]) q = (q + 1) % m;
            // run of affected positions p..q with fixed anchors at p-1, q+1
            const int left = vertex_of[order[(p - 1 + m) % m]];
            const int right = vertex_of[order[(q + 1) % m]];
            std::vector<int> run_clusters;
            for (int r = p;; r = (r + 1) % m) {
                run_clusters.push_back(order[r]);
                if (r == q) break;
            }
            auto [w, picks] = detail::window_selection_dp(inst, left, run_clusters, right);
            for (std::size_t k = 0; k < run_clusters.size(); ++k)
                vertex_of[run_clusters[k]] = picks[k];
            total = wadd(total, w);
            for (int r = (p - 1 + m) % m;; r = (r + 1) % m) {
                edge_covered[r] = 1;
                if (r == q) break;
            }
            p = (q + 1) % m;
        } else {
            p = (p + 1) % m;
        }
    } while (p != start);

    for (int e = 0; e < m; ++e)
        if (!edge_covered[e])
            total = wadd(total, inst.weight(vertex_of[order[e]], vertex_of[order[(e + 1) % m]]));
    return total;
}

PathTable::PathTable(const GtspInstance& inst, int origin_cluster)
    : inst_(&inst), origin_(origin_cluster), support_(origin_cluster), last_(origin_cluster),
      prev_last_(-1) {}

void PathTable::extend(int next_cluster) {
    const auto& prev = inst_->cluster(last_);
    const auto& next = inst_->cluster(next_cluster);
    if (length_ == 1) {
        active_.resize(prev.size() * next.size());
        for (std::size_t u = 0; u < prev.size(); ++u)
            for (std::size_t v = 0; v < next.size(); ++v)
                active_[u * next.size() + v] = inst_->weight(prev[u], next[v]);
    } else if (inst_->cluster_size(last_) < inst_->cluster_size(support_)) {
        // Adopt the previous layer as the new supporting cluster.
        if (support_ != origin_) {
            const auto& orig = inst_->cluster(origin_);
            const auto& sup = inst_->cluster(support_);
            std::vector<Weight> merged(orig.size() * prev.size(), kInfiniteWeight);
            for (std::size_t u = 0; u < orig.size(); ++u)
                for (std::size_t v = 0; v < prev.size(); ++v) {
                    Weight best = kInfiniteWeight;
                    for (std::size_t z = 0; z < sup.size(); ++z)
                        best = std::min(best, wadd(frozen_[u * sup.size() + z],
                                                   active_[z * prev.size() + v]));
                    merged[u * prev.size() + v] = best;
                }
            frozen_ = std::move(merged);
        } else {
            frozen_ = active_;
        }
        support_ = last_;
        active_.assign(prev.size() * next.size(), kInfiniteWeight);
        for (std::size_t u = 0; u < prev.size(); ++u)
            for (std::size_t v = 0; v < next.size(); ++v)
                active_[u * next.size() + v] = inst_->weight(prev[u], next[v]);
    } else {
        const auto& sup = inst_->cluster(support_);
        std::vector<Weight> folded(sup.size() * next.size(), kInfiniteWeight);
        for (std::size_t u = 0; u < sup.size(); ++u)
            for (std::size_t v = 0; v < next.size(); ++v) {
                Weight best = kInfiniteWeight;
                for (std::size_t t = 0; t < prev.size(); ++t)
                    best = std::min(best, wadd(active_[u * prev.size() + t],
                                               inst_->weight(prev[t], next[v])));
                folded[u * next.size() + v] = best;
            }
        active_ = std::move(folded);
    }
    prev_last_ = last_;
    last_ = next_cluster;
    ++length_;
}

Weight PathTable::to_last(int origin_index, int last_index) const {
    const std::size_t ls = inst_->cluster(last_).size();
    if (support_ == origin_) return active_[origin_index * ls + last_index];
    const std::size_t ss = inst_->cluster(support_).size();
    Weight best = kInfiniteWeight;
    for (std::size_t z = 0; z < ss; ++z)
        best = std::min(best, wadd(frozen_[origin_index * ss + z], active_[z * ls + last_index]));
    return best;
}

std::vector<Weight> PathTable::last_matrix() const {
    const std::size_t os = inst_->cluster(origin_).size();
    const std::size_t ls = inst_->cluster(last_).size();
    std::vector<Weight> out(os * ls);
    for (std::size_t u = 0; u < os; ++u)
        for (std::size_t v = 0; v < ls; ++v)
            out[u * ls + v] = to_last(static_cast<int>(u), static_cast<int>(v));
    return out;
}

namespace detail {

Weight fragment_min_sum(const GtspInstance& inst, const std::vector<int>& order, int a, int b) {
    const int m = static_cast<int>(order.size());
    Weight total = 0;
    for (int p = a; p != b; p = (p + 1) % m)
        total = wadd(total, inst.pair_min(order[p], order[(p + 1) % m]));
    return total;
}

Weight fragment_lower_bound(const GtspInstance& inst, const std::vector<int>& order,
                            const std::vector<int>& vertex_of, int a, int b) {
    const int m = static_cast<int>(order.size());
    const int len = (b - a + m) % m;
    if (len == 0) return 0;
    const Weight min_sum = fragment_min_sum(inst, order, a, b);
    if (len == 1) return min_sum;

    Weight actual = 0;
    for (int p = a; p != b; p = (p + 1) % m)
        actual = wadd(actual, inst.weight(vertex_of[order[p]], vertex_of[order[(p + 1) % m]]));
    const int a1 = (a + 1) % m;
    const int b1 = (b - 1 + m) % m;
    const Weight max_head = inst.vert_max_out(vertex_of[order[a]], order[a1]);
    const Weight max_tail = inst.vert_max_in(order[b1], vertex_of[order[b]]);
    if (is_forbidden(actual) || is_forbidden(max_head) || is_forbidden(max_tail))
        return min_sum;
    const Weight theorem = actual - max_head - max_tail + inst.pair_min(order[a], order[a1]) +
                           inst.pair_min(order[b1], order[b]);
    return std::max(theorem, min_sum);
}

std::pair<Weight, std::vector<int>> LayeredCycle::shortest_cycle() const {
    const int k = static_cast<int>(layer_sizes.size());
    int anchor = 0;
    for (int i = 1; i < k; ++i)
        if (layer_sizes[i] < layer_sizes[anchor]) anchor = i;

    auto edge = [&](int layer, int u, int v) -> Weight {
        const int nxt = (layer + 1) % k;
        return edges[layer][static_cast<std::size_t>(u) * layer_sizes[nxt] + v];
    };

    Weight best_total = kInfiniteWeight;
    std::vector<int> best_pick;
    // dist[i][v] for the rotated sequence anchor, anchor+1, ..., anchor+k-1.
    for (int r = 0; r < layer_sizes[anchor]; ++r) {
        std::vector<std::vector<Weight>> dist(k);
        dist[0] = {0};
        for (int step = 1; step < k; ++step) {
            const int li = (anchor + step) % k;
            const int lp = (anchor + step - 1) % k;
            dist[step].assign(layer_sizes[li], kInfiniteWeight);
            for (int v = 0; v < layer_sizes[li]; ++v) {
                Weight bw = kInfiniteWeight;
                if (step == 1) {
                    bw = edge(lp, r, v);
                } else {
                    for (int u = 0; u < layer_sizes[lp]; ++u)
                        bw = std::min(bw, wadd(dist[step - 1][u], edge(lp, u, v)));
                }
                dist[step][v] = bw;
            }
        }
        const int last = (anchor + k - 1) % k;
        for (int v = 0; v < layer_sizes[last]; ++v) {
            const Weight total = wadd(dist[k - 1][v], edge(last, v, r));
            if (total < best_total) {
                best_total = total;
                // backtrack
                std::vector<int> pick(k, -1);
                pick[anchor] = r;
                int cur = k - 1, cv = v;
                pick[last] = cv;
                while (cur > 1) {
                    const int lp = (anchor + cur - 1) % k;
                    const int li = (anchor + cur) % k;
                    int chosen = -1;
                    for (int u = 0; u < layer_sizes[lp]; ++u)
                        if (wadd(dist[cur - 1][u], edge(lp, u, pick[li])) == dist[cur][pick[li]]) {
                            chosen = u;
                            break;
                        }
                    pick[lp] = chosen;
                    cur -= 1;
                }
                best_pick = std::move(pick);
            }
        }
    }
    return {best_total, best_pick};
}

std::vector<Weight> path_dp(const GtspInstance& inst, const std::vector<int>& seq) {
    const auto& first = inst.cluster(seq[0]);
    std::vector<Weight> dist(first.size() * first.size(), kInfiniteWeight);
    for (std::size_t u = 0; u < first.size(); ++u) dist[u * first.size() + u] = 0;
    std::size_t prev_size = first.size();
    std::vector<int> prev_vertices = first;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        const auto& layer = inst.cluster(seq[i]);
        std::vector<Weight> next(first.size() * layer.size(), kInfiniteWeight);
        for (std::size_t u = 0; u < first.size(); ++u)
            for (std::size_t v = 0; v < layer.size(); ++v) {
                Weight best = kInfiniteWeight;
                for (std::size_t t = 0; t < prev_size; ++t)
                    best = std::min(best, wadd(dist[u * prev_size + t],
                                               inst.weight(prev_vertices[t], layer[v])));
                next[u * layer.size() + v] = best;
            }
        dist = std::move(next);
        prev_size = layer.size();
        prev_vertices = layer;
    }
    return dist;
}

std::pair<Weight, std::vector<int>> window_selection_dp(const GtspInstance& inst, int a_vertex,
                                                        const std::vector<int>& clusters,
                                                        int b_vertex) {
    const int k = static_cast<int>(clusters.size());
    if (k == 0) return {inst.weight(a_vertex, b_vertex), {}};
    std::vector<std::vector<Weight>> dist(k);
    {
        const auto& L0 = inst.cluster(clusters[0]);
        dist[0].resize(L0.size());
        for (std::size_t v = 0; v < L0.size(); ++v) dist[0][v] = inst.weight(a_vertex, L0[v]);
    }
    for (int i = 1; i < k; ++i) {
        const auto& Lp = inst.cluster(clusters[i - 1]);
        const auto& Lc = inst.cluster(clusters[i]);
        dist[i].assign(Lc.size(), kInfiniteWeight);
        for (std::size_t v = 0; v < Lc.size(); ++v) {
            Weight best = kInfiniteWeight;
            for (std::size_t u = 0; u < Lp.size(); ++u)
                best = std::min(best, wadd(dist[i - 1][u], inst.weight(Lp[u], Lc[v])));
            dist[i][v] = best;
        }
    }
    const auto& Lk = inst.cluster(clusters[k - 1]);
    Weight best = kInfiniteWeight;
    int best_v = 0;
    for (std::size_t v = 0; v < Lk.size(); ++v) {
        const Weight w = wadd(dist[k - 1][v], inst.weight(Lk[v], b_vertex));
        if (w < best) {
            best = w;
            best_v = static_cast<int>(v);
        }
    }
    std::vector<int> picks(k);
    picks[k - 1] = Lk[best_v];
    int cv = best_v;
    for (int i = k - 1; i > 0; --i) {
        const auto& Lp = inst.cluster(clusters[i - 1]);
        const auto& Lc = inst.cluster(clusters[i]);
        for (std::size_t u = 0; u < Lp.size(); ++u)
            if (wadd(dist[i - 1][u], inst.weight(Lp[u], Lc[cv])) == dist[i][cv]) {
                picks[i - 1] = Lp[u];
                cv = static_cast<int>(u);
                break;
            }
    }
    return {best, picks};
}

}  // namespace detail

BoundResult shortest_path_lower_bound(const GtspInstance& inst, const Tour& t, int a, int b) {
    BoundResult res;
    const std::vector<int> order = tour_order(t, 0);
    std::vector<int> vertex_of = t.vertices;
    res.bound = detail::fragment_lower_bound(inst, order, vertex_of, a, b);
    const CoResult co = cluster_optimize_checked(inst, t);
    res.certified = co.feasible && co.weight == tour_weight(inst, t);
    return res;
}

BoundResult broken_cycle_lower_bound(const GtspInstance& inst, const Tour& t) {
    BoundResult res;
    const std::vector<int> order = tour_order(t, 0);
    const Weight wmax = inst.pair_max(order.back(), order.front());
    const Weight w = tour_weight(inst, t);
    if (is_forbidden(w) || is_forbidden(wmax))
        res.bound = detail::fragment_min_sum(inst, order, 0, static_cast<int>(order.size()) - 1);
    else
        res.bound = w - wmax;
    const CoResult co = cluster_optimize_checked(inst, t);
    res.certified = co.feasible && co.weight == w;
    return res;
}

}  // namespace combopt::gtsp
