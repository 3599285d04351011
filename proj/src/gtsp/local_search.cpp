#include "combopt/gtsp/local_search.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace combopt::gtsp {

namespace {

struct State {
    std::vector<int> order;  // position -> cluster
    std::vector<int> vert;   // cluster -> vertex
    Weight w = 0;
};

Weight order_weight(const GtspInstance& inst, const std::vector<int>& order,
                    const std::vector<int>& vert) {
    Weight total = 0;
    const int m = static_cast<int>(order.size());
    for (int p = 0; p < m; ++p)
        total = wadd(total, inst.weight(vert[order[p]], vert[order[(p + 1) % m]]));
    return total;
}

State make_state(const GtspInstance& inst, const Tour& t, int anchor = 0) {
    State s;
    s.order = tour_order(t, anchor);
    s.vert = t.vertices;
    s.w = order_weight(inst, s.order, s.vert);
    return s;
}

Tour state_tour(const State& s) { return tour_from_order(s.order, s.vert); }

void bump(SearchStats* s, long long SearchStats::*field) {
    if (s) ++(s->*field);
}

// Signed weight totals that survive forbidden edges: (forbidden count, finite sum).
struct Sat {
    long long inf = 0;
    Weight fin = 0;
    void add(Weight w) { is_forbidden(w) ? void(++inf) : void(fin += w); }
    void sub(Weight w) { is_forbidden(w) ? void(--inf) : void(fin -= w); }
    bool less_than(const Sat& o) const { return inf != o.inf ? inf < o.inf : fin < o.fin; }
};

Sat sat_of(Weight w) {
    Sat s;
    s.add(w);
    return s;
}

// Candidate order for Turn(order, x, y): reverse positions x+1..y.
std::vector<int> turned_order(const std::vector<int>& order, int x, int y) {
    std::vector<int> cand = order;
    std::reverse(cand.begin() + x + 1, cand.begin() + y + 1);
    return cand;
}

std::vector<int> inverted_order(const std::vector<int>& order) {
    std::vector<int> inv;
    inv.reserve(order.size());
    inv.push_back(order[0]);
    for (std::size_t i = order.size(); i-- > 1;) inv.push_back(order[i]);
    return inv;
}

// Evaluates a candidate cluster order under Local adaptation: re-optimizes the
// vertices of `affected` clusters, everything else fixed.
Weight local_eval(const GtspInstance& inst, const std::vector<int>& cand_order,
                  const std::vector<int>& vert, const std::vector<int>& affected,
                  std::vector<int>& out_vert) {
    out_vert = vert;
    std::vector<char> mask(inst.m(), 0);
    for (int c : affected) mask[c] = 1;
    return reoptimize_clusters(inst, cand_order, out_vert, mask);
}

// ---------------------------------------------------------------------------
// 2-opt
// ---------------------------------------------------------------------------

// Descent over the symmetric Basic enumeration with changed-edge flags, for
// Basic/BasicCO/Local/LocalCO.  Finishes with a flag-free verification pass.
void two_opt_symmetric_descent(const GtspInstance& inst, State& s, Adaptation adapt,
                               const SearchOptions& opts) {
    const int m = inst.m();
    std::vector<char> flag(m, 1);

    std::vector<std::vector<int>> near;  // sorted cluster lists, advanced variant
    if (opts.advanced_neighbor_lists) {
        near.resize(inst.n());
        for (int v = 0; v < inst.n(); ++v) {
            auto& lst = near[v];
            for (int c = 0; c < m; ++c)
                if (c != inst.cluster_of(v)) lst.push_back(c);
            std::sort(lst.begin(), lst.end(), [&](int a, int b) {
                const Weight wa = inst.vert_min_out(v, a);
                const Weight wb = inst.vert_min_out(v, b);
                return wa != wb ? wa < wb : a < b;
            });
        }
    }

    auto try_move = [&](int x, int y) -> bool {
        bump(opts.stats, &SearchStats::candidates);
        const int A = s.order[x], B = s.order[x + 1];
        const int C = s.order[y], D = s.order[(y + 1) % m];
        if (adapt == Adaptation::Basic || adapt == Adaptation::BasicCO) {
            const Weight delta = inst.weight(s.vert[A], s.vert[C]) +
                                 inst.weight(s.vert[B], s.vert[D]) -
                                 inst.weight(s.vert[A], s.vert[B]) -
                                 inst.weight(s.vert[C], s.vert[D]);
            if (delta >= 0) return false;
            s.order = turned_order(s.order, x, y);
            s.w += delta;
            if (adapt == Adaptation::BasicCO) {
                s.w = co_order(inst, s.order, s.vert);
                std::fill(flag.begin(), flag.end(), 1);
            }
        } else {  // Local / LocalCO
            std::vector<int> cand = turned_order(s.order, x, y);
            std::vector<int> new_vert;
            const Weight cw = local_eval(inst, cand, s.vert, {A, B, C, D}, new_vert);
            if (cw >= s.w) return false;
            s.order = std::move(cand);
            s.vert = std::move(new_vert);
            s.w = cw;
            if (adapt == Adaptation::LocalCO) s.w = co_order(inst, s.order, s.vert);
            std::fill(flag.begin(), flag.end(), 1);
        }
        for (int p = x; p <= y; ++p) flag[s.order[p]] = 1;
        bump(opts.stats, &SearchStats::moves);
        return true;
    };

    while (true) {
        bool sweep_improved = true;
        while (sweep_improved) {
            sweep_improved = false;
            for (int x = 0; x + 2 <= m - 1; ++x) {
                const int y_hi = (x == 0) ? m - 2 : m - 1;
                if (opts.advanced_neighbor_lists &&
                    (adapt == Adaptation::Basic || adapt == Adaptation::BasicCO)) {
                    std::vector<int> pos_of(m);
                    for (int p = 0; p < m; ++p) pos_of[s.order[p]] = p;
                    const Weight cutoff =
                        inst.weight(s.vert[s.order[x]], s.vert[s.order[x + 1]]);
                    bool applied = false;
                    for (int side = 0; side < 2 && !applied; ++side) {
                        const int from = s.vert[s.order[x + side]];
                        for (int c : near[from]) {
                            if (inst.vert_min_out(from, c) >= cutoff) break;
                            int p = pos_of[c];
                            if (side == 1) p = (p - 1 + m) % m;  // c plays T_{y+1}
                            if (p < x + 2 || p > y_hi) continue;
                            if (try_move(x, p)) {
                                applied = true;
                                break;
                            }
                        }
                    }
                    if (applied) sweep_improved = true;
                    continue;
                }
                bool x_improved = false;
                for (int y = x + 2; y <= y_hi; ++y) {
                    if (!flag[s.order[x]] && !flag[s.order[y]]) continue;
                    if (try_move(x, y)) {
                        sweep_improved = true;
                        x_improved = true;
                        y = x + 1;  // restart the inner loop from scratch
                    }
                }
                if (!x_improved) flag[s.order[x]] = 0;
            }
        }
        // Flag-free verification; loop back if a move was missed.
        bool missed = false;
        for (int x = 0; x + 2 <= m - 1 && !missed; ++x) {
            const int y_hi = (x == 0) ? m - 2 : m - 1;
            for (int y = x + 2; y <= y_hi && !missed; ++y) missed = try_move(x, y);
        }
        if (!missed) return;
        std::fill(flag.begin(), flag.end(), 1);
    }
}

// One first-improvement step on the asymmetric enumeration over orientation
// `ord` (taken by value).  Candidates are compared against s.w; on success the
// state is replaced by the candidate (in the candidate's orientation).
bool two_opt_directed_pass(const GtspInstance& inst, State& s, std::vector<int> ord,
                           Adaptation adapt, const SearchOptions& opts) {
    const int m = inst.m();
    const std::vector<int> vert = s.vert;
    Sat base;
    for (int p = 0; p < m; ++p)
        base.add(inst.weight(vert[ord[p]], vert[ord[(p + 1) % m]]));
    const Sat cur = sat_of(s.w);

    for (int x = 0; x + 2 <= m - 1; ++x) {
        Sat delta_rev;  // w(fragment forward) - w(fragment backward)
        const int y_hi = (x == 0) ? m - 2 : m - 1;
        for (int y = x + 2; y <= y_hi; ++y) {
            bump(opts.stats, &SearchStats::candidates);
            const int vy = vert[ord[y]], vy_1 = vert[ord[y - 1]];
            delta_rev.add(inst.weight(vy_1, vy));
            delta_rev.sub(inst.weight(vy, vy_1));
            if (adapt == Adaptation::Basic || adapt == Adaptation::BasicCO) {
                Sat cand = base;
                cand.sub(inst.weight(vert[ord[x]], vert[ord[x + 1]]));
                cand.sub(inst.weight(vy, vert[ord[(y + 1) % m]]));
                cand.add(inst.weight(vert[ord[x]], vy));
                cand.add(inst.weight(vert[ord[x + 1]], vert[ord[(y + 1) % m]]));
                cand.inf -= delta_rev.inf;
                cand.fin -= delta_rev.fin;
                if (!cand.less_than(cur)) continue;
                State next;
                next.order = turned_order(ord, x, y);
                next.vert = vert;
                next.w = order_weight(inst, next.order, next.vert);
                if (adapt == Adaptation::BasicCO) next.w = co_order(inst, next.order, next.vert);
                s = std::move(next);
                bump(opts.stats, &SearchStats::moves);
                return true;
            }
            // Local / LocalCO
            std::vector<int> cand = turned_order(ord, x, y);
            std::vector<int> new_vert;
            const int A = ord[x], B = ord[x + 1], C = ord[y], D = ord[(y + 1) % m];
            const Weight cw = local_eval(inst, cand, vert, {A, B, C, D}, new_vert);
            if (cw >= s.w) continue;
            State next;
            next.order = std::move(cand);
            next.vert = std::move(new_vert);
            next.w = cw;
            if (adapt == Adaptation::LocalCO) next.w = co_order(inst, next.order, next.vert);
            s = std::move(next);
            bump(opts.stats, &SearchStats::moves);
            return true;
        }
    }
    return false;
}

// Efficient Global 2-opt: incremental path tables, a supporting cluster at the
// smallest-cluster anchor and Theorem-based candidate pruning.
Tour two_opt_global(const GtspInstance& inst, const Tour& t, const SearchOptions& opts) {
    const int m = inst.m();
    CoResult co = cluster_optimize_checked(inst, t);
    State s;
    const Tour& start = co.feasible ? co.tour : t;
    s.order = tour_order(start, inst.smallest_cluster());
    s.vert = start.vertices;
    s.w = co.feasible ? co.weight : tour_weight(inst, t);
    const bool asym = !inst.symmetric() || inst.has_sentinels();

    auto size_of = [&](int c) { return static_cast<std::size_t>(inst.cluster_size(c)); };
    auto wmatrix = [&](int C, int D) {
        const auto& cs = inst.cluster(C);
        const auto& ds = inst.cluster(D);
        std::vector<Weight> e(cs.size() * ds.size());
        for (std::size_t u = 0; u < cs.size(); ++u)
            for (std::size_t v = 0; v < ds.size(); ++v)
                e[u * ds.size() + v] = inst.weight(cs[u], ds[v]);
        return e;
    };
    // result[u][k] = min_v w(C_u -> D_v) + tail[v][k]
    auto prepend = [&](int C, int D, const std::vector<Weight>& tail, std::size_t cols) {
        const auto& cs = inst.cluster(C);
        const auto& ds = inst.cluster(D);
        std::vector<Weight> out(cs.size() * cols, kInfiniteWeight);
        for (std::size_t u = 0; u < cs.size(); ++u)
            for (std::size_t k = 0; k < cols; ++k) {
                Weight best = kInfiniteWeight;
                for (std::size_t v = 0; v < ds.size(); ++v)
                    best = std::min(best, wadd(inst.weight(cs[u], ds[v]), tail[v * cols + k]));
                out[u * cols + k] = best;
            }
        return out;
    };

    bool restart = true;
    while (restart) {
        restart = false;
        const int passes = asym ? 2 : 1;
        for (int pass = 0; pass < passes && !restart; ++pass) {
            const std::vector<int> ord = pass == 0 ? s.order : inverted_order(s.order);
            const std::size_t g0 = size_of(ord[0]);
            // Theorem bounds hold against the certified forward orientation.
            const bool theorem_ok = pass == 0 && !inst.has_sentinels();

            for (int x = 0; x + 2 <= m - 1 && !restart; ++x) {
                const int y_hi = (x == 0) ? m - 2 : m - 1;
                std::vector<Weight> fwdB;  // ord[0] -> ord[x] over positions 0..x
                if (x > 0) {
                    fwdB = wmatrix(ord[x - 1], ord[x]);
                    for (int p = x - 2; p >= 0; --p)
                        fwdB = prepend(ord[p], ord[p + 1], fwdB, size_of(ord[x]));
                }
                // fwdA[y]: ord[y+1] -> ord[0] over positions y+1..m-1, 0
                std::vector<std::vector<Weight>> fwdA(m);
                if (x + 2 <= m - 2) {
                    fwdA[m - 2] = wmatrix(ord[m - 1], ord[0]);
                    for (int y = m - 3; y >= x + 2; --y)
                        fwdA[y] = prepend(ord[y + 1], ord[y + 2], fwdA[y + 1], g0);
                }

                std::vector<Weight> back;  // ord[y] -> ord[x+1], reversed fragment
                for (int y = x + 2; y <= y_hi && !restart; ++y) {
                    if (y == x + 2)
                        back = wmatrix(ord[y], ord[x + 1]);
                    else
                        back = prepend(ord[y], ord[y - 1], back, size_of(ord[x + 1]));
                    bump(opts.stats, &SearchStats::candidates);

                    const int X = ord[x], B = ord[x + 1], C = ord[y], D = ord[(y + 1) % m];
                    if (opts.use_lower_bounds) {
                        Weight lb = wadd(inst.pair_min(X, C), inst.pair_min(B, D));
                        if (theorem_ok && inst.symmetric()) {
                            lb = wadd(lb,
                                      detail::fragment_lower_bound(inst, ord, s.vert, x + 1, y));
                        } else {
                            Weight rev = 0;
                            for (int p = y; p > x + 1; --p)
                                rev = wadd(rev, inst.pair_min(ord[p], ord[p - 1]));
                            lb = wadd(lb, rev);
                        }
                        if (theorem_ok)
                            lb = wadd(lb, detail::fragment_lower_bound(inst, ord, s.vert,
                                                                       (y + 1) % m, x));
                        else
                            lb = wadd(lb, detail::fragment_min_sum(inst, ord, (y + 1) % m, x));
                        if (lb >= s.w) {
                            bump(opts.stats, &SearchStats::bound_prunes);
                            continue;
                        }
                    }

                    detail::LayeredCycle net;
                    const int sx = static_cast<int>(size_of(X)), sb = static_cast<int>(size_of(B));
                    const int sc = static_cast<int>(size_of(C)), sd = static_cast<int>(size_of(D));
                    if (x == 0) {
                        net.layer_sizes = {sx, sc, sb, sd};
                        net.edges = {wmatrix(X, C), back, wmatrix(B, D), fwdA[y]};
                    } else if (y == m - 1) {
                        net.layer_sizes = {sx, sc, sb, sd};
                        net.edges = {wmatrix(X, C), back, wmatrix(B, D), fwdB};
                    } else {
                        net.layer_sizes = {sx, sc, sb, sd, static_cast<int>(g0)};
                        net.edges = {wmatrix(X, C), back, wmatrix(B, D), fwdA[y], fwdB};
                    }
                    const Weight cand = net.shortest_cycle().first;
                    if (cand < s.w) {
                        std::vector<int> cand_order = turned_order(ord, x, y);
                        std::vector<int> vert = s.vert;
                        const Weight cw = co_order(inst, cand_order, vert);
                        assert(cw == cand);
                        s.order =
                            tour_order(tour_from_order(cand_order, vert), inst.smallest_cluster());
                        s.vert = std::move(vert);
                        s.w = cw;
                        bump(opts.stats, &SearchStats::moves);
                        restart = true;
                    }
                }
            }
        }
    }
    return state_tour(s);
}

}  // namespace

Tour two_opt(const GtspInstance& inst, const Tour& t, Adaptation adapt,
             const SearchOptions& opts) {
    if (inst.m() < 4) return t;  // no non-degenerate 2-opt move exists
    if (adapt == Adaptation::Global) return two_opt_global(inst, t, opts);

    State s = make_state(inst, t);
    if (inst.symmetric() && !inst.has_sentinels()) {
        two_opt_symmetric_descent(inst, s, adapt, opts);
    } else {
        bool moved = true;
        while (moved) {
            moved = two_opt_directed_pass(inst, s, s.order, adapt, opts);
            if (!moved) moved = two_opt_directed_pass(inst, s, inverted_order(s.order), adapt, opts);
        }
    }
    return state_tour(s);
}

Tour three_opt(const GtspInstance& inst, const Tour& t, Adaptation adapt,
               const SearchOptions& opts) {
    const int m = inst.m();
    if (m < 6) return t;  // pairwise non-adjacent cuts need m >= 6
    State s = make_state(inst, t);

    bool restart = true;
    while (restart) {
        restart = false;
        for (int x = 0; x < m && !restart; ++x)
            for (int y = x + 2; y < m && !restart; ++y)
                for (int z = y + 2; z < m && !restart; ++z) {
                    if ((x + m - z) % m < 2) continue;  // z and x cuts adjacent
                    bump(opts.stats, &SearchStats::candidates);
                    // exchange segments S1 = x+1..y and S2 = y+1..z
                    std::vector<int> cand;
                    cand.reserve(m);
                    for (int p = 0; p <= x; ++p) cand.push_back(s.order[p]);
                    for (int p = y + 1; p <= z; ++p) cand.push_back(s.order[p]);
                    for (int p = x + 1; p <= y; ++p) cand.push_back(s.order[p]);
                    for (int p = z + 1; p < m; ++p) cand.push_back(s.order[p]);

                    if (adapt == Adaptation::Basic || adapt == Adaptation::BasicCO) {
                        const Weight cw = order_weight(inst, cand, s.vert);
                        if (cw >= s.w) continue;
                        s.order = std::move(cand);
                        s.w = cw;
                        if (adapt == Adaptation::BasicCO) s.w = co_order(inst, s.order, s.vert);
                    } else if (adapt == Adaptation::Local || adapt == Adaptation::LocalCO) {
                        std::vector<int> new_vert;
                        const Weight cw =
                            local_eval(inst, cand, s.vert,
                                       {s.order[x], s.order[x + 1], s.order[y], s.order[y + 1],
                                        s.order[z], s.order[(z + 1) % m]},
                                       new_vert);
                        if (cw >= s.w) continue;
                        s.order = std::move(cand);
                        s.vert = std::move(new_vert);
                        s.w = cw;
                        if (adapt == Adaptation::LocalCO) s.w = co_order(inst, s.order, s.vert);
                    } else {  // Global
                        if (opts.use_lower_bounds && !inst.has_sentinels()) {
                            Weight lb =
                                wadd(wadd(inst.pair_min(s.order[x], s.order[y + 1]),
                                          inst.pair_min(s.order[z], s.order[x + 1])),
                                     inst.pair_min(s.order[y], s.order[(z + 1) % m]));
                            lb = wadd(lb,
                                      detail::fragment_lower_bound(inst, s.order, s.vert, x + 1, y));
                            lb = wadd(lb,
                                      detail::fragment_lower_bound(inst, s.order, s.vert, y + 1, z));
                            lb = wadd(lb, detail::fragment_lower_bound(inst, s.order, s.vert,
                                                                       (z + 1) % m, x));
                            if (lb >= s.w) {
                                bump(opts.stats, &SearchStats::bound_prunes);
                                continue;
                            }
                        }
                        std::vector<int> vert = s.vert;
                        const Weight cw = co_order(inst, cand, vert);
                        if (cw >= s.w) continue;
                        s.order = std::move(cand);
                        s.vert = std::move(vert);
                        s.w = cw;
                    }
                    bump(opts.stats, &SearchStats::moves);
                    restart = true;
                }
    }
    return state_tour(s);
}

Tour insertion(const GtspInstance& inst, const Tour& t, Adaptation adapt,
               const SearchOptions& opts) {
    const int m = inst.m();
    if (m < 4) return t;  // every m = 3 insertion merely reverses the cycle
    State s = make_state(inst, t);

    if (adapt == Adaptation::Global) {
        // Keep the tour a CO fixed point so the Theorem bounds stay valid.
        std::vector<int> vert = s.vert;
        const Weight cw = co_order(inst, s.order, vert);
        if (!is_forbidden(cw)) {
            s.vert = std::move(vert);
            s.w = cw;
        }
    }

    bool restart = true;
    while (restart) {
        restart = false;
        for (int x = 0; x < m && !restart; ++x) {
            for (int off = 1; off <= m - 2 && !restart; ++off) {
                const int j = (x + off) % m;  // insert X between positions j, j+1
                bump(opts.stats, &SearchStats::candidates);
                const int X = s.order[x];
                const int before = s.order[(x - 1 + m) % m], after = s.order[(x + 1) % m];
                const int J = s.order[j], J1 = s.order[(j + 1) % m];

                std::vector<int> cand;
                cand.reserve(m);
                for (int p = (x + 1) % m; p != x; p = (p + 1) % m) {
                    cand.push_back(s.order[p]);
                    if (s.order[p] == J) cand.push_back(X);
                }

                if (adapt != Adaptation::Global) {
                    int new_vertex = s.vert[X];
                    if (adapt == Adaptation::Local || adapt == Adaptation::LocalCO) {
                        Weight best = kInfiniteWeight;
                        for (int v : inst.cluster(X)) {
                            const Weight c =
                                wadd(inst.weight(s.vert[J], v), inst.weight(v, s.vert[J1]));
                            if (c < best) {
                                best = c;
                                new_vertex = v;
                            }
                        }
                    }
                    const int saved = s.vert[X];
                    s.vert[X] = new_vertex;
                    const Weight cw = order_weight(inst, cand, s.vert);
                    if (cw >= s.w) {
                        s.vert[X] = saved;
                        continue;
                    }
                    s.order = std::move(cand);
                    s.w = cw;
                    if (adapt == Adaptation::BasicCO || adapt == Adaptation::LocalCO)
                        s.w = co_order(inst, s.order, s.vert);
                } else {
                    if (opts.use_lower_bounds && !inst.has_sentinels()) {
                        Weight lb = wadd(wadd(inst.pair_min(before, after), inst.pair_min(J, X)),
                                         inst.pair_min(X, J1));
                        lb = wadd(lb, detail::fragment_lower_bound(inst, s.order, s.vert,
                                                                   (x + 1) % m, j));
                        lb = wadd(lb, detail::fragment_lower_bound(inst, s.order, s.vert,
                                                                   (j + 1) % m, (x - 1 + m) % m));
                        if (lb >= s.w) {
                            bump(opts.stats, &SearchStats::bound_prunes);
                            continue;
                        }
                    }
                    std::vector<int> vert = s.vert;
                    const Weight cw = co_order(inst, cand, vert);
                    if (cw >= s.w) continue;
                    s.order = std::move(cand);
                    s.vert = std::move(vert);
                    s.w = cw;
                }
                bump(opts.stats, &SearchStats::moves);
                restart = true;
            }
        }
    }
    return state_tour(s);
}

Tour swap_opt(const GtspInstance& inst, const Tour& t, Adaptation adapt,
              const SearchOptions& opts) {
    const int m = inst.m();
    if (m < 4) return t;  // only cyclic-equivalent swaps exist
    State s = make_state(inst, t);

    bool restart = true;
    while (restart) {
        restart = false;
        for (int x = 0; x < m && !restart; ++x)
            for (int y = x + 2; y < m && !restart; ++y) {
                if (x == 0 && y == m - 1) continue;  // neighbors across the wrap
                bump(opts.stats, &SearchStats::candidates);
                const int X = s.order[x], Y = s.order[y];
                std::vector<int> cand = s.order;
                std::swap(cand[x], cand[y]);

                if (adapt == Adaptation::Basic || adapt == Adaptation::BasicCO) {
                    const Weight cw = order_weight(inst, cand, s.vert);
                    if (cw >= s.w) continue;
                    s.order = std::move(cand);
                    s.w = cw;
                    if (adapt == Adaptation::BasicCO) s.w = co_order(inst, s.order, s.vert);
                } else if (adapt == Adaptation::Local || adapt == Adaptation::LocalCO) {
                    std::vector<int> new_vert;
                    const Weight cw =
                        local_eval(inst, cand, s.vert,
                                   {s.order[(x - 1 + m) % m], X, s.order[x + 1],
                                    s.order[y - 1], Y, s.order[(y + 1) % m]},
                                   new_vert);
                    if (cw >= s.w) continue;
                    s.order = std::move(cand);
                    s.vert = std::move(new_vert);
                    s.w = cw;
                    if (adapt == Adaptation::LocalCO) s.w = co_order(inst, s.order, s.vert);
                } else {  // Global
                    std::vector<int> vert = s.vert;
                    const Weight cw = co_order(inst, cand, vert);
                    if (cw >= s.w) continue;
                    s.order = std::move(cand);
                    s.vert = std::move(vert);
                    s.w = cw;
                }
                bump(opts.stats, &SearchStats::moves);
                restart = true;
            }
    }
    return state_tour(s);
}

namespace detail {

namespace {

// Shared tail of F1/F2: exact vertex selection for the winning permutation.
WindowResult finish_window(const GtspInstance& inst, int a_vertex, const std::vector<int>& perm,
                           int b_vertex, Weight weight) {
    WindowResult res;
    res.weight = weight;
    res.cluster_order = perm;
    res.vertices = window_selection_dp(inst, a_vertex, perm, b_vertex).second;
    return res;
}

void f1_recurse(const GtspInstance& inst, int b_vertex, const std::vector<int>& clusters,
                std::vector<char>& used, std::vector<int>& perm, const std::vector<Weight>& lvals,
                const std::vector<int>& lverts, Weight& best, std::vector<int>& best_perm) {
    const int k = static_cast<int>(clusters.size());
    if (static_cast<int>(perm.size()) == k) {
        Weight total = kInfiniteWeight;
        for (std::size_t j = 0; j < lvals.size(); ++j)
            total = std::min(total, wadd(lvals[j], inst.weight(lverts[j], b_vertex)));
        if (total < best) {
            best = total;
            best_perm = perm;
        }
        return;
    }
    for (int c = 0; c < k; ++c) {
        if (used[c]) continue;
        const auto& layer = inst.cluster(clusters[c]);
        std::vector<Weight> next(layer.size(), kInfiniteWeight);
        for (std::size_t v = 0; v < layer.size(); ++v) {
            Weight bw = kInfiniteWeight;
            for (std::size_t j = 0; j < lvals.size(); ++j)
                bw = std::min(bw, wadd(lvals[j], inst.weight(lverts[j], layer[v])));
            next[v] = bw;
        }
        used[c] = 1;
        perm.push_back(clusters[c]);
        f1_recurse(inst, b_vertex, clusters, used, perm, next, layer, best, best_perm);
        perm.pop_back();
        used[c] = 0;
    }
}

}  // namespace

WindowResult fo_window_f1(const GtspInstance& inst, int a_vertex,
                          const std::vector<int>& clusters, int b_vertex) {
    Weight best = kInfiniteWeight;
    std::vector<int> best_perm;
    std::vector<char> used(clusters.size(), 0);
    std::vector<int> perm;
    f1_recurse(inst, b_vertex, clusters, used, perm, {0}, {a_vertex}, best, best_perm);
    if (best_perm.empty()) return {};
    return finish_window(inst, a_vertex, best_perm, b_vertex, best);
}

WindowResult fo_window_f2(const GtspInstance& inst, int a_vertex,
                          const std::vector<int>& clusters, int b_vertex) {
    const int k = static_cast<int>(clusters.size());
    const std::size_t full = (std::size_t{1} << k);
    // suffix[mask][slot][v]: best from vertex v of window slot (not in mask)
    // through exactly the clusters of mask, ending at b.
    std::vector<std::vector<std::vector<Weight>>> suffix(full,
                                                         std::vector<std::vector<Weight>>(k));
    for (std::size_t mask = 0; mask < full; ++mask)
        for (int c = 0; c < k; ++c) {
            if (mask & (std::size_t{1} << c)) continue;
            const auto& layer = inst.cluster(clusters[c]);
            auto& row = suffix[mask][c];
            row.assign(layer.size(), kInfiniteWeight);
            if (mask == 0) {
                for (std::size_t v = 0; v < layer.size(); ++v)
                    row[v] = inst.weight(layer[v], b_vertex);
                continue;
            }
            for (std::size_t v = 0; v < layer.size(); ++v) {
                Weight bw = kInfiniteWeight;
                for (int d = 0; d < k; ++d) {
                    if (!(mask & (std::size_t{1} << d))) continue;
                    const auto& nxt = inst.cluster(clusters[d]);
                    const auto& tail = suffix[mask ^ (std::size_t{1} << d)][d];
                    for (std::size_t u = 0; u < nxt.size(); ++u)
                        bw = std::min(bw, wadd(inst.weight(layer[v], nxt[u]), tail[u]));
                }
                row[v] = bw;
            }
        }

    Weight best = kInfiniteWeight;
    for (int d = 0; d < k; ++d) {
        const auto& nxt = inst.cluster(clusters[d]);
        const auto& tail = suffix[(full - 1) ^ (std::size_t{1} << d)][d];
        for (std::size_t u = 0; u < nxt.size(); ++u)
            best = std::min(best, wadd(inst.weight(a_vertex, nxt[u]), tail[u]));
    }
    if (is_forbidden(best)) return {};

    // Forward reconstruction of the lexicographically first optimal
    // permutation, matching F1's enumeration order.
    std::vector<int> perm;
    std::vector<Weight> lvals = {0};
    std::vector<int> lverts = {a_vertex};
    std::size_t remaining = full - 1;
    while (remaining) {
        int chosen = -1;
        std::vector<Weight> chosen_l;
        for (int c = 0; c < k && chosen < 0; ++c) {
            if (!(remaining & (std::size_t{1} << c))) continue;
            const auto& layer = inst.cluster(clusters[c]);
            std::vector<Weight> next(layer.size(), kInfiniteWeight);
            Weight reach = kInfiniteWeight;
            const auto& tail = suffix[remaining ^ (std::size_t{1} << c)][c];
            for (std::size_t v = 0; v < layer.size(); ++v) {
                Weight bw = kInfiniteWeight;
                for (std::size_t j = 0; j < lvals.size(); ++j)
                    bw = std::min(bw, wadd(lvals[j], inst.weight(lverts[j], layer[v])));
                next[v] = bw;
                reach = std::min(reach, wadd(bw, tail[v]));
            }
            if (reach == best) {
                chosen = c;
                chosen_l = std::move(next);
            }
        }
        assert(chosen >= 0);
        perm.push_back(clusters[chosen]);
        lvals = std::move(chosen_l);
        lverts = inst.cluster(clusters[chosen]);
        remaining ^= (std::size_t{1} << chosen);
    }
    return finish_window(inst, a_vertex, perm, b_vertex, best);
}

}  // namespace detail

Tour fragment_opt(const GtspInstance& inst, const Tour& t, int k, FoAlgorithm algo,
                  SearchStats* stats) {
    const int m = inst.m();
    if (k < 2 || k > m - 2) throw std::invalid_argument("fragment size out of range");
    const bool use_f1 = algo == FoAlgorithm::F1 || (algo == FoAlgorithm::Auto && k <= 4);

    State s = make_state(inst, t);
    int idle = 0;
    int anchor = 0;
    while (idle < m) {
        const int a_pos = anchor;
        const int b_pos = (anchor + k + 1) % m;
        const int a_vertex = s.vert[s.order[a_pos]];
        const int b_vertex = s.vert[s.order[b_pos]];
        std::vector<int> window(k);
        for (int i = 0; i < k; ++i) window[i] = s.order[(a_pos + 1 + i) % m];

        Weight current = 0;
        for (int i = 0; i <= k; ++i) {
            const int p = (a_pos + i) % m;
            current = wadd(current, inst.weight(s.vert[s.order[p]], s.vert[s.order[(p + 1) % m]]));
        }
        if (stats) ++stats->candidates;
        const detail::WindowResult res = use_f1
                                             ? detail::fo_window_f1(inst, a_vertex, window, b_vertex)
                                             : detail::fo_window_f2(inst, a_vertex, window, b_vertex);
        if (res.weight < current) {
            for (int i = 0; i < k; ++i) {
                const int p = (a_pos + 1 + i) % m;
                s.order[p] = res.cluster_order[i];
                s.vert[res.cluster_order[i]] = res.vertices[i];
            }
            s.w = s.w - current + res.weight;
            if (stats) ++stats->moves;
            idle = 0;
        } else {
            ++idle;
        }
        anchor = (anchor + 1) % m;
    }
    return state_tour(s);
}

}  // namespace combopt::gtsp
