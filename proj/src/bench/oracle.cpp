#include "combopt/bench/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "combopt/gtsp/cluster_opt.hpp"
#include "combopt/map/ap.hpp"

namespace combopt::bench {

gtsp::GtspInstance random_gtsp_instance(std::uint64_t seed, int m, int max_cluster_size,
                                        bool symmetric) {
    Rng rng(seed);
    std::vector<std::vector<int>> clusters(m);
    int n = 0;
    for (int c = 0; c < m; ++c) {
        const int size = rand_int(rng, 1, max_cluster_size);
        for (int k = 0; k < size; ++k) clusters[c].push_back(n++);
    }
    std::vector<Weight> w(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = symmetric ? i + 1 : 0; j < n; ++j) {
            if (i == j) continue;
            const Weight x = rand_int(rng, 1, 100);
            w[static_cast<std::size_t>(i) * n + j] = x;
            if (symmetric) w[static_cast<std::size_t>(j) * n + i] = x;
        }
    return gtsp::GtspInstance(std::move(w), std::move(clusters));
}

gtsp::Tour random_tour(const gtsp::GtspInstance& inst, Rng& rng) {
    std::vector<int> order(inst.m());
    std::iota(order.begin(), order.end(), 0);
    for (int i = inst.m() - 1; i > 0; --i)
        std::swap(order[i], order[rand_int(rng, 0, i)]);
    std::vector<int> vertex_of(inst.m());
    for (int c = 0; c < inst.m(); ++c) {
        const auto& cl = inst.cluster(c);
        vertex_of[c] = cl[rand_index(rng, cl.size())];
    }
    return gtsp::tour_from_order(order, vertex_of);
}

Weight gtsp_brute_force(const gtsp::GtspInstance& inst, long long max_orders) {
    const int m = inst.m();
    long long orders = 1;
    for (int i = 2; i < m; ++i) {
        orders *= i;
        if (orders > max_orders) throw std::invalid_argument("instance beyond oracle work budget");
    }
    std::vector<int> rest(m - 1);
    std::iota(rest.begin(), rest.end(), 1);
    Weight best = kInfiniteWeight;
    std::vector<int> order(m);
    order[0] = 0;
    const bool halve = inst.symmetric() && !inst.has_sentinels() && m >= 3;
    do {
        if (halve && rest.front() > rest.back()) continue;  // reversal duplicate
        std::copy(rest.begin(), rest.end(), order.begin() + 1);
        std::vector<int> vertex_of(m);
        best = std::min(best, gtsp::co_order(inst, order, vertex_of));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

Weight gtsp_optimum_dp(const gtsp::GtspInstance& inst) {
    const int m = inst.m();
    const int n = inst.n();
    // dp[mask][v]: best path visiting the clusters of mask, ending at vertex v,
    // having started at some vertex of cluster 0 (tracked per start vertex).
    Weight best_total = kInfiniteWeight;
    for (int start : inst.cluster(0)) {
        std::vector<std::vector<Weight>> dp(std::size_t{1} << m,
                                            std::vector<Weight>(n, kInfiniteWeight));
        dp[1][start] = 0;
        for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
            if (!(mask & 1)) continue;
            for (int v = 0; v < n; ++v) {
                const Weight cur = dp[mask][v];
                if (is_forbidden(cur)) continue;
                if (!(mask & (std::size_t{1} << inst.cluster_of(v)))) continue;
                for (int u = 0; u < n; ++u) {
                    const int cu = inst.cluster_of(u);
                    if (mask & (std::size_t{1} << cu)) continue;
                    auto& slot = dp[mask | (std::size_t{1} << cu)][u];
                    slot = std::min(slot, wadd(cur, inst.weight(v, u)));
                }
            }
        }
        const std::size_t full = (std::size_t{1} << m) - 1;
        for (int v = 0; v < n; ++v)
            if (inst.cluster_of(v) != 0)
                best_total = std::min(best_total, wadd(dp[full][v], inst.weight(v, start)));
    }
    return best_total;
}

Weight co_exhaustive(const gtsp::GtspInstance& inst, const gtsp::Tour& t) {
    const std::vector<int> order = gtsp::tour_order(t, 0);
    const int m = inst.m();
    std::vector<int> pick(m, 0);
    Weight best = kInfiniteWeight;
    while (true) {
        Weight total = 0;
        for (int p = 0; p < m; ++p) {
            const int v = inst.cluster(order[p])[pick[p]];
            const int u = inst.cluster(order[(p + 1) % m])[pick[(p + 1) % m]];
            total = wadd(total, inst.weight(v, u));
        }
        best = std::min(best, total);
        int j = m - 1;
        while (j >= 0 && pick[j] + 1 >= inst.cluster_size(order[j])) pick[j--] = 0;
        if (j < 0) break;
        ++pick[j];
    }
    return best;
}

gtsp::Tour naive_two_opt_global(const gtsp::GtspInstance& inst, const gtsp::Tour& t) {
    using namespace gtsp;
    const int m = inst.m();
    if (m < 4) return t;
    CoResult co = cluster_optimize_checked(inst, t);
    std::vector<int> order = tour_order(co.feasible ? co.tour : t, inst.smallest_cluster());
    std::vector<int> vert = (co.feasible ? co.tour : t).vertices;
    Weight w = co.feasible ? co.weight : tour_weight(inst, t);
    const bool asym = !inst.symmetric() || inst.has_sentinels();

    bool restart = true;
    while (restart) {
        restart = false;
        const int passes = asym ? 2 : 1;
        for (int pass = 0; pass < passes && !restart; ++pass) {
            std::vector<int> ord;
            if (pass == 0) {
                ord = order;
            } else {
                ord.push_back(order[0]);
                for (std::size_t i = order.size(); i-- > 1;) ord.push_back(order[i]);
            }
            for (int x = 0; x + 2 <= m - 1 && !restart; ++x) {
                const int y_hi = (x == 0) ? m - 2 : m - 1;
                for (int y = x + 2; y <= y_hi && !restart; ++y) {
                    std::vector<int> cand = ord;
                    std::reverse(cand.begin() + x + 1, cand.begin() + y + 1);
                    std::vector<int> cvert = vert;
                    const Weight cw = co_order(inst, cand, cvert);
                    if (cw < w) {
                        order = tour_order(tour_from_order(cand, cvert), inst.smallest_cluster());
                        vert = std::move(cvert);
                        w = cw;
                        restart = true;
                    }
                }
            }
        }
    }
    return tour_from_order(order, vert);
}

namespace {

long long factorial(int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

Weight map_brute_force(const map::MapInstance& inst, long long max_work) {
    const int s = inst.s();
    const int n = inst.n();
    long long work = 1;
    for (int j = 2; j < s; ++j) {
        work *= factorial(n);
        if (work > max_work) throw std::invalid_argument("instance beyond oracle work budget");
    }

    // Enumerate pi_2..pi_{s-1}; solve the AP over the last dimension.
    std::vector<std::vector<int>> mid(s - 2, std::vector<int>(n));
    for (auto& p : mid) std::iota(p.begin(), p.end(), 0);

    Weight best = kInfiniteWeight;
    std::vector<Weight> cost(static_cast<std::size_t>(n) * n);
    std::vector<int> e(s);
    while (true) {
        for (int i = 0; i < n; ++i) {
            e[0] = i;
            for (int j = 0; j < s - 2; ++j) e[j + 1] = mid[j][i];
            for (int last = 0; last < n; ++last) {
                e[s - 1] = last;
                cost[static_cast<std::size_t>(i) * n + last] = inst.weight(e.data());
            }
        }
        best = std::min(best, map::ap_value(cost, n));
        int level = s - 3;
        while (level >= 0 && !std::next_permutation(mid[level].begin(), mid[level].end())) --level;
        if (level < 0) break;
    }
    return best;
}

Weight map_full_enumeration(const map::MapInstance& inst) {
    const int s = inst.s();
    const int n = inst.n();
    std::vector<std::vector<int>> perms(s - 1, std::vector<int>(n));
    for (auto& p : perms) std::iota(p.begin(), p.end(), 0);

    Weight best = kInfiniteWeight;
    std::vector<int> e(s);
    while (true) {
        Weight total = 0;
        for (int i = 0; i < n; ++i) {
            e[0] = i;
            for (int j = 0; j < s - 1; ++j) e[j + 1] = perms[j][i];
            total += inst.weight(e.data());
        }
        best = std::min(best, total);
        int level = s - 2;
        while (level >= 0 && !std::next_permutation(perms[level].begin(), perms[level].end()))
            --level;
        if (level < 0) break;
    }
    return best;
}

map::Assignment random_assignment(int s, int n, Rng& rng) {
    map::Assignment a = map::Assignment::identity(s, n);
    for (auto& p : a.perm)
        for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rand_int(rng, 0, i)]);
    return a;
}

}  // namespace combopt::bench
