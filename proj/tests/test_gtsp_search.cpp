#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "combopt/bench/oracle.hpp"
#include "combopt/gtsp/cluster_opt.hpp"
#include "combopt/gtsp/local_search.hpp"

using namespace combopt;
using namespace combopt::gtsp;

namespace {

GtspInstance line_metric_instance(const std::vector<double>& xs,
                                  std::vector<std::vector<int>> clusters) {
    const int n = static_cast<int>(xs.size());
    std::vector<Weight> w(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                w[static_cast<std::size_t>(i) * n + j] =
                    static_cast<Weight>(std::llround(std::abs(xs[i] - xs[j]) * 10));
    return GtspInstance(std::move(w), std::move(clusters));
}

}  // namespace

TEST_CASE("CO leaves singleton-cluster tours unchanged") {
    const auto inst = bench::random_gtsp_instance(10, 6, 1, true);
    Rng rng(3);
    const Tour t = bench::random_tour(inst, rng);
    const Tour out = cluster_optimize(inst, t);
    CHECK(out == t);
}

TEST_CASE("CO equals the exhaustive vertex-selection oracle") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto inst = bench::random_gtsp_instance(100 + seed, 4, 3, seed % 2 == 0);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        const Tour out = cluster_optimize(inst, t);
        CHECK(tour_weight(inst, out) == bench::co_exhaustive(inst, t));
        CHECK(tour_order(out, 0) == tour_order(t, 0));
    }
}

TEST_CASE("CO refinements are speed-only") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto inst = bench::random_gtsp_instance(200 + seed, 5, 4, seed % 2 == 0);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        const Weight with_all = tour_weight(inst, cluster_optimize(inst, t, {true, true, true}));
        const Weight plain = tour_weight(inst, cluster_optimize(inst, t, {false, false, false}));
        const Weight no_order = tour_weight(inst, cluster_optimize(inst, t, {true, true, false}));
        const Weight no_reduce = tour_weight(inst, cluster_optimize(inst, t, {true, false, true}));
        CHECK(with_all == plain);
        CHECK(no_order == plain);
        CHECK(no_reduce == plain);
    }
}

TEST_CASE("CO reports infeasible fixed orders") {
    // two-vertex middle cluster with all inbound edges forbidden
    std::vector<Weight> w(16, 1);
    for (int i = 0; i < 4; ++i) w[i * 4 + i] = 0;
    w[0 * 4 + 1] = kInfiniteWeight;
    w[0 * 4 + 2] = kInfiniteWeight;
    w[3 * 4 + 1] = kInfiniteWeight;
    w[3 * 4 + 2] = kInfiniteWeight;
    GtspInstance inst(std::move(w), {{0}, {1, 2}, {3}});
    const Tour t = tour_from_order({0, 1, 2}, {0, 1, 3});
    CHECK_THROWS_AS(cluster_optimize(inst, t), InfeasibleOrderError);
}

TEST_CASE("PathTable matches the exact layered DP") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = bench::random_gtsp_instance(300 + seed, 7, 4, false);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        const auto order = tour_order(t, 0);
        PathTable table(inst, order[0]);
        std::vector<int> seq = {order[0]};
        for (int i = 1; i < inst.m(); ++i) {
            table.extend(order[i]);
            seq.push_back(order[i]);
            const auto exact = detail::path_dp(inst, seq);
            CHECK(table.last_matrix() == exact);
        }
    }
}

TEST_CASE("supporting cluster is adopted as soon as a smaller layer appears") {
    const auto inst = bench::random_gtsp_instance(333, 6, 4, true);
    // find an order where sizes strictly decrease somewhere
    std::vector<int> order(inst.m());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return inst.cluster_size(a) > inst.cluster_size(b); });
    PathTable table(inst, order[0]);
    int expected_support = order[0];
    for (std::size_t i = 1; i < order.size(); ++i) {
        table.extend(order[i]);
        // support tracks the smallest layer among all but the last appended
        if (i >= 2 && inst.cluster_size(order[i - 1]) < inst.cluster_size(expected_support))
            expected_support = order[i - 1];
        CHECK(table.support_cluster() == expected_support);
    }
}

TEST_CASE("fragment bound never exceeds the exact path weight") {
    long long sampled = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = bench::random_gtsp_instance(400 + seed, 6, 3, true);
        Rng rng(seed);
        Tour t = bench::random_tour(inst, rng);
        t = cluster_optimize(inst, t);  // certify the precondition
        const auto order = tour_order(t, 0);
        for (int a = 0; a < inst.m(); ++a)
            for (int len = 1; len < inst.m(); ++len) {
                const int b = (a + len) % inst.m();
                const auto res = shortest_path_lower_bound(inst, t, a, b);
                CHECK(res.certified);
                std::vector<int> seq;
                for (int p = a;; p = (p + 1) % inst.m()) {
                    seq.push_back(order[p]);
                    if (p == b) break;
                }
                const auto exact = detail::path_dp(inst, seq);
                const Weight best = *std::min_element(exact.begin(), exact.end());
                CHECK(res.bound <= best);
                ++sampled;
            }
    }
    CHECK(sampled >= 1000);
}

TEST_CASE("bounds are exact for singleton clusters and uniform weights") {
    {
        const auto inst = bench::random_gtsp_instance(77, 6, 1, true);
        Rng rng(1);
        Tour t = cluster_optimize(inst, bench::random_tour(inst, rng));
        const auto order = tour_order(t, 0);
        const auto res = shortest_path_lower_bound(inst, t, 0, 3);
        std::vector<int> seq = {order[0], order[1], order[2], order[3]};
        const auto exact = detail::path_dp(inst, seq);
        CHECK(res.bound == *std::min_element(exact.begin(), exact.end()));
    }
    {
        std::vector<Weight> w(64, 5);
        for (int i = 0; i < 8; ++i) w[i * 8 + i] = 0;
        GtspInstance inst(std::move(w), {{0, 1}, {2, 3}, {4, 5}, {6, 7}});
        const Tour t = tour_from_order({0, 1, 2, 3}, {0, 2, 4, 6});
        const auto res = shortest_path_lower_bound(inst, t, 0, 2);
        CHECK(res.bound == 10);  // two uniform edges
        const auto broken = broken_cycle_lower_bound(inst, t);
        CHECK(broken.bound == 15);  // w(T) - w_max(last -> first) = 20 - 5
    }
}

TEST_CASE("2-opt uncrosses a crossing symmetric tour") {
    // four singleton clusters on a square; crossing tour 0-2-1-3
    std::vector<std::pair<double, double>> pts = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    std::vector<Weight> w(16, 0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
            w[i * 4 + j] = static_cast<Weight>(std::llround(std::sqrt(dx * dx + dy * dy)));
        }
    GtspInstance inst(std::move(w), {{0}, {1}, {2}, {3}});
    const Tour crossing = tour_from_order({0, 2, 1, 3}, {0, 1, 2, 3});
    const Tour out = two_opt(inst, crossing, Adaptation::Basic);
    CHECK(tour_weight(inst, out) == 40);
}

TEST_CASE("descent and fixed-point properties for all simple searches") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const bool sym = seed % 2 == 0;
        const auto inst = bench::random_gtsp_instance(500 + seed, 7, 3, sym);
        Rng rng(seed);
        const Tour t0 = bench::random_tour(inst, rng);
        const Weight w0 = tour_weight(inst, t0);
        for (Adaptation adapt : {Adaptation::Basic, Adaptation::BasicCO, Adaptation::Local,
                                 Adaptation::LocalCO, Adaptation::Global}) {
            for (int op = 0; op < 4; ++op) {
                auto run = [&](const Tour& t) {
                    switch (op) {
                        case 0: return two_opt(inst, t, adapt);
                        case 1: return three_opt(inst, t, adapt);
                        case 2: return insertion(inst, t, adapt);
                        default: return swap_opt(inst, t, adapt);
                    }
                };
                const Tour once = run(t0);
                const Weight w1 = tour_weight(inst, once);
                CHECK(w1 <= w0);
                const Tour twice = run(once);
                CHECK(tour_weight(inst, twice) == w1);
            }
        }
    }
}

TEST_CASE("Global 2-opt equals the naive CO-per-candidate implementation") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const bool sym = seed % 3 != 0;
        const int m = 4 + static_cast<int>(seed % 4);
        const auto inst = bench::random_gtsp_instance(600 + seed, m, 3, sym);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        const Tour fast = two_opt(inst, t, Adaptation::Global);
        const Tour naive = bench::naive_two_opt_global(inst, t);
        CHECK(tour_weight(inst, fast) == tour_weight(inst, naive));
    }
}

TEST_CASE("Global 2-opt pruning changes no final weight") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = bench::random_gtsp_instance(700 + seed, 7, 3, seed % 2 == 0);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        SearchOptions with, without;
        with.use_lower_bounds = true;
        without.use_lower_bounds = false;
        SearchStats stats;
        with.stats = &stats;
        const Tour a = two_opt(inst, t, Adaptation::Global, with);
        const Tour b = two_opt(inst, t, Adaptation::Global, without);
        CHECK(tour_weight(inst, a) == tour_weight(inst, b));
        CHECK(stats.bound_prunes <= stats.candidates);
    }
}

TEST_CASE("advanced neighbor-list 2-opt reaches a Basic 2-opt local minimum") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto inst = bench::random_gtsp_instance(800 + seed, 8, 3, true);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        SearchOptions adv;
        adv.advanced_neighbor_lists = true;
        const Tour out = two_opt(inst, t, Adaptation::Basic, adv);
        // no Basic 2-opt move improves the result
        const Tour check = two_opt(inst, out, Adaptation::Basic);
        CHECK(tour_weight(inst, check) == tour_weight(inst, out));
    }
}

TEST_CASE("Basic 2-opt local minima are Basic swap local minima (symmetric)") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = bench::random_gtsp_instance(900 + seed, 4 + static_cast<int>(seed % 6),
                                                      3, true);
        Rng rng(seed);
        const Tour t = two_opt(inst, bench::random_tour(inst, rng), Adaptation::Basic);
        SearchStats stats;
        SearchOptions opts;
        opts.stats = &stats;
        const Tour swapped = swap_opt(inst, t, Adaptation::Basic, opts);
        CHECK(stats.moves == 0);
        CHECK(tour_weight(inst, swapped) == tour_weight(inst, t));
    }
}

TEST_CASE("swap-dominance fails for the Local adaptation on a planar witness") {
    // planar instance with clusters {1},{2},{3,3'},{4},{5},{6},{7,7'},{8}:
    // a Global-2-opt local minimum that a Local swap with reselection improves
    std::vector<std::pair<double, double>> pts = {
        {0, 0},    // 0: vertex 1
        {20, 30},  // 1: vertex 2
        {30, 30},  // 2: vertex 3
        {40, 30},  // 3: vertex 4
        {60, 0},   // 4: vertex 5
        {40, -30}, // 5: vertex 6
        {30, -30}, // 6: vertex 7
        {20, -30}, // 7: vertex 8
        {30, 24},  // 8: vertex 7'
        {30, -24}, // 9: vertex 3'
    };
    const int n = 10;
    std::vector<Weight> w(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
            if (i != j)
                w[static_cast<std::size_t>(i) * n + j] =
                    static_cast<Weight>(std::llround(std::sqrt(dx * dx + dy * dy) * 100));
        }
    GtspInstance inst(std::move(w),
                      {{0}, {1}, {2, 9}, {3}, {4}, {5}, {6, 8}, {7}});
    // T = 1 -> 2 -> 7' -> 4 -> 5 -> 6 -> 3' -> 8 -> 1
    const Tour t = tour_from_order({0, 1, 6, 3, 4, 5, 2, 7}, {0, 1, 9, 3, 4, 5, 8, 7});
    const Tour after2opt = two_opt(inst, t, Adaptation::Global);
    CHECK(tour_weight(inst, after2opt) == tour_weight(inst, t));
    const Tour swapped = swap_opt(inst, t, Adaptation::Local);
    CHECK(tour_weight(inst, swapped) < tour_weight(inst, t));
}

TEST_CASE("3-opt cannot move below m = 6 and fixes a constructed exchange") {
    {
        const auto inst = bench::random_gtsp_instance(40, 4, 2, true);
        Rng rng(4);
        const Tour t = bench::random_tour(inst, rng);
        CHECK(three_opt(inst, t, Adaptation::Basic) == t);
    }
    // exhaustive-scan oracle on random instances: three_opt reaches a local
    // minimum of the restricted neighborhood
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto inst = bench::random_gtsp_instance(1000 + seed, 7, 2, false);
        Rng rng(seed);
        const Tour out = three_opt(inst, bench::random_tour(inst, rng), Adaptation::Basic);
        const auto order = tour_order(out, 0);
        const int m = inst.m();
        for (int x = 0; x < m; ++x)
            for (int y = x + 2; y < m; ++y)
                for (int z = y + 2; z < m; ++z) {
                    if ((x + m - z) % m < 2) continue;
                    std::vector<int> cand;
                    for (int p = 0; p <= x; ++p) cand.push_back(order[p]);
                    for (int p = y + 1; p <= z; ++p) cand.push_back(order[p]);
                    for (int p = x + 1; p <= y; ++p) cand.push_back(order[p]);
                    for (int p = z + 1; p < m; ++p) cand.push_back(order[p]);
                    Weight cw = 0;
                    for (int p = 0; p < m; ++p)
                        cw += inst.weight(out.vertices[cand[p]],
                                          out.vertices[cand[(p + 1) % m]]);
                    CHECK(cw >= tour_weight(inst, out));
                }
    }
}

TEST_CASE("insertion moves a misplaced cluster to its slot in a line metric") {
    // singleton clusters on a line, one element out of order
    const auto inst = line_metric_instance({0, 1, 2, 3, 4, 5},
                                           {{0}, {1}, {2}, {3}, {4}, {5}});
    const Tour bad = tour_from_order({0, 2, 3, 1, 4, 5}, {0, 1, 2, 3, 4, 5});
    const Tour out = insertion(inst, bad, Adaptation::Basic);
    CHECK(tour_weight(inst, out) == 100);  // sorted sweep: 2 * 5 * 10
}

TEST_CASE("insertion Global equals naive per-move CO evaluation at the fixed point") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto inst = bench::random_gtsp_instance(1100 + seed, 6, 3, seed % 2 == 0);
        Rng rng(seed);
        const Tour out = insertion(inst, bench::random_tour(inst, rng), Adaptation::Global);
        // no insertion candidate, evaluated by full CO, may beat the result
        const auto order = tour_order(out, 0);
        const Weight w = tour_weight(inst, out);
        const int m = inst.m();
        for (int x = 0; x < m; ++x)
            for (int off = 1; off <= m - 2; ++off) {
                const int j = (x + off) % m;
                std::vector<int> cand;
                for (int p = (x + 1) % m; p != x; p = (p + 1) % m) {
                    cand.push_back(order[p]);
                    if (p == j) cand.push_back(order[x]);
                }
                std::vector<int> vert(out.vertices);
                CHECK(co_order(inst, cand, vert) >= w);
            }
    }
}

TEST_CASE("swap repairs transposed clusters in a line metric") {
    const auto inst = line_metric_instance({0, 1, 2, 3, 4, 5},
                                           {{0}, {1}, {2}, {3}, {4}, {5}});
    const Tour bad = tour_from_order({0, 3, 2, 1, 4, 5}, {0, 1, 2, 3, 4, 5});
    const Tour out = swap_opt(inst, bad, Adaptation::Basic);
    CHECK(tour_weight(inst, out) == 100);
}

TEST_CASE("FO window already optimal stays unchanged") {
    const auto inst = line_metric_instance({0, 1, 2, 3, 4, 5, 6, 7},
                                           {{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}});
    std::vector<int> ids(8);
    std::iota(ids.begin(), ids.end(), 0);
    const Tour t = tour_from_order(ids, ids);
    CHECK(fragment_opt(inst, t, 3) == t);
}

TEST_CASE("F1 and F2 agree exactly") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int m = 6 + static_cast<int>(seed % 3);
        const auto inst = bench::random_gtsp_instance(1200 + seed, m, 3, seed % 2 == 0);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        for (int k : {3, 5}) {
            if (k > m - 2) continue;
            const Tour f1 = fragment_opt(inst, t, k, FoAlgorithm::F1);
            const Tour f2 = fragment_opt(inst, t, k, FoAlgorithm::F2);
            CHECK(f1 == f2);
        }
    }
}

TEST_CASE("FO with k = m - 2 matches the window brute force") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = bench::random_gtsp_instance(1300 + seed, 6, 3, true);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        const Tour out = fragment_opt(inst, t, 4);
        const Weight w = tour_weight(inst, out);
        // every window rearrangement of the result is no better
        const auto order = tour_order(out, 0);
        for (int anchor = 0; anchor < 6; ++anchor) {
            std::vector<int> window(4);
            for (int i = 0; i < 4; ++i) window[i] = order[(anchor + 1 + i) % 6];
            const int a = out.vertices[order[anchor]];
            const int b = out.vertices[order[(anchor + 5) % 6]];
            const auto res = detail::fo_window_f1(inst, a, window, b);
            Weight current = 0;
            for (int i = 0; i <= 4; ++i) {
                const int p = (anchor + i) % 6;
                current += inst.weight(out.vertices[order[p]],
                                       out.vertices[order[(p + 1) % 6]]);
            }
            CHECK(res.weight >= current);
        }
    }
}

TEST_CASE("fragment size validation") {
    const auto inst = bench::random_gtsp_instance(1400, 6, 2, true);
    Rng rng(0);
    const Tour t = bench::random_tour(inst, rng);
    CHECK_THROWS_AS(fragment_opt(inst, t, 1), std::invalid_argument);
    CHECK_THROWS_AS(fragment_opt(inst, t, 5), std::invalid_argument);
}
