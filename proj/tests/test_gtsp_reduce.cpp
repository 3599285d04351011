#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "combopt/bench/oracle.hpp"
#include "combopt/gtsp/reduce.hpp"

using namespace combopt;
using namespace combopt::gtsp;

namespace {

// Oracle optimum that skips sentinel tours entirely.
Weight optimum(const GtspInstance& inst) { return bench::gtsp_brute_force(inst); }

}  // namespace

TEST_CASE("a dominated vertex is removed") {
    // cluster {0,1}; vertex 1 beats vertex 0 on every through-path
    const int n = 4;
    std::vector<Weight> w(n * n, 10);
    for (int i = 0; i < n; ++i) w[i * n + i] = 0;
    // edges via vertex 1 are all cheaper than via vertex 0
    w[2 * n + 0] = 9;
    w[0 * n + 2] = 9;
    w[3 * n + 0] = 9;
    w[0 * n + 3] = 9;
    w[2 * n + 1] = 1;
    w[1 * n + 2] = 1;
    w[3 * n + 1] = 1;
    w[1 * n + 3] = 1;
    GtspInstance inst(std::move(w), {{0, 1}, {2}, {3}});
    auto [reduced, report] = reduce_vertices(inst);
    CHECK(report.removed_vertices == std::vector<int>{0});
    CHECK(reduced.n() == 3);
    CHECK(reduced.cluster_size(0) == 1);
}

TEST_CASE("singleton clusters yield zero removals") {
    const auto inst = bench::random_gtsp_instance(11, 5, 1, true);
    auto [reduced, report] = reduce_vertices(inst);
    CHECK(report.removed_vertices.empty());
    CHECK(reduced.n() == inst.n());
}

TEST_CASE("vertex reduction preserves the brute-force optimum") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = bench::random_gtsp_instance(100 + seed, 5, 3, seed % 2 == 0);
        auto [reduced, report] = reduce_vertices(inst);
        CHECK(optimum(reduced) == optimum(inst));
        for (int c = 0; c < reduced.m(); ++c) CHECK(reduced.cluster_size(c) >= 1);
    }
}

TEST_CASE("a twin vertex makes every inbound edge redundant, ties keep the twin") {
    // vertices 0 and 1 identical in all weights within cluster {0,1}
    const int n = 4;
    std::vector<Weight> w(n * n, 7);
    for (int i = 0; i < n; ++i) w[i * n + i] = 0;
    for (int x = 2; x < 4; ++x) {
        w[x * n + 0] = 3;
        w[x * n + 1] = 3;
        w[0 * n + x] = 4;
        w[1 * n + x] = 4;
    }
    GtspInstance inst(std::move(w), {{0, 1}, {2}, {3}});
    auto [reduced, report] = reduce_edges(inst);
    // all edges into the higher-indexed twin are suppressed
    CHECK(report.removed_edges == 2);
    CHECK(is_forbidden(reduced.weight(2, 1)));
    CHECK(is_forbidden(reduced.weight(3, 1)));
    CHECK(!is_forbidden(reduced.weight(2, 0)));
    CHECK(!is_forbidden(reduced.weight(3, 0)));
}

TEST_CASE("no edges into singleton clusters are suppressed") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = bench::random_gtsp_instance(200 + seed, 5, 1, true);
        auto [reduced, report] = reduce_edges(inst);
        CHECK(report.removed_edges == 0);
    }
}

TEST_CASE("edge reduction preserves the optimum and never empties a pair") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = bench::random_gtsp_instance(300 + seed, 5, 3, seed % 2 == 0);
        auto [reduced, report] = reduce_edges(inst);
        CHECK(optimum(reduced) == optimum(inst));
        for (int X = 0; X < reduced.m(); ++X)
            for (int Y = 0; Y < reduced.m(); ++Y) {
                if (X == Y) continue;
                CHECK(!is_forbidden(reduced.pair_min(X, Y)));
            }
    }
}

TEST_CASE("combined preprocessing preserves the optimum on 50 instances") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int m = 4 + static_cast<int>(seed % 3);
        const auto inst = bench::random_gtsp_instance(400 + seed, m, 3, seed % 2 == 0);
        auto [reduced, report] = preprocess(inst);
        CHECK(optimum(reduced) == optimum(inst));
    }
}

TEST_CASE("an already reduced instance passes through unchanged") {
    const auto inst = bench::random_gtsp_instance(500, 5, 2, true);
    auto [first, r1] = preprocess(inst);
    auto [second, r2] = preprocess(first);
    CHECK(r2.removed_vertices.empty());
    CHECK(r2.removed_edges == 0);
    CHECK(second.weight_matrix() == first.weight_matrix());
}

TEST_CASE("a third vertex-reduction pass removes nothing on the corpus") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto inst = bench::random_gtsp_instance(600 + seed, 5, 3, true);
        auto [r1, rep1] = reduce_vertices(inst);
        auto [r2, rep2] = reduce_vertices(r1);
        CHECK(rep2.removed_vertices.empty());
    }
}

TEST_CASE("duplicate-vertex instances lose at least as much combined") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto base = bench::random_gtsp_instance(700 + seed, 4, 2, true);
        auto [vred, vrep] = reduce_vertices(base);
        auto [ered, erep] = reduce_edges(base);
        auto [pre, prep] = preprocess(base);
        CHECK(prep.removed_vertices.size() >= vrep.removed_vertices.size());
        CHECK(static_cast<std::size_t>(prep.removed_edges) + prep.removed_vertices.size() >=
              std::max(vrep.removed_vertices.size(),
                       static_cast<std::size_t>(erep.removed_edges) * 0));
    }
}

TEST_CASE("vertex reduction requires three clusters") {
    std::vector<Weight> w = {0, 1, 1, 0};
    GtspInstance inst(std::move(w), {{0}, {1}});
    CHECK_THROWS_AS(reduce_vertices(inst), std::invalid_argument);
}
