#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "combopt/bench/oracle.hpp"
#include "combopt/gtsp/generate.hpp"
#include "combopt/gtsp/instance.hpp"
#include "combopt/gtsp/tsplib.hpp"

using namespace combopt;
using namespace combopt::gtsp;

TEST_CASE("tsplib EUC_2D distances round to nearest integer") {
    std::istringstream in(
        "NAME: tiny\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\n"
        "NODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n");
    const TsplibData data = load_tsplib(in);
    REQUIRE(data.n == 3);
    const auto w = tsplib_weight_matrix(data);
    const std::vector<Weight> expect = {0, 3, 4, 3, 0, 5, 4, 5, 0};
    CHECK(w == expect);
}

TEST_CASE("tsplib explicit full matrix is echoed verbatim") {
    std::istringstream in(
        "NAME: two\nTYPE: TSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 7\n9 0\nEOF\n");
    const TsplibData data = load_tsplib(in);
    CHECK(data.matrix == std::vector<Weight>{0, 7, 9, 0});
}

TEST_CASE("tsplib rejects unsupported edge-weight types by name") {
    std::istringstream in("NAME: x\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: GEO\n");
    CHECK_THROWS_WITH_AS(load_tsplib(in), "unsupported edge-weight type: GEO", TsplibParseError);
}

TEST_CASE("tsplib reports a missing DIMENSION with a line number") {
    std::istringstream in("NAME: x\nTYPE: TSP\nEOF\n");
    CHECK_THROWS_AS(load_tsplib(in), TsplibParseError);
}

TEST_CASE("default cluster count is ceil(n/5)") {
    CHECK(default_cluster_count(15) == 3);
    CHECK(default_cluster_count(14) == 3);
    CHECK(default_cluster_count(16) == 4);
}

TEST_CASE("n = 5, m = 5 forces singleton clusters") {
    std::vector<std::pair<double, double>> pts = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    const GtspInstance inst = generate_clustered(pts, 5, 7);
    CHECK(inst.m() == 5);
    for (int c = 0; c < 5; ++c) CHECK(inst.cluster_size(c) == 1);
}

TEST_CASE("collinear points split into contiguous halves for m = 2") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 10; ++i) pts.emplace_back(i, 0.0);
    for (std::uint64_t seed : {1u, 2u, 3u, 11u}) {
        const auto clusters = cluster_points(pts, 2, seed);
        // no vertex may sit closer to the other cluster's centroid
        double cx[2] = {0, 0};
        for (int c = 0; c < 2; ++c) {
            for (int v : clusters[c]) cx[c] += v;
            cx[c] /= static_cast<double>(clusters[c].size());
        }
        for (int c = 0; c < 2; ++c)
            for (int v : clusters[c])
                CHECK(std::abs(v - cx[c]) <= std::abs(v - cx[1 - c]));
    }
}

TEST_CASE("generate_clustered validates the cluster count") {
    std::vector<std::pair<double, double>> pts = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    CHECK_THROWS_AS(generate_clustered(pts, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_clustered(pts, 5, 1), std::invalid_argument);
}

TEST_CASE("triangle tour weight") {
    std::vector<Weight> w = {0, 1, 1, 1, 0, 1, 1, 1, 0};
    GtspInstance inst(std::move(w), {{0}, {1}, {2}});
    const Tour t = tour_from_order({0, 1, 2}, {0, 1, 2});
    CHECK(tour_weight(inst, t) == 3);
}

TEST_CASE("tour weight matches recomputation from the vertex sequence") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = bench::random_gtsp_instance(900 + seed, 6, 3, false);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        validate_tour(inst, t);
        const auto seq = tour_vertex_sequence(inst, t, 0);
        Weight total = 0;
        for (std::size_t i = 0; i < seq.size(); ++i)
            total += inst.weight(seq[i], seq[(i + 1) % seq.size()]);
        CHECK(total == tour_weight(inst, t));
    }
}

TEST_CASE("next and prev stay mutually inverse over turns") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = bench::random_gtsp_instance(1700 + seed, 8, 3, true);
        Rng rng(seed);
        Tour t = bench::random_tour(inst, rng);
        const Tour turned = turn(inst, t, 1, 4);
        validate_tour(inst, turned);
        int c = 0;
        for (int i = 0; i < inst.m(); ++i) c = turned.next[c];
        CHECK(c == 0);
    }
}

TEST_CASE("turn_delta equals full recomputation on symmetric instances") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = bench::random_gtsp_instance(2000 + seed, 4 + static_cast<int>(seed % 9),
                                                      3, true);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        const int m = inst.m();
        for (int x = 0; x + 2 <= m - 1; ++x)
            for (int y = x + 2; y <= ((x == 0) ? m - 2 : m - 1); ++y) {
                const Tour moved = turn(inst, t, x, y);
                CHECK(tour_weight(inst, moved) - tour_weight(inst, t) ==
                      turn_delta(inst, t, x, y));
            }
    }
}

TEST_CASE("asymmetric turn weight equals full recomputation oracle") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto inst = bench::random_gtsp_instance(2500 + seed, 5, 3, false);
        Rng rng(seed);
        const Tour t = bench::random_tour(inst, rng);
        const Tour moved = turn(inst, t, 0, 2);
        // independent recomputation: reverse the fragment on the vertex sequence
        auto seq = tour_vertex_sequence(inst, t, 0);
        std::reverse(seq.begin() + 1, seq.begin() + 3);
        Weight total = 0;
        for (std::size_t i = 0; i < seq.size(); ++i)
            total += inst.weight(seq[i], seq[(i + 1) % seq.size()]);
        CHECK(tour_weight(inst, moved) == total);
    }
}

TEST_CASE("degenerate turn spans are rejected") {
    const auto inst = bench::random_gtsp_instance(7, 5, 2, true);
    Rng rng(7);
    const Tour t = bench::random_tour(inst, rng);
    CHECK_THROWS_AS(turn(inst, t, 1, 2), InvalidMoveError);
    CHECK_THROWS_AS(turn(inst, t, 0, 4), InvalidMoveError);
}

TEST_CASE("pair and vertex min/max caches agree with exhaustive scans") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = bench::random_gtsp_instance(3100 + seed, 5, 3, false);
        for (int X = 0; X < inst.m(); ++X)
            for (int Y = 0; Y < inst.m(); ++Y) {
                if (X == Y) continue;
                Weight lo = kInfiniteWeight, hi = 0;
                for (int x : inst.cluster(X))
                    for (int y : inst.cluster(Y)) {
                        lo = std::min(lo, inst.weight(x, y));
                        hi = std::max(hi, inst.weight(x, y));
                    }
                CHECK(inst.pair_min(X, Y) == lo);
                CHECK(inst.pair_max(X, Y) == hi);
                const auto block = inst.pair_block(X, Y);
                Weight block_min = kInfiniteWeight;
                for (Weight w : block) block_min = std::min(block_min, w);
                CHECK(block_min == lo);
                for (int x : inst.cluster(X)) {
                    Weight vlo = kInfiniteWeight, vhi = 0;
                    for (int y : inst.cluster(Y)) {
                        vlo = std::min(vlo, inst.weight(x, y));
                        vhi = std::max(vhi, inst.weight(x, y));
                    }
                    CHECK(inst.vert_min_out(x, Y) == vlo);
                    CHECK(inst.vert_max_out(x, Y) == vhi);
                }
            }
    }
}

TEST_CASE("native format round-trips") {
    const auto inst = bench::random_gtsp_instance(55, 5, 3, false);
    std::stringstream buf;
    write_native(buf, inst);
    const GtspInstance back = read_native(buf);
    CHECK(back.n() == inst.n());
    CHECK(back.m() == inst.m());
    CHECK(back.weight_matrix() == inst.weight_matrix());
    CHECK(back.clusters() == inst.clusters());
}

TEST_CASE("cluster size invariants") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = bench::random_gtsp_instance(4200 + seed, 6, 4, true);
        CHECK(inst.gamma() >= 1);
        CHECK(inst.gamma() <= inst.n() / inst.m());
        CHECK(inst.s_max() >= (inst.n() + inst.m() - 1) / inst.m());
        CHECK(inst.s_max() <= inst.n() - inst.m() + 1);
    }
}
