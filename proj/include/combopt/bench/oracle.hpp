#pragma once

/// @file oracle.hpp
/// @brief Shared brute-force solvers and seeded test-instance generators used
///        by the property suites and the acceptance harness.

#include <optional>

#include "combopt/gtsp/instance.hpp"
#include "combopt/gtsp/local_search.hpp"
#include "combopt/map/instance.hpp"

namespace combopt::bench {

// ---------------------------------------------------------------------------
// GTSP
// ---------------------------------------------------------------------------

/// Random clustered instance for property tests: m clusters with sizes in
/// [1, max_cluster_size], weights uniform in [1, 100].
gtsp::GtspInstance random_gtsp_instance(std::uint64_t seed, int m, int max_cluster_size,
                                        bool symmetric);

/// Uniformly random tour (random cluster order, random vertex per cluster).
gtsp::Tour random_tour(const gtsp::GtspInstance& inst, Rng& rng);

/// Exact GTSP optimum: enumerates cluster orders with cluster 0 fixed
/// ((m-1)!, halved by reversal symmetry when applicable) and runs CO on each.
/// Refuses instances whose order count exceeds `max_orders`.
Weight gtsp_brute_force(const gtsp::GtspInstance& inst, long long max_orders = 4000000);

/// Independent exactness check: Held-Karp dynamic program over
/// (cluster subset, last vertex) states.
Weight gtsp_optimum_dp(const gtsp::GtspInstance& inst);

/// Exhaustive vertex-selection oracle for a fixed cluster order (checks CO).
Weight co_exhaustive(const gtsp::GtspInstance& inst, const gtsp::Tour& t);

/// Reference Global 2-opt: identical enumeration and restart policy as the
/// production implementation, but every candidate is evaluated by a plain CO
/// run, with no path reuse, no supporting clusters and no pruning.
gtsp::Tour naive_two_opt_global(const gtsp::GtspInstance& inst, const gtsp::Tour& t);

// ---------------------------------------------------------------------------
// MAP
// ---------------------------------------------------------------------------

/// Exact MAP optimum: enumerates pi_2..pi_{s-1} and solves an AP for the last
/// dimension (n!^(s-2) AP solves).  Refuses beyond `max_work` AP calls.
Weight map_brute_force(const map::MapInstance& inst, long long max_work = 2000000);

/// Full n!^(s-1) enumeration, the independent check for tiny instances.
Weight map_full_enumeration(const map::MapInstance& inst);

/// Random assignment (uniform permutations for dimensions 2..s).
map::Assignment random_assignment(int s, int n, Rng& rng);

}  // namespace combopt::bench
