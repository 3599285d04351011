#pragma once

/// @file reduce.hpp
/// @brief GTSP preprocessing: removal of redundant vertices and suppression of
///        redundant edges, preserving the optimal tour weight.

#include "combopt/gtsp/instance.hpp"

namespace combopt::gtsp {

struct ReductionReport {
    std::vector<int> removed_vertices;  ///< original vertex ids
    long long removed_edges = 0;
    double elapsed_sec = 0;
    /// original vertex id -> id in the reduced instance, -1 when removed.
    std::vector<int> vertex_map;
};

/// Removes vertices r such that some same-cluster r' is never worse on any
/// through-path.  Vertices are re-tested cyclically, at most twice each.
std::pair<GtspInstance, ReductionReport> reduce_vertices(const GtspInstance& inst);

/// Suppresses redundant edges u -> v (weight set to the forbidden sentinel).
/// At least one inbound edge per (vertex, cluster) pair always survives.
std::pair<GtspInstance, ReductionReport> reduce_edges(const GtspInstance& inst);

/// Combined algorithm: vertex reduction first, then edge reduction.
std::pair<GtspInstance, ReductionReport> preprocess(const GtspInstance& inst);

}  // namespace combopt::gtsp
