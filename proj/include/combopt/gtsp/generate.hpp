#pragma once

/// @file generate.hpp
/// @brief Clustered GTSP instance generation from points or an explicit matrix.

#include <utility>
#include <vector>

#include "combopt/gtsp/instance.hpp"

namespace combopt::gtsp {

inline int default_cluster_count(int n) { return (n + 4) / 5; }  // ceil(n / 5)

/// Localized partition of points into m non-empty clusters: farthest-point
/// center seeding from a seeded RNG, nearest-center assignment, empty clusters
/// repaired by stealing the globally farthest vertex from the largest cluster.
/// Valid for any 2 <= m <= n.
std::vector<std::vector<int>> cluster_points(const std::vector<std::pair<double, double>>& points,
                                             int m, std::uint64_t seed);

/// Same procedure driven by a distance matrix (symmetrized if needed).
std::vector<std::vector<int>> cluster_matrix(const std::vector<Weight>& weights, int n, int m,
                                             std::uint64_t seed);

/// Clustered instance from EUC_2D points.  m = 0 selects ceil(n/5).
/// Requires 3 <= m <= n.
GtspInstance generate_clustered(const std::vector<std::pair<double, double>>& points, int m,
                                std::uint64_t seed);

/// Clustered instance from an explicit weight matrix.  m = 0 selects ceil(n/5).
GtspInstance generate_clustered(const std::vector<Weight>& weights, int n, int m,
                                std::uint64_t seed);

}  // namespace combopt::gtsp
