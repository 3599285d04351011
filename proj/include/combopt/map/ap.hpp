#pragma once

/// @file ap.hpp
/// @brief Exact O(n^3) solver for the two-dimensional assignment problem.

#include <vector>

#include "combopt/common.hpp"

namespace combopt::map {

/// Returns the permutation rho minimizing sum_i cost[i * n + rho(i)].
/// Costs must be finite.  Deterministic for a fixed input.
std::vector<int> ap_solve(const std::vector<Weight>& cost, int n);

/// Optimal assignment value without the permutation.
Weight ap_value(const std::vector<Weight>& cost, int n);

}  // namespace combopt::map
