#pragma once

/// @file local_search.hpp
/// @brief Adaptations of TSP neighborhoods for GTSP (2-opt, 3-opt, Insertion,
///        Swap) and Fragment Optimization.

#include "combopt/gtsp/cluster_opt.hpp"
#include "combopt/gtsp/instance.hpp"

namespace combopt::gtsp {

/// Vertex re-selection policy when porting a TSP neighborhood to GTSP.
enum class Adaptation { Basic, BasicCO, Local, LocalCO, Global };

struct SearchStats {
    long long moves = 0;
    long long candidates = 0;
    long long bound_prunes = 0;
};

struct SearchOptions {
    bool use_lower_bounds = true;         ///< prune Global candidates with Theorem bounds
    bool advanced_neighbor_lists = false; ///< sorted-list 2-opt candidate cutoff (non-default)
    SearchStats* stats = nullptr;
};

/// First-improvement descent to a local minimum of the adapted neighborhood.
Tour two_opt(const GtspInstance& inst, const Tour& t, Adaptation adapt,
             const SearchOptions& opts = {});

/// Restricted 3-opt: only the segment-exchange reconnection (no fragment is
/// inverted); removed edges are pairwise non-adjacent.
Tour three_opt(const GtspInstance& inst, const Tour& t, Adaptation adapt,
               const SearchOptions& opts = {});

/// Remove one cluster and reinsert it elsewhere (neighboring targets excluded).
Tour insertion(const GtspInstance& inst, const Tour& t, Adaptation adapt,
               const SearchOptions& opts = {});

/// Swap two non-neighboring clusters.
Tour swap_opt(const GtspInstance& inst, const Tour& t, Adaptation adapt,
              const SearchOptions& opts = {});

enum class FoAlgorithm { Auto, F1, F2 };

/// Fragment Optimization: for every window of k consecutive clusters between
/// fixed endpoint vertices, applies the best cluster permutation and vertex
/// selection.  Auto picks F1 for k <= 4 and F2 above.
Tour fragment_opt(const GtspInstance& inst, const Tour& t, int k,
                  FoAlgorithm algo = FoAlgorithm::Auto, SearchStats* stats = nullptr);

namespace detail {

/// Best path a -> (window clusters, any order) -> b.  Returns weight, the
/// cluster permutation and the vertex per permuted cluster.  F1 and F2 return
/// identical results under the shared lowest-index tie-breaking.
struct WindowResult {
    Weight weight = kInfiniteWeight;
    std::vector<int> cluster_order;
    std::vector<int> vertices;
};
WindowResult fo_window_f1(const GtspInstance& inst, int a_vertex,
                          const std::vector<int>& clusters, int b_vertex);
WindowResult fo_window_f2(const GtspInstance& inst, int a_vertex,
                          const std::vector<int>& clusters, int b_vertex);

}  // namespace detail

}  // namespace combopt::gtsp
