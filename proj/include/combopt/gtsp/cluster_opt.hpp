#pragma once

/// @file cluster_opt.hpp
/// @brief Cluster Optimization: exact best vertex selection for a fixed cluster
///        order, its refinements, layered shortest-path machinery and the two
///        constant-time lower bounds.

#include <optional>
#include <vector>

#include "combopt/gtsp/instance.hpp"

namespace combopt::gtsp {

struct CoRefinements {
    bool rotate_smallest = true;      ///< start the DP at a cluster of size gamma
    bool reduce_first_cluster = true; ///< drop dominated first-cluster vertices for this order
    bool improved_order = true;       ///< one-step-lookahead calculation order
};

/// Exact optimum over all vertex selections for the cluster order of `t`.
/// Cluster order is preserved.  Throws InfeasibleOrderError if every selection
/// hits a forbidden edge.
Tour cluster_optimize(const GtspInstance& inst, const Tour& t, CoRefinements ref = {});

struct CoResult {
    Tour tour;
    Weight weight = kInfiniteWeight;
    bool feasible = false;
};

/// Like cluster_optimize but returns a saturated result instead of throwing.
CoResult cluster_optimize_checked(const GtspInstance& inst, const Tour& t, CoRefinements ref = {});

/// Best selection for the clusters of `order` (order[i] = cluster id); writes
/// the selection into `vertex_of` and returns the cycle weight (saturating).
Weight co_order(const GtspInstance& inst, const std::vector<int>& order,
                std::vector<int>& vertex_of, CoRefinements ref = {});

/// Re-optimizes the vertices of the flagged clusters within the given cluster
/// order, all other vertices fixed.  Returns the resulting cycle weight.
Weight reoptimize_clusters(const GtspInstance& inst, const std::vector<int>& order,
                           std::vector<int>& vertex_of, const std::vector<char>& affected);

/// Shortest-path table from an origin cluster through an incrementally grown
/// cluster sequence, maintained with supporting clusters: a new supporting
/// cluster is adopted as soon as a strictly smaller layer is appended.
class PathTable {
public:
    PathTable(const GtspInstance& inst, int origin_cluster);

    /// Appends the next cluster of the sequence.
    void extend(int next_cluster);

    int origin_cluster() const { return origin_; }
    int support_cluster() const { return support_; }
    int last_cluster() const { return last_; }
    int length() const { return length_; }

    /// Shortest path weight from origin vertex (index within the origin
    /// cluster) to a vertex (index within the last appended cluster).
    Weight to_last(int origin_index, int last_index) const;

    /// Materialized |origin| x |last| matrix of shortest path weights.
    std::vector<Weight> last_matrix() const;

    /// Path weights from origin to the supporting cluster (|origin| x |support|).
    const std::vector<Weight>& origin_to_support() const { return frozen_; }
    /// Path weights from the supporting cluster to the last layer.
    const std::vector<Weight>& support_to_last() const { return active_; }

private:
    const GtspInstance* inst_;
    int origin_, support_, last_, prev_last_;
    int length_ = 1;
    std::vector<Weight> frozen_;  // |origin| x |support| (empty while support == origin)
    std::vector<Weight> active_;  // |support| x |last|
};

struct BoundResult {
    Weight bound = 0;
    bool certified = false;  ///< precondition (tour is a CO fixed point) verified
};

/// Lower bound on the shortest path from any vertex of the cluster at tour
/// position `a` to any vertex of the cluster at position `b` (positions over
/// tour_order(t, 0), fragment following tour direction).  The bound is valid
/// when `t` is a CO fixed point for its order; the returned flag reports
/// whether that has been verified.
BoundResult shortest_path_lower_bound(const GtspInstance& inst, const Tour& t, int a, int b);

/// Lower bound on the shortest path through all m clusters from the cluster
/// at position 0 to the cluster at position m-1 (the cycle broken before
/// cluster 0): w(T) - w_max(last -> first).
BoundResult broken_cycle_lower_bound(const GtspInstance& inst, const Tour& t);

namespace detail {

/// Fragment bound of Theorem-style form, no fixed-point verification.
/// `order`/`vertex_of` describe the current tour; positions a..b inclusive.
Weight fragment_lower_bound(const GtspInstance& inst, const std::vector<int>& order,
                            const std::vector<int>& vertex_of, int a, int b);

/// Sum of w_min over consecutive cluster pairs of the fragment a..b.
Weight fragment_min_sum(const GtspInstance& inst, const std::vector<int>& order, int a, int b);

/// Layered cycle with explicit edge matrices between consecutive layers
/// (cyclically).  Used to evaluate rearranged tours from path fragments.
struct LayeredCycle {
    std::vector<int> layer_sizes;
    /// edges[i] is row-major layer_sizes[i] x layer_sizes[(i+1) % k].
    std::vector<std::vector<Weight>> edges;

    /// Shortest cycle weight and the chosen node index per layer.
    std::pair<Weight, std::vector<int>> shortest_cycle() const;
};

/// Exact DP for the shortest path from any vertex of the first cluster of
/// `seq` to every vertex of the last, through the sequence.  Returns the
/// |first| x |last| matrix.  Oracle-grade, used by tests and bounds checks.
std::vector<Weight> path_dp(const GtspInstance& inst, const std::vector<int>& seq);

/// Best vertex selection for a fixed a -> clusters -> b window; returns weight
/// and one vertex per window cluster (lowest-index tie-breaking).
std::pair<Weight, std::vector<int>> window_selection_dp(const GtspInstance& inst, int a_vertex,
                                                        const std::vector<int>& clusters,
                                                        int b_vertex);

}  // namespace detail

}  // namespace combopt::gtsp
