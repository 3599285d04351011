#pragma once

/// @file instance.hpp
/// @brief GTSP instance model: clustered complete digraph with dual weight storage.

#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "combopt/common.hpp"

namespace combopt::gtsp {

/// A GTSP instance: a complete weighted digraph on n vertices partitioned into
/// m non-empty clusters.  Immutable after construction and safely shareable.
///
/// Weights are stored twice: as a single n x n matrix and, lazily, as one
/// |X| x |Y| block per ordered cluster pair.  Min/max aggregates per cluster
/// pair and per vertex/cluster pair are cached alongside the blocks.
class GtspInstance {
public:
    GtspInstance(std::vector<Weight> weights, std::vector<std::vector<int>> clusters);

    GtspInstance(GtspInstance&&) noexcept = default;
    GtspInstance& operator=(GtspInstance&&) noexcept = default;
    GtspInstance(const GtspInstance&) = delete;
    GtspInstance& operator=(const GtspInstance&) = delete;

    int n() const { return n_; }
    int m() const { return m_; }
    bool symmetric() const { return symmetric_; }
    /// True if any weight equals the forbidden-edge sentinel.
    bool has_sentinels() const { return has_sentinels_; }
    /// Size of the largest cluster.
    int s_max() const { return s_max_; }
    /// Size of the smallest cluster.
    int gamma() const { return gamma_; }
    /// Index of the smallest cluster (lowest index among ties).
    int smallest_cluster() const { return smallest_cluster_; }

    Weight weight(int x, int y) const { return weights_[static_cast<std::size_t>(x) * n_ + y]; }
    const std::vector<Weight>& weight_matrix() const { return weights_; }

    const std::vector<int>& cluster(int c) const { return clusters_[c]; }
    const std::vector<std::vector<int>>& clusters() const { return clusters_; }
    int cluster_of(int v) const { return cluster_of_[v]; }
    int cluster_size(int c) const { return static_cast<int>(clusters_[c].size()); }

    /// Weight block for the ordered cluster pair (X, Y), row-major |X| x |Y|.
    std::span<const Weight> pair_block(int X, int Y) const;

    Weight pair_min(int X, int Y) const;  ///< w_min(X -> Y)
    Weight pair_max(int X, int Y) const;  ///< w_max(X -> Y)
    Weight vert_min_out(int x, int Y) const;  ///< w_min(x -> Y)
    Weight vert_max_out(int x, int Y) const;  ///< w_max(x -> Y)
    Weight vert_min_in(int Y, int x) const;   ///< w_min(Y -> x)
    Weight vert_max_in(int Y, int x) const;   ///< w_max(Y -> x)

private:
    // Lazy dual storage, built on first use; boxed so the instance stays movable.
    struct LazyCaches {
        std::once_flag pair_once;
        std::vector<Weight> pair_min, pair_max;      // m*m
        std::vector<Weight> vmin_out, vmax_out;      // n*m
        std::vector<Weight> vmin_in, vmax_in;        // m*n indexed [Y*n+x]
        std::once_flag block_once;
        std::vector<Weight> block_data;
        std::vector<std::size_t> block_offset;       // m*m
    };

    void build_pair_caches() const;
    void build_blocks() const;

    int n_ = 0;
    int m_ = 0;
    std::vector<Weight> weights_;
    std::vector<std::vector<int>> clusters_;
    std::vector<int> cluster_of_;
    bool symmetric_ = false;
    bool has_sentinels_ = false;
    int s_max_ = 0;
    int gamma_ = 0;
    int smallest_cluster_ = 0;
    mutable std::unique_ptr<LazyCaches> lazy_;
};

/// GTSP tour as three cluster-indexed arrays.  The encoding is canonical:
/// each directed tour has exactly one representation.
struct Tour {
    std::vector<int> next;      ///< successor cluster of cluster c
    std::vector<int> prev;      ///< predecessor cluster of cluster c
    std::vector<int> vertices;  ///< chosen vertex within cluster c

    int m() const { return static_cast<int>(next.size()); }
    bool operator==(const Tour&) const = default;
};

/// Builds a Tour from a cluster visiting order and a per-cluster vertex choice
/// (vertex_of[c] = vertex for cluster c).
Tour tour_from_order(const std::vector<int>& order, const std::vector<int>& vertex_of);

/// Cluster visiting order starting from `start` (default cluster 0).
std::vector<int> tour_order(const Tour& t, int start = 0);

/// Vertex sequence in visiting order starting from cluster `start`.
std::vector<int> tour_vertex_sequence(const GtspInstance& inst, const Tour& t, int start = 0);

/// Checks the single-m-cycle and membership invariants; throws on violation.
void validate_tour(const GtspInstance& inst, const Tour& t);

/// Sum of the m edge weights along the cycle (saturating on sentinels).
Weight tour_weight(const GtspInstance& inst, const Tour& t);

/// 2-opt fragment reversal.  Positions are indices into tour_order(t, 0);
/// the fragment at positions x+1..y is reversed.  Requires y >= x + 2 and the
/// two removed edges to be distinct and non-adjacent.
Tour turn(const GtspInstance& inst, const Tour& t, int x, int y);

/// Weight change of turn() for symmetric instances, per the closed form
/// w(Tx->Ty) + w(Tx+1->Ty+1) - w(Tx->Tx+1) - w(Ty->Ty+1).
Weight turn_delta(const GtspInstance& inst, const Tour& t, int x, int y);

/// Reads the native text format: lines "N", "M", "SYMMETRIC" (0/1), then one
/// line per cluster listing vertex ids, then the weight matrix row-major.
GtspInstance read_native(std::istream& in);
void write_native(std::ostream& out, const GtspInstance& inst);

}  // namespace combopt::gtsp
