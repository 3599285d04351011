#pragma once

/// @file instance.hpp
/// @brief MAP instance model: the five instance families with deterministic
///        seeding, the assignment representation and the Random-family
///        probability estimator.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "combopt/common.hpp"

namespace combopt::map {

enum class Family { Random, Clique, Geometric, Product, SquareRoot };

const char* family_code(Family f);                 // "r", "cq", "g", "p", "sr"
std::optional<Family> family_from_code(const std::string& code);

/// Instance name grammar "<s><code><n>", e.g. "5r40".
struct InstanceName {
    int s = 0;
    Family family = Family::Random;
    int n = 0;
};
std::optional<InstanceName> parse_instance_name(const std::string& name);
std::string format_instance_name(const InstanceName& name);

/// s-dimensional assignment problem instance.  Weight access is either a
/// dense row-major tensor or, for decomposable families, computed from the
/// per-pair distance tables / factor lists.
class MapInstance {
public:
    static constexpr std::size_t kDenseCellLimit = 100'000'000;

    /// Deterministic instance for (family, s, n, index); seed = s + n + index.
    static MapInstance generate(Family family, int s, int n, int index);

    /// Dense instance from explicit weights (tests and file loading).
    static MapInstance from_dense(int s, int n, std::vector<Weight> weights,
                                  Family family = Family::Random, std::uint64_t seed = 0);

    /// Clique/SquareRoot instance from explicit pair-distance tables
    /// (d[k] is the n x n table for the k-th dimension pair in lexicographic
    /// order (0,1), (0,2), ..., (s-2,s-1)).
    static MapInstance from_pair_tables(Family family, int s, int n,
                                        std::vector<std::vector<Weight>> tables);

    int s() const { return s_; }
    int n() const { return n_; }
    Family family() const { return family_; }
    std::uint64_t seed() const { return seed_; }
    bool dense() const { return !dense_.empty(); }
    bool decomposable() const { return family_ != Family::Random; }
    /// Whether the weights are independent (Random) or decomposable.
    bool independent_weights() const { return family_ == Family::Random; }

    /// Weight of the vector e (e[j] in [0, n)).
    Weight weight(const std::vector<int>& e) const;
    Weight weight(const int* e) const;

    const std::vector<Weight>& dense_weights() const { return dense_; }
    /// Recomputes w(e) from the family definition (consistency checks).
    Weight weight_from_definition(const int* e) const;

    /// Known global minimum of a single vector weight, when available.
    std::optional<Weight> known_min_vector_weight() const;

    std::size_t dense_index(const int* e) const;

    void dump(std::ostream& out) const;          ///< binary: header + row-major weights
    static MapInstance load(std::istream& in);

private:
    MapInstance() = default;
    void materialize_dense();

    int s_ = 0;
    int n_ = 0;
    Family family_ = Family::Random;
    std::uint64_t seed_ = 0;
    std::vector<Weight> dense_;
    // Decomposable data: pair tables for Clique/Geometric/SquareRoot,
    // factors for Product.
    std::vector<std::vector<Weight>> pair_dist_;  // per (i, j), i < j, row-major n x n
    std::vector<std::vector<Weight>> factors_;    // per dimension, length n
};

/// MAP solution in permutation form; the first permutation is fixed to the
/// identity.  perm[j] is pi_{j+2} for j = 0..s-2.
struct Assignment {
    std::vector<std::vector<int>> perm;

    int s() const { return static_cast<int>(perm.size()) + 1; }
    int n() const { return perm.empty() ? 0 : static_cast<int>(perm[0].size()); }
    bool operator==(const Assignment&) const = default;

    static Assignment identity(int s, int n);
    /// i-th vector (i, pi_2(i), ..., pi_s(i)).
    std::vector<int> vector_at(int i) const;
    void vector_at(int i, int* out) const;
    bool valid() const;
};

Weight assignment_weight(const MapInstance& inst, const Assignment& a);

/// Canonical coding: the list of vectors sorted by first coordinate.
std::vector<int> canonical_coding(const Assignment& a);

/// Rebuilds the permutation form from a list of n s-dimensional vectors.
Assignment assignment_from_vectors(int s, int n, const std::vector<std::vector<int>>& vectors);

/// Lower bound on Pr(alpha > 0) for Random instances with weights in
/// {1, ..., c}: 1 - exp(-1 / (2 sigma)), computed in log space.
struct AlphaBound {
    double probability = 0.0;
    bool applicable = false;  ///< validity condition ((n-1)/e)^(s-1) >= c * 2^(1/(n-1))
    double condition_lhs = 0.0;
    double condition_rhs = 0.0;
};
AlphaBound pr_alpha_positive(int s, int n, int c);

}  // namespace combopt::map
