#include "combopt/map/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <cstring>
#include <istream>
#include <ostream>

namespace combopt::map {

const char* family_code(Family f) {
    switch (f) {
        case Family::Random: return "r";
        case Family::Clique: return "cq";
        case Family::Geometric: return "g";
        case Family::Product: return "p";
        case Family::SquareRoot: return "sr";
    }
    return "?";
}

std::optional<Family> family_from_code(const std::string& code) {
    if (code == "r") return Family::Random;
    if (code == "cq") return Family::Clique;
    if (code == "g") return Family::Geometric;
    if (code == "p") return Family::Product;
    if (code == "sr") return Family::SquareRoot;
    return std::nullopt;
}

std::optional<InstanceName> parse_instance_name(const std::string& name) {
    std::size_t i = 0;
    while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) ++i;
    std::size_t j = i;
    while (j < name.size() && std::isalpha(static_cast<unsigned char>(name[j]))) ++j;
    if (i == 0 || j == i || j == name.size()) return std::nullopt;
    const std::string tail = name.substr(j);
    if (!std::all_of(tail.begin(), tail.end(),
                     [](unsigned char ch) { return std::isdigit(ch); }))
        return std::nullopt;
    const auto fam = family_from_code(name.substr(i, j - i));
    if (!fam) return std::nullopt;
    InstanceName out;
    out.s = std::stoi(name.substr(0, i));
    out.family = *fam;
    out.n = std::stoi(tail);
    if (out.s < 3 || out.n < 2) return std::nullopt;
    return out;
}

std::string format_instance_name(const InstanceName& name) {
    return std::to_string(name.s) + family_code(name.family) + std::to_string(name.n);
}

namespace {

std::size_t pow_cells(int n, int s) {
    std::size_t cells = 1;
    for (int i = 0; i < s; ++i) {
        if (cells > MapInstance::kDenseCellLimit / static_cast<std::size_t>(n) + 1)
            return MapInstance::kDenseCellLimit + 1;
        cells *= static_cast<std::size_t>(n);
    }
    return cells;
}

Weight round_to_weight(double x) { return static_cast<Weight>(std::llround(x)); }

}  // namespace

MapInstance MapInstance::generate(Family family, int s, int n, int index) {
    if (s < 3) throw std::invalid_argument("MAP needs at least three dimensions");
    if (n < 2) throw std::invalid_argument("MAP side size must be at least 2");
    if (index < 1 || index > 10) throw std::invalid_argument("instance index must be in 1..10");

    MapInstance inst;
    inst.s_ = s;
    inst.n_ = n;
    inst.family_ = family;
    inst.seed_ = static_cast<std::uint64_t>(s + n + index);
    Rng rng(inst.seed_);
    const std::size_t cells = pow_cells(n, s);

    switch (family) {
        case Family::Random: {
            if (cells > kDenseCellLimit)
                throw std::invalid_argument("Random instance too large for dense storage");
            inst.dense_.resize(cells);
            for (auto& w : inst.dense_) w = rand_int(rng, 1, 100);
            return inst;
        }
        case Family::Clique:
        case Family::SquareRoot: {
            // Pair tables in lexicographic dimension order, each row-major.
            for (int i = 0; i < s - 1; ++i)
                for (int j = i + 1; j < s; ++j) {
                    std::vector<Weight> d(static_cast<std::size_t>(n) * n);
                    for (auto& x : d) x = rand_int(rng, 1, 100);
                    inst.pair_dist_.push_back(std::move(d));
                }
            break;
        }
        case Family::Geometric: {
            // One point set per dimension; coordinates uniform in {1..100};
            // distance tables are rounded Euclidean distances.
            std::vector<std::vector<std::pair<int, int>>> pts(s);
            for (int d = 0; d < s; ++d) {
                pts[d].resize(n);
                for (int v = 0; v < n; ++v) {
                    const int x = rand_int(rng, 1, 100);
                    const int y = rand_int(rng, 1, 100);
                    pts[d][v] = {x, y};
                }
            }
            for (int i = 0; i < s - 1; ++i)
                for (int j = i + 1; j < s; ++j) {
                    std::vector<Weight> d(static_cast<std::size_t>(n) * n);
                    for (int u = 0; u < n; ++u)
                        for (int v = 0; v < n; ++v) {
                            const double dx = pts[i][u].first - pts[j][v].first;
                            const double dy = pts[i][u].second - pts[j][v].second;
                            d[static_cast<std::size_t>(u) * n + v] =
                                round_to_weight(std::sqrt(dx * dx + dy * dy));
                        }
                    inst.pair_dist_.push_back(std::move(d));
                }
            break;
        }
        case Family::Product: {
            inst.factors_.resize(s);
            for (int d = 0; d < s; ++d) {
                inst.factors_[d].resize(n);
                for (int v = 0; v < n; ++v) inst.factors_[d][v] = rand_int(rng, 1, 10);
            }
            break;
        }
    }
    if (cells <= kDenseCellLimit) inst.materialize_dense();
    return inst;
}

MapInstance MapInstance::from_dense(int s, int n, std::vector<Weight> weights, Family family,
                                    std::uint64_t seed) {
    MapInstance inst;
    inst.s_ = s;
    inst.n_ = n;
    inst.family_ = family;
    inst.seed_ = seed;
    if (weights.size() != pow_cells(n, s)) throw std::invalid_argument("bad dense tensor size");
    inst.dense_ = std::move(weights);
    return inst;
}

MapInstance MapInstance::from_pair_tables(Family family, int s, int n,
                                          std::vector<std::vector<Weight>> tables) {
    if (family != Family::Clique && family != Family::SquareRoot && family != Family::Geometric)
        throw std::invalid_argument("pair tables require a clique-like family");
    const std::size_t pairs = static_cast<std::size_t>(s) * (s - 1) / 2;
    if (tables.size() != pairs) throw std::invalid_argument("wrong number of pair tables");
    MapInstance inst;
    inst.s_ = s;
    inst.n_ = n;
    inst.family_ = family;
    inst.pair_dist_ = std::move(tables);
    if (pow_cells(n, s) <= kDenseCellLimit) inst.materialize_dense();
    return inst;
}

std::size_t MapInstance::dense_index(const int* e) const {
    std::size_t idx = 0;
    for (int j = 0; j < s_; ++j) idx = idx * static_cast<std::size_t>(n_) + e[j];
    return idx;
}

Weight MapInstance::weight_from_definition(const int* e) const {
    switch (family_) {
        case Family::Random:
            return dense_[dense_index(e)];
        case Family::Clique:
        case Family::Geometric: {
            Weight total = 0;
            std::size_t k = 0;
            for (int i = 0; i < s_ - 1; ++i)
                for (int j = i + 1; j < s_; ++j, ++k)
                    total += pair_dist_[k][static_cast<std::size_t>(e[i]) * n_ + e[j]];
            return total;
        }
        case Family::SquareRoot: {
            double total = 0;
            std::size_t k = 0;
            for (int i = 0; i < s_ - 1; ++i)
                for (int j = i + 1; j < s_; ++j, ++k) {
                    const double d =
                        static_cast<double>(pair_dist_[k][static_cast<std::size_t>(e[i]) * n_ + e[j]]);
                    total += d * d;
                }
            return round_to_weight(std::sqrt(total));
        }
        case Family::Product: {
            Weight total = 1;
            for (int j = 0; j < s_; ++j) total *= factors_[j][e[j]];
            return total;
        }
    }
    return 0;
}

void MapInstance::materialize_dense() {
    const std::size_t cells = pow_cells(n_, s_);
    dense_.resize(cells);
    std::vector<int> e(s_, 0);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        dense_[idx] = weight_from_definition(e.data());
        for (int j = s_ - 1; j >= 0; --j) {
            if (++e[j] < n_) break;
            e[j] = 0;
        }
    }
}

Weight MapInstance::weight(const int* e) const {
    if (!dense_.empty()) return dense_[dense_index(e)];
    return weight_from_definition(e);
}

Weight MapInstance::weight(const std::vector<int>& e) const { return weight(e.data()); }

std::optional<Weight> MapInstance::known_min_vector_weight() const {
    if (family_ == Family::Random) return Weight{1};
    if (family_ == Family::Product) {
        Weight total = 1;
        for (const auto& f : factors_) total *= *std::min_element(f.begin(), f.end());
        return total;
    }
    return std::nullopt;
}

void MapInstance::dump(std::ostream& out) const {
    if (dense_.empty()) throw std::runtime_error("cannot dump an oracle-only instance");
    const char magic[4] = {'M', 'A', 'P', 'B'};
    out.write(magic, 4);
    const std::int32_t s32 = s_, n32 = n_, fam = static_cast<std::int32_t>(family_);
    out.write(reinterpret_cast<const char*>(&s32), sizeof s32);
    out.write(reinterpret_cast<const char*>(&n32), sizeof n32);
    out.write(reinterpret_cast<const char*>(&fam), sizeof fam);
    out.write(reinterpret_cast<const char*>(&seed_), sizeof seed_);
    out.write(reinterpret_cast<const char*>(dense_.data()),
              static_cast<std::streamsize>(dense_.size() * sizeof(Weight)));
}

MapInstance MapInstance::load(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MAPB", 4) != 0)
        throw std::runtime_error("bad MAP dump header");
    std::int32_t s32 = 0, n32 = 0, fam = 0;
    std::uint64_t seed = 0;
    in.read(reinterpret_cast<char*>(&s32), sizeof s32);
    in.read(reinterpret_cast<char*>(&n32), sizeof n32);
    in.read(reinterpret_cast<char*>(&fam), sizeof fam);
    in.read(reinterpret_cast<char*>(&seed), sizeof seed);
    MapInstance inst;
    inst.s_ = s32;
    inst.n_ = n32;
    inst.family_ = static_cast<Family>(fam);
    inst.seed_ = seed;
    inst.dense_.resize(pow_cells(n32, s32));
    in.read(reinterpret_cast<char*>(inst.dense_.data()),
            static_cast<std::streamsize>(inst.dense_.size() * sizeof(Weight)));
    if (!in) throw std::runtime_error("truncated MAP dump");
    return inst;
}

Assignment Assignment::identity(int s, int n) {
    Assignment a;
    a.perm.assign(s - 1, std::vector<int>(n));
    for (auto& p : a.perm)
        for (int i = 0; i < n; ++i) p[i] = i;
    return a;
}

std::vector<int> Assignment::vector_at(int i) const {
    std::vector<int> e(s());
    vector_at(i, e.data());
    return e;
}

void Assignment::vector_at(int i, int* out) const {
    out[0] = i;
    for (std::size_t j = 0; j < perm.size(); ++j) out[j + 1] = perm[j][i];
}

bool Assignment::valid() const {
    for (const auto& p : perm) {
        std::vector<char> seen(p.size(), 0);
        for (int v : p) {
            if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
            seen[v] = 1;
        }
    }
    return true;
}

Weight assignment_weight(const MapInstance& inst, const Assignment& a) {
    Weight total = 0;
    std::vector<int> e(inst.s());
    for (int i = 0; i < inst.n(); ++i) {
        a.vector_at(i, e.data());
        total += inst.weight(e.data());
    }
    return total;
}

std::vector<int> canonical_coding(const Assignment& a) {
    std::vector<int> code;
    code.reserve(static_cast<std::size_t>(a.n()) * a.s());
    std::vector<int> e(a.s());
    for (int i = 0; i < a.n(); ++i) {
        a.vector_at(i, e.data());
        code.insert(code.end(), e.begin(), e.end());
    }
    return code;
}

Assignment assignment_from_vectors(int s, int n, const std::vector<std::vector<int>>& vectors) {
    Assignment a;
    a.perm.assign(s - 1, std::vector<int>(n, -1));
    for (const auto& e : vectors)
        for (int j = 1; j < s; ++j) a.perm[j - 1][e[0]] = e[j];
    return a;
}

AlphaBound pr_alpha_positive(int s, int n, int c) {
    AlphaBound out;
    out.condition_lhs = std::pow((n - 1) / std::exp(1.0), s - 1);
    out.condition_rhs = c * std::pow(2.0, 1.0 / (n - 1));
    out.applicable = n >= 3 && out.condition_lhs >= out.condition_rhs;

    // log sigma via log-sum-exp over k = 1..n-2
    const double lc = std::log(static_cast<double>(c));
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(n - 2);
    for (int k = 1; k <= n - 2; ++k) {
        const double lchoose =
            std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        const double lfall = std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0);
        const double t = lchoose + k * lc - (s - 1) * lfall;
        terms.push_back(t);
        max_term = std::max(max_term, t);
    }
    double sum = 0;
    for (double t : terms) sum += std::exp(t - max_term);
    const double log_sigma = max_term + std::log(sum);
    const double sigma = std::exp(log_sigma);
    out.probability = -std::expm1(-1.0 / (2.0 * sigma));
    return out;
}

}  // namespace combopt::map
