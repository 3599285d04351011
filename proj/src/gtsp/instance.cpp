#include "combopt/gtsp/instance.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace combopt::gtsp {

GtspInstance::GtspInstance(std::vector<Weight> weights, std::vector<std::vector<int>> clusters)
    : weights_(std::move(weights)), clusters_(std::move(clusters)) {
    m_ = static_cast<int>(clusters_.size());
    std::size_t total = 0;
    for (const auto& c : clusters_) total += c.size();
    n_ = static_cast<int>(total);
    if (weights_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("weight matrix size does not match vertex count");
    if (m_ < 2) throw std::invalid_argument("instance needs at least two clusters");

    cluster_of_.assign(n_, -1);
    for (int c = 0; c < m_; ++c) {
        if (clusters_[c].empty()) throw std::invalid_argument("empty cluster");
        for (int v : clusters_[c]) {
            if (v < 0 || v >= n_ || cluster_of_[v] != -1)
                throw std::invalid_argument("clusters are not a proper partition");
            cluster_of_[v] = c;
        }
    }

    s_max_ = 0;
    gamma_ = std::numeric_limits<int>::max();
    smallest_cluster_ = 0;
    for (int c = 0; c < m_; ++c) {
        const int sz = cluster_size(c);
        s_max_ = std::max(s_max_, sz);
        if (sz < gamma_) {
            gamma_ = sz;
            smallest_cluster_ = c;
        }
    }

    symmetric_ = true;
    for (int x = 0; x < n_ && symmetric_; ++x)
        for (int y = x + 1; y < n_; ++y)
            if (weight(x, y) != weight(y, x)) {
                symmetric_ = false;
                break;
            }
    has_sentinels_ = std::any_of(weights_.begin(), weights_.end(),
                                 [](Weight w) { return is_forbidden(w); });
    lazy_ = std::make_unique<LazyCaches>();
}

void GtspInstance::build_pair_caches() const {
    auto& L = *lazy_;
    L.pair_min.assign(static_cast<std::size_t>(m_) * m_, kInfiniteWeight);
    L.pair_max.assign(static_cast<std::size_t>(m_) * m_, std::numeric_limits<Weight>::min());
    L.vmin_out.assign(static_cast<std::size_t>(n_) * m_, kInfiniteWeight);
    L.vmax_out.assign(static_cast<std::size_t>(n_) * m_, std::numeric_limits<Weight>::min());
    L.vmin_in.assign(static_cast<std::size_t>(m_) * n_, kInfiniteWeight);
    L.vmax_in.assign(static_cast<std::size_t>(m_) * n_, std::numeric_limits<Weight>::min());
    for (int x = 0; x < n_; ++x) {
        const int X = cluster_of_[x];
        for (int y = 0; y < n_; ++y) {
            const int Y = cluster_of_[y];
            if (X == Y) continue;
            const Weight w = weight(x, y);
            auto& pmin = L.pair_min[static_cast<std::size_t>(X) * m_ + Y];
            auto& pmax = L.pair_max[static_cast<std::size_t>(X) * m_ + Y];
            pmin = std::min(pmin, w);
            pmax = std::max(pmax, w);
            auto& vmo = L.vmin_out[static_cast<std::size_t>(x) * m_ + Y];
            auto& vxo = L.vmax_out[static_cast<std::size_t>(x) * m_ + Y];
            vmo = std::min(vmo, w);
            vxo = std::max(vxo, w);
            auto& vmi = L.vmin_in[static_cast<std::size_t>(X) * n_ + y];
            auto& vxi = L.vmax_in[static_cast<std::size_t>(X) * n_ + y];
            vmi = std::min(vmi, w);
            vxi = std::max(vxi, w);
        }
    }
}

void GtspInstance::build_blocks() const {
    auto& L = *lazy_;
    L.block_offset.assign(static_cast<std::size_t>(m_) * m_, 0);
    std::size_t total = 0;
    for (int X = 0; X < m_; ++X)
        for (int Y = 0; Y < m_; ++Y) {
            if (X == Y) continue;
            L.block_offset[static_cast<std::size_t>(X) * m_ + Y] = total;
            total += static_cast<std::size_t>(cluster_size(X)) * cluster_size(Y);
        }
    L.block_data.resize(total);
    for (int X = 0; X < m_; ++X)
        for (int Y = 0; Y < m_; ++Y) {
            if (X == Y) continue;
            Weight* block = L.block_data.data() + L.block_offset[static_cast<std::size_t>(X) * m_ + Y];
            const auto& xs = clusters_[X];
            const auto& ys = clusters_[Y];
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < ys.size(); ++j)
                    block[i * ys.size() + j] = weight(xs[i], ys[j]);
        }
}

std::span<const Weight> GtspInstance::pair_block(int X, int Y) const {
    std::call_once(lazy_->block_once, [this] { build_blocks(); });
    const std::size_t len = static_cast<std::size_t>(cluster_size(X)) * cluster_size(Y);
    return {lazy_->block_data.data() + lazy_->block_offset[static_cast<std::size_t>(X) * m_ + Y],
            len};
}

Weight GtspInstance::pair_min(int X, int Y) const {
    std::call_once(lazy_->pair_once, [this] { build_pair_caches(); });
    return lazy_->pair_min[static_cast<std::size_t>(X) * m_ + Y];
}
Weight GtspInstance::pair_max(int X, int Y) const {
    std::call_once(lazy_->pair_once, [this] { build_pair_caches(); });
    return lazy_->pair_max[static_cast<std::size_t>(X) * m_ + Y];
}
Weight GtspInstance::vert_min_out(int x, int Y) const {
    std::call_once(lazy_->pair_once, [this] { build_pair_caches(); });
    return lazy_->vmin_out[static_cast<std::size_t>(x) * m_ + Y];
}
Weight GtspInstance::vert_max_out(int x, int Y) const {
    std::call_once(lazy_->pair_once, [this] { build_pair_caches(); });
    return lazy_->vmax_out[static_cast<std::size_t>(x) * m_ + Y];
}
Weight GtspInstance::vert_min_in(int Y, int x) const {
    std::call_once(lazy_->pair_once, [this] { build_pair_caches(); });
    return lazy_->vmin_in[static_cast<std::size_t>(Y) * n_ + x];
}
Weight GtspInstance::vert_max_in(int Y, int x) const {
    std::call_once(lazy_->pair_once, [this] { build_pair_caches(); });
    return lazy_->vmax_in[static_cast<std::size_t>(Y) * n_ + x];
}

Tour tour_from_order(const std::vector<int>& order, const std::vector<int>& vertex_of) {
    const int m = static_cast<int>(order.size());
    Tour t;
    t.next.assign(m, -1);
    t.prev.assign(m, -1);
    t.vertices = vertex_of;
    for (int i = 0; i < m; ++i) {
        const int c = order[i];
        const int d = order[(i + 1) % m];
        t.next[c] = d;
        t.prev[d] = c;
    }
    return t;
}

std::vector<int> tour_order(const Tour& t, int start) {
    std::vector<int> order;
    order.reserve(t.next.size());
    int c = start;
    do {
        order.push_back(c);
        c = t.next[c];
    } while (c != start);
    return order;
}

std::vector<int> tour_vertex_sequence(const GtspInstance& inst, const Tour& t, int start) {
    (void)inst;
    std::vector<int> seq;
    seq.reserve(t.next.size());
    int c = start;
    do {
        seq.push_back(t.vertices[c]);
        c = t.next[c];
    } while (c != start);
    return seq;
}

void validate_tour(const GtspInstance& inst, const Tour& t) {
    const int m = inst.m();
    if (t.m() != m || static_cast<int>(t.prev.size()) != m ||
        static_cast<int>(t.vertices.size()) != m)
        throw std::invalid_argument("tour arrays do not match the cluster count");
    for (int c = 0; c < m; ++c) {
        if (t.prev[t.next[c]] != c) throw std::invalid_argument("next/prev are not inverse");
        if (inst.cluster_of(t.vertices[c]) != c)
            throw std::invalid_argument("tour vertex outside its cluster");
    }
    int c = 0, count = 0;
    do {
        c = t.next[c];
        ++count;
    } while (c != 0 && count <= m);
    if (count != m) throw std::invalid_argument("tour is not a single m-cycle");
}

Weight tour_weight(const GtspInstance& inst, const Tour& t) {
    Weight total = 0;
    for (int c = 0; c < inst.m(); ++c)
        total = wadd(total, inst.weight(t.vertices[c], t.vertices[t.next[c]]));
    return total;
}

Tour turn(const GtspInstance& inst, const Tour& t, int x, int y) {
    const int m = inst.m();
    if (x < 0 || y >= m || y < x + 2 || (x == 0 && y == m - 1))
        throw InvalidMoveError("degenerate 2-opt span");
    std::vector<int> order = tour_order(t, 0);
    std::reverse(order.begin() + x + 1, order.begin() + y + 1);
    return tour_from_order(order, t.vertices);
}

Weight turn_delta(const GtspInstance& inst, const Tour& t, int x, int y) {
    const int m = inst.m();
    if (x < 0 || y >= m || y < x + 2 || (x == 0 && y == m - 1))
        throw InvalidMoveError("degenerate 2-opt span");
    const std::vector<int> order = tour_order(t, 0);
    const int vx = t.vertices[order[x]];
    const int vx1 = t.vertices[order[x + 1]];
    const int vy = t.vertices[order[y]];
    const int vy1 = t.vertices[order[(y + 1) % m]];
    return wadd(inst.weight(vx, vy), inst.weight(vx1, vy1)) - inst.weight(vx, vx1) -
           inst.weight(vy, vy1);
}

GtspInstance read_native(std::istream& in) {
    int n = 0, m = 0, sym = 0;
    if (!(in >> n >> m >> sym)) throw std::runtime_error("native format: bad header");
    std::vector<std::vector<int>> clusters(m);
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    for (int c = 0; c < m; ++c) {
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("native format: missing cluster line");
        std::istringstream ls(line);
        int v;
        while (ls >> v) clusters[c].push_back(v);
    }
    std::vector<Weight> w(static_cast<std::size_t>(n) * n);
    for (auto& x : w)
        if (!(in >> x)) throw std::runtime_error("native format: truncated weight matrix");
    return GtspInstance(std::move(w), std::move(clusters));
}

void write_native(std::ostream& out, const GtspInstance& inst) {
    out << inst.n() << '\n' << inst.m() << '\n' << (inst.symmetric() ? 1 : 0) << '\n';
    for (int c = 0; c < inst.m(); ++c) {
        const auto& cl = inst.cluster(c);
        for (std::size_t i = 0; i < cl.size(); ++i) out << cl[i] << (i + 1 < cl.size() ? ' ' : '\n');
    }
    for (int x = 0; x < inst.n(); ++x)
        for (int y = 0; y < inst.n(); ++y)
            out << inst.weight(x, y) << (y + 1 < inst.n() ? ' ' : '\n');
}

}  // namespace combopt::gtsp
