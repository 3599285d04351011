#include "combopt/gtsp/generate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace combopt::gtsp {

namespace {

// Farthest-point seeding and nearest-center assignment over an abstract
// distance.  dist(i, j) must be symmetric and non-negative.
template <typename Dist>
std::vector<std::vector<int>> cluster_impl(int n, int m, std::uint64_t seed, Dist dist) {
    if (m < 2 || m > n) throw std::invalid_argument("cluster count out of range");
    Rng rng(seed);

    std::vector<int> centers;
    centers.reserve(m);
    centers.push_back(rand_int(rng, 0, n - 1));
    std::vector<double> to_nearest(n, std::numeric_limits<double>::infinity());
    for (int k = 1; k < m; ++k) {
        int best = -1;
        double best_d = -1.0;
        for (int v = 0; v < n; ++v) {
            to_nearest[v] = std::min(to_nearest[v], dist(v, centers.back()));
            if (to_nearest[v] > best_d) {
                best_d = to_nearest[v];
                best = v;
            }
        }
        centers.push_back(best);
    }

    std::vector<std::vector<int>> clusters(m);
    std::vector<int> assignment(n);
    for (int v = 0; v < n; ++v) {
        int best = 0;
        double best_d = dist(v, centers[0]);
        for (int k = 1; k < m; ++k) {
            const double d = dist(v, centers[k]);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        assignment[v] = best;
        clusters[best].push_back(v);
    }

    // Repair: move the globally farthest-from-center vertex out of the largest
    // cluster into each empty one.
    for (int k = 0; k < m; ++k) {
        while (clusters[k].empty()) {
            int donor = 0;
            for (int j = 1; j < m; ++j)
                if (clusters[j].size() > clusters[donor].size()) donor = j;
            int steal = clusters[donor][0];
            double worst = -1.0;
            for (int v : clusters[donor]) {
                const double d = dist(v, centers[donor]);
                if (d > worst) {
                    worst = d;
                    steal = v;
                }
            }
            auto& dc = clusters[donor];
            dc.erase(std::find(dc.begin(), dc.end(), steal));
            clusters[k].push_back(steal);
            assignment[steal] = k;
        }
    }
    for (auto& c : clusters) std::sort(c.begin(), c.end());
    return clusters;
}

}  // namespace

std::vector<std::vector<int>> cluster_points(const std::vector<std::pair<double, double>>& points,
                                             int m, std::uint64_t seed) {
    const int n = static_cast<int>(points.size());
    auto dist = [&points](int a, int b) {
        const double dx = points[a].first - points[b].first;
        const double dy = points[a].second - points[b].second;
        return std::sqrt(dx * dx + dy * dy);
    };
    return cluster_impl(n, m, seed, dist);
}

std::vector<std::vector<int>> cluster_matrix(const std::vector<Weight>& weights, int n, int m,
                                             std::uint64_t seed) {
    auto dist = [&weights, n](int a, int b) {
        const Weight f = weights[static_cast<std::size_t>(a) * n + b];
        const Weight r = weights[static_cast<std::size_t>(b) * n + a];
        return 0.5 * (static_cast<double>(f) + static_cast<double>(r));
    };
    return cluster_impl(n, m, seed, dist);
}

GtspInstance generate_clustered(const std::vector<std::pair<double, double>>& points, int m,
                                std::uint64_t seed) {
    const int n = static_cast<int>(points.size());
    if (m == 0) m = default_cluster_count(n);
    if (m < 3 || m > n) throw std::invalid_argument("cluster count out of range");
    auto clusters = cluster_points(points, m, seed);
    std::vector<Weight> w(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double dx = points[i].first - points[j].first;
            const double dy = points[i].second - points[j].second;
            if (i != j)
                w[static_cast<std::size_t>(i) * n + j] =
                    static_cast<Weight>(std::sqrt(dx * dx + dy * dy) + 0.5);
        }
    return GtspInstance(std::move(w), std::move(clusters));
}

GtspInstance generate_clustered(const std::vector<Weight>& weights, int n, int m,
                                std::uint64_t seed) {
    if (m == 0) m = default_cluster_count(n);
    if (m < 3 || m > n) throw std::invalid_argument("cluster count out of range");
    auto clusters = cluster_matrix(weights, n, m, seed);
    return GtspInstance(std::vector<Weight>(weights), std::move(clusters));
}

}  // namespace combopt::gtsp
