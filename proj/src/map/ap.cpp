#include "combopt/map/ap.hpp"

#include <limits>

namespace combopt::map {

// Shortest augmenting path formulation with row/column potentials.
std::vector<int> ap_solve(const std::vector<Weight>& cost, int n) {
    const Weight inf = std::numeric_limits<Weight>::max() / 4;
    std::vector<Weight> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> match(n + 1, 0);  // 1-based column -> row
    std::vector<int> way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<Weight> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            Weight delta = inf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const Weight cur =
                    cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> rho(n);
    for (int j = 1; j <= n; ++j) rho[match[j] - 1] = j - 1;
    return rho;
}

Weight ap_value(const std::vector<Weight>& cost, int n) {
    const std::vector<int> rho = ap_solve(cost, n);
    Weight total = 0;
    for (int i = 0; i < n; ++i) total += cost[static_cast<std::size_t>(i) * n + rho[i]];
    return total;
}

}  // namespace combopt::map
