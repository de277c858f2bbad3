#include "wse/simulate.hpp"

#include "wse/parallel.hpp"
#include "wse/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wse {

namespace {

constexpr std::uint64_t kTrialTag = 7;

// Plain adjacency lists with cumulative weights for inverse-CDF jumps.
struct JumpTable {
    std::vector<std::vector<int>> neighbor;
    std::vector<std::vector<double>> cumulative;

    explicit JumpTable(const Graph& g) {
        const int n = g.node_count();
        neighbor.resize(n);
        cumulative.resize(n);
        const auto& adj = g.adjacency();
        for (int u = 0; u < n; ++u) {
            double running = 0.0;
            for (Eigen::SparseMatrix<double>::InnerIterator it(adj, u); it; ++it) {
                neighbor[u].push_back(static_cast<int>(it.row()));
                running += it.value();
                cumulative[u].push_back(running);
            }
        }
    }

    double strength(int u) const {
        return cumulative[u].empty() ? 0.0 : cumulative[u].back();
    }

    int sample(int u, double r01) const {
        const auto& cum = cumulative[u];
        double r = r01 * cum.back();
        auto it = std::upper_bound(cum.begin(), cum.end(), r);
        if (it == cum.end()) --it;
        return neighbor[u][static_cast<std::size_t>(it - cum.begin())];
    }
};

}  // namespace

HittingEstimate simulate_hitting(const Graph& g, const NodeWeights& w, int i, int j,
                                 std::int64_t trials, std::uint64_t seed, int threads) {
    const int n = g.node_count();
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw std::invalid_argument("node index out of range [0, " + std::to_string(n) + ")");
    if (w.size() != n)
        throw std::invalid_argument("weight vector size does not match node count");
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (!g.connected())
        throw std::invalid_argument("graph is disconnected; the walk may never arrive");

    HittingEstimate estimate;
    estimate.trials = trials;
    if (i == j) return estimate;

    JumpTable table(g);
    std::vector<double> times(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t trial) {
        auto gen = substream(seed, trial, kTrialTag);
        double elapsed = 0.0;
        int at = i;
        while (at != j) {
            elapsed += exponential(gen, w[at] / table.strength(at));
            at = table.sample(at, uniform01(gen));
        }
        times[trial] = elapsed;
    });

    double sum = 0.0;
    for (double t : times) sum += t;
    estimate.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double squares = 0.0;
        for (double t : times) squares += (t - estimate.mean) * (t - estimate.mean);
        double variance = squares / static_cast<double>(trials - 1);
        estimate.std_error = std::sqrt(variance / static_cast<double>(trials));
    }
    return estimate;
}

}  // namespace wse
