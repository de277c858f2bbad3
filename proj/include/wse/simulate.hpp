#pragma once

#include "wse/graph.hpp"

#include <cstdint>

namespace wse {

struct HittingEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(trials)
    std::int64_t trials = 0;
};

/// Monte Carlo estimate of the mean hitting time of j from i, by direct
/// simulation of the continuous-time walk: hold at u for an exponential time
/// with mean w_u / d_u, then jump to a neighbor with probability A_uk / d_u.
///
/// Deliberately shares no linear algebra with the exact solvers so the two
/// act as independent checks on each other. Deterministic for a fixed seed
/// and independent of thread count: trial t draws from its own RNG stream.
HittingEstimate simulate_hitting(const Graph& g, const NodeWeights& w, int i, int j,
                                 std::int64_t trials, std::uint64_t seed,
                                 int threads = 1);

}  // namespace wse
