#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "oneproj/domains.hpp"
#include "oneproj/environment.hpp"
#include "oneproj/vector_ops.hpp"

namespace oneproj {

// Dynamic-regret summary against an explicit comparator sequence.
struct RegretReport {
    std::vector<double> cumulative_loss; // of the decisions, per round
    double dynamic_regret = 0.0;         // sum f_t(x_t) - sum f_t(u_t)
    double path_length = 0.0;            // P_T = sum ||u_t - u_{t-1}||_2
    double comparator_loss = 0.0;        // F_T = sum f_t(u_t)
};

RegretReport dynamic_regret(
    std::span<const Vec> decisions, std::span<const Vec> comparators,
    const std::function<double(std::int64_t, const Vec&)>& loss_at);

// Worst interval found by the brute-force scan.
struct WorstInterval {
    std::int64_t first = 0; // 1-based, inclusive
    std::int64_t last = 0;
    double regret = 0.0;
};

struct AdaptiveRegretResult {
    WorstInterval worst;
    std::int64_t min_len = 0;
    // worst_by_length[len - min_len] = max regret over intervals of that
    // length (lengths min_len .. T).
    std::vector<double> worst_by_length;
};

// Enumerates every interval [r, s] with s - r + 1 >= min_len and solves
// min_{u in X} sum_t f_t(u) for the square losses of the stream by
// projected gradient descent (warm-started along s) to objective tolerance
// 1e-8 and projected-gradient residual 1e-6. Guarded to T <= 2000.
AdaptiveRegretResult adaptive_regret_bruteforce(std::span<const Vec> decisions,
                                                std::span<const Sample> stream,
                                                const FeasibleDomain& domain,
                                                std::int64_t min_len);

// Constrained minimizer of sum_{t in [first, last]} f_t(u) over the domain
// (same inner solver as the brute-force scan); exposed for tests.
std::pair<Vec, double> minimize_interval_loss(std::span<const Sample> stream,
                                              std::int64_t first,
                                              std::int64_t last,
                                              const FeasibleDomain& domain);

} // namespace oneproj
