#include "oneproj/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oneproj {

RegretReport dynamic_regret(
    std::span<const Vec> decisions, std::span<const Vec> comparators,
    const std::function<double(std::int64_t, const Vec&)>& loss_at) {
    if (decisions.size() != comparators.size())
        throw UsageError("dynamic_regret: decision and comparator lengths differ");
    RegretReport report;
    report.cumulative_loss.reserve(decisions.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        const std::int64_t t = static_cast<std::int64_t>(i) + 1;
        cum += loss_at(t, decisions[i]);
        report.cumulative_loss.push_back(cum);
        report.comparator_loss += loss_at(t, comparators[i]);
        if (i > 0) report.path_length += dist2(comparators[i], comparators[i - 1]);
    }
    report.dynamic_regret = cum - report.comparator_loss;
    return report;
}

namespace {

// Quadratic accumulator for sum of square losses over an interval:
//   sum_t (x_t' u - y_t)^2 / 2 = u'Au/2 - b'u + c.
struct QuadForm {
    std::size_t d = 0;
    std::vector<double> a; // row-major symmetric d x d
    Vec b;
    double c = 0.0;
    double trace = 0.0;

    explicit QuadForm(std::size_t dim) : d(dim), a(dim * dim, 0.0), b(dim, 0.0) {}

    void add_sample(const Sample& s) {
        for (std::size_t i = 0; i < d; ++i) {
            const double xi = s.feature[i];
            for (std::size_t j = 0; j < d; ++j) a[i * d + j] += xi * s.feature[j];
            b[i] += s.label * xi;
            trace += xi * xi;
        }
        c += 0.5 * s.label * s.label;
    }

    Vec gradient(const Vec& u) const {
        Vec g(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += a[i * d + j] * u[j];
            g[i] = s - b[i];
        }
        return g;
    }

    double value(const Vec& u) const {
        double quad = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += a[i * d + j] * u[j];
            quad += u[i] * s;
        }
        return 0.5 * quad - dot(b, u) + c;
    }

    // Largest eigenvalue estimate by warm-started power iteration.
    double lambda_max(Vec& eigvec, int iters) const {
        double lam = 0.0;
        for (int k = 0; k < iters; ++k) {
            Vec w(d, 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) s += a[i * d + j] * eigvec[j];
                w[i] = s;
            }
            const double n = norm2(w);
            if (n == 0.0) return std::max(trace, 1e-12);
            lam = n;
            for (std::size_t i = 0; i < d; ++i) eigvec[i] = w[i] / n;
        }
        return std::max(lam, 1e-12);
    }
};

// Projected gradient descent on the quadratic over the domain; warm start
// from `u`. Certifies a projected-gradient residual <= residual_tol.
double solve_quadratic(const QuadForm& q, const FeasibleDomain& domain, Vec& u,
                       double step, double objective_tol, double residual_tol) {
    double prev = q.value(u);
    for (int it = 0; it < 20000; ++it) {
        const Vec g = q.gradient(u);
        Vec next = domain.project(add_scaled(u, -step, g));
        const double residual = dist2(next, u) / step;
        u = std::move(next);
        const double val = q.value(u);
        if (residual <= residual_tol && std::abs(prev - val) <= objective_tol) return val;
        prev = val;
    }
    return prev;
}

} // namespace

std::pair<Vec, double> minimize_interval_loss(std::span<const Sample> stream,
                                              std::int64_t first,
                                              std::int64_t last,
                                              const FeasibleDomain& domain) {
    if (first < 1 || last > static_cast<std::int64_t>(stream.size()) || first > last)
        throw UsageError("minimize_interval_loss: bad interval");
    QuadForm q(domain.dim());
    for (std::int64_t t = first; t <= last; ++t)
        q.add_sample(stream[static_cast<std::size_t>(t - 1)]);
    Vec eig(domain.dim(), 1.0 / std::sqrt(static_cast<double>(domain.dim())));
    const double lam = q.lambda_max(eig, 50);
    Vec u = zeros(domain.dim());
    const double val = solve_quadratic(q, domain, u, 0.99 / lam, 1e-8, 1e-6);
    return {u, val};
}

AdaptiveRegretResult adaptive_regret_bruteforce(std::span<const Vec> decisions,
                                                std::span<const Sample> stream,
                                                const FeasibleDomain& domain,
                                                std::int64_t min_len) {
    const std::int64_t horizon = static_cast<std::int64_t>(stream.size());
    if (decisions.size() != stream.size())
        throw UsageError("adaptive_regret_bruteforce: decision count must match stream");
    if (horizon > 2000)
        throw UsageError("adaptive_regret_bruteforce: interval enumeration guarded to T <= 2000");
    if (min_len < 1 || min_len > horizon)
        throw UsageError("adaptive_regret_bruteforce: bad min_len");

    // Prefix sums of the realized losses.
    std::vector<double> prefix(static_cast<std::size_t>(horizon) + 1, 0.0);
    for (std::int64_t t = 1; t <= horizon; ++t)
        prefix[static_cast<std::size_t>(t)] =
            prefix[static_cast<std::size_t>(t - 1)] +
            loss_value(stream[static_cast<std::size_t>(t - 1)],
                       decisions[static_cast<std::size_t>(t - 1)]);

    AdaptiveRegretResult result;
    result.min_len = min_len;
    result.worst_by_length.assign(static_cast<std::size_t>(horizon - min_len + 1),
                                  -std::numeric_limits<double>::infinity());
    result.worst.regret = -std::numeric_limits<double>::infinity();

    const std::size_t d = domain.dim();
    for (std::int64_t r = 1; r + min_len - 1 <= horizon; ++r) {
        QuadForm q(d);
        Vec u = zeros(d);
        Vec eig(d, 1.0 / std::sqrt(static_cast<double>(d)));
        for (std::int64_t s = r; s <= horizon; ++s) {
            q.add_sample(stream[static_cast<std::size_t>(s - 1)]);
            const std::int64_t len = s - r + 1;
            if (len < min_len) continue;
            // Warm-started along s: a few power iterations keep the step
            // size valid as the quadratic grows.
            const double lam = q.lambda_max(eig, 3);
            const double best = solve_quadratic(q, domain, u, 0.99 / lam, 1e-8, 1e-6);
            const double regret = (prefix[static_cast<std::size_t>(s)] -
                                   prefix[static_cast<std::size_t>(r - 1)]) -
                                  best;
            double& slot = result.worst_by_length[static_cast<std::size_t>(len - min_len)];
            slot = std::max(slot, regret);
            if (regret > result.worst.regret) result.worst = {r, s, regret};
        }
    }
    return result;
}

} // namespace oneproj
