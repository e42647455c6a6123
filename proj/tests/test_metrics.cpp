#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oneproj/metrics.hpp"

using namespace oneproj;

namespace {

// Fine-grid oracle for the constrained interval minimum over a 2-d ball:
// grid scan, then local refinement around the best cell.
double grid_interval_minimum(std::span<const Sample> stream, std::int64_t first,
                             std::int64_t last, double radius) {
    const auto objective = [&](double a, double b) {
        double s = 0.0;
        for (std::int64_t t = first; t <= last; ++t)
            s += loss_value(stream[static_cast<std::size_t>(t - 1)], {a, b});
        return s;
    };
    double best = std::numeric_limits<double>::infinity();
    double ba = 0.0, bb = 0.0;
    double lo_a = -radius, hi_a = radius, lo_b = -radius, hi_b = radius;
    for (int refine = 0; refine < 8; ++refine) {
        for (int i = 0; i <= 200; ++i) {
            for (int j = 0; j <= 200; ++j) {
                const double a = lo_a + (hi_a - lo_a) * i / 200.0;
                const double b = lo_b + (hi_b - lo_b) * j / 200.0;
                if (a * a + b * b > radius * radius) continue;
                const double v = objective(a, b);
                if (v < best) {
                    best = v;
                    ba = a;
                    bb = b;
                }
            }
        }
        const double wa = (hi_a - lo_a) / 200.0, wb = (hi_b - lo_b) / 200.0;
        lo_a = ba - wa;
        hi_a = ba + wa;
        lo_b = bb - wb;
        hi_b = bb + wb;
    }
    return best;
}

} // namespace

TEST_CASE("dynamic regret: zero against itself, hand trace") {
    std::vector<Sample> stream(3);
    stream[0] = {{1.0, 0.0}, 1.0, {1.0, 0.0}};
    stream[1] = {{0.0, 1.0}, 2.0, {0.0, 2.0}};
    stream[2] = {{1.0, 1.0}, 0.0, {0.0, 0.0}};
    const auto loss_at = [&](std::int64_t t, const Vec& w) {
        return loss_value(stream[static_cast<std::size_t>(t - 1)], w);
    };

    const std::vector<Vec> points{{0.5, 0.5}, {1.0, -1.0}, {0.0, 0.0}};
    const auto self = dynamic_regret(points, points, loss_at);
    CHECK(self.dynamic_regret == 0.0);

    // Constant comparators: path length zero.
    const std::vector<Vec> constant{{0.2, 0.1}, {0.2, 0.1}, {0.2, 0.1}};
    const auto flat = dynamic_regret(points, constant, loss_at);
    CHECK(flat.path_length == 0.0);

    // Hand-computed sums: decisions (0,0),(0,0),(0,0); comparators as below.
    const std::vector<Vec> zeros3(3, Vec{0.0, 0.0});
    const std::vector<Vec> comps{{1.0, 0.0}, {0.0, 1.0}, {1.0, -1.0}};
    // losses of zeros: 0.5*1 + 0.5*4 + 0 = 2.5
    // losses of comps: 0 + 0.5*(1-2)^2 + 0.5*(0-0)^2 = 0.5
    // path length: ||(0,1)-(1,0)|| + ||(1,-1)-(0,1)|| = sqrt2 + sqrt5
    const auto report = dynamic_regret(zeros3, comps, loss_at);
    CHECK(report.cumulative_loss.back() == doctest::Approx(2.5));
    CHECK(report.comparator_loss == doctest::Approx(0.5));
    CHECK(report.dynamic_regret == doctest::Approx(2.0));
    CHECK(report.path_length ==
          doctest::Approx(std::sqrt(2.0) + std::sqrt(5.0)).epsilon(1e-12));

    const std::vector<Vec> two{{0.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(dynamic_regret(points, two, loss_at), UsageError);
}

TEST_CASE("interval minimizer: pinned quadratic with interior optimum") {
    // Two samples with features e1, e2 and labels 1, -2: the unconstrained
    // minimum (1, -2) lies inside a radius-3 ball, objective 0.
    std::vector<Sample> stream(2);
    stream[0] = {{1.0, 0.0}, 1.0, {}};
    stream[1] = {{0.0, 1.0}, -2.0, {}};
    const auto domain = FeasibleDomain::ball(3.0, 2);
    const auto [u, value] = minimize_interval_loss(stream, 1, 2, domain);
    CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(u[1] == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(value == doctest::Approx(0.0).epsilon(1e-10));

    // Same data on a radius-1 ball: constrained optimum on the boundary;
    // compare against the grid oracle.
    const auto small = FeasibleDomain::ball(1.0, 2);
    const auto [u2, v2] = minimize_interval_loss(stream, 1, 2, small);
    CHECK(norm2(u2) == doctest::Approx(1.0).epsilon(1e-6));
    const double oracle = grid_interval_minimum(stream, 1, 2, 1.0);
    CHECK(v2 == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("brute-force adaptive regret on a hand-built T=4 instance") {
    std::vector<Sample> stream(4);
    stream[0] = {{1.0, 0.0}, 0.5, {}};
    stream[1] = {{0.0, 1.0}, -0.5, {}};
    stream[2] = {{1.0, 1.0}, 1.0, {}};
    stream[3] = {{1.0, -1.0}, 0.0, {}};
    const auto domain = FeasibleDomain::ball(1.0, 2);

    // Decisions fixed at the origin.
    const std::vector<Vec> decisions(4, Vec{0.0, 0.0});
    const auto result = adaptive_regret_bruteforce(decisions, stream, domain, 2);

    // Exhaustive oracle over all intervals of length >= 2 with the grid
    // solver for the inner minimum.
    double worst = -std::numeric_limits<double>::infinity();
    for (std::int64_t r = 1; r <= 4; ++r) {
        for (std::int64_t s = r + 1; s <= 4; ++s) {
            double realized = 0.0;
            for (std::int64_t t = r; t <= s; ++t)
                realized += loss_value(stream[static_cast<std::size_t>(t - 1)],
                                       {0.0, 0.0});
            const double best = grid_interval_minimum(stream, r, s, 1.0);
            worst = std::max(worst, realized - best);
        }
    }
    CHECK(result.worst.regret == doctest::Approx(worst).epsilon(1e-5));
}

TEST_CASE("adaptive regret of the constrained per-round minimizer is zero") {
    // Identical quadratic every round; decisions at the constrained
    // minimizer make every interval regret zero (within solver tolerance).
    std::vector<Sample> stream(6);
    for (auto& s : stream) s = {{1.0, 1.0}, 5.0, {}};
    const auto domain = FeasibleDomain::ball(1.0, 2);
    const auto [u_star, v_star] = minimize_interval_loss(stream, 1, 1, domain);
    const std::vector<Vec> decisions(6, u_star);
    const auto result = adaptive_regret_bruteforce(decisions, stream, domain, 1);
    CHECK(std::abs(result.worst.regret) <= 1e-6 * (1.0 + std::abs(v_star)));

    // Adaptive regret over [1, T] equals static regret.
    const auto full = minimize_interval_loss(stream, 1, 6, domain);
    double realized = 0.0;
    for (std::size_t t = 0; t < 6; ++t) realized += loss_value(stream[t], u_star);
    const double static_regret = realized - full.second;
    const auto only_full = adaptive_regret_bruteforce(decisions, stream, domain, 6);
    CHECK(only_full.worst.regret == doctest::Approx(static_regret).epsilon(1e-8));
}

TEST_CASE("oversize horizons are rejected") {
    std::vector<Sample> stream(2001);
    for (auto& s : stream) s = {{1.0}, 0.0, {}};
    const std::vector<Vec> decisions(2001, Vec{0.0});
    const auto domain = FeasibleDomain::ball(1.0, 1);
    CHECK_THROWS_AS(adaptive_regret_bruteforce(decisions, stream, domain, 10),
                    UsageError);
}

TEST_CASE("projected-gradient certificate on random interval problems") {
    Rng rng(77);
    std::vector<Sample> stream;
    for (int t = 0; t < 40; ++t) {
        Sample s;
        s.feature = rng.uniform_ball(3, 2.0);
        s.label = rng.uniform(-2.0, 2.0);
        stream.push_back(std::move(s));
    }
    const auto domain = FeasibleDomain::ellipsoid({1.0, 2.0, 4.0}, 2.0);
    for (int k = 0; k < 20; ++k) {
        const auto first = static_cast<std::int64_t>(rng.next_u64() % 30) + 1;
        const auto last = std::min<std::int64_t>(40, first + 5 + static_cast<std::int64_t>(rng.next_u64() % 5));
        const auto [u, value] = minimize_interval_loss(stream, first, last, domain);
        // First-order certificate: moving along the projected gradient step
        // does not improve the objective beyond tolerance.
        Vec grad(3, 0.0);
        for (std::int64_t t = first; t <= last; ++t)
            grad = add_scaled(grad, 1.0,
                              loss_gradient(stream[static_cast<std::size_t>(t - 1)], u));
        const double step = 1e-3;
        const Vec moved = domain.project(add_scaled(u, -step, grad));
        CHECK(dist2(moved, u) / step <= 2e-5 * (1.0 + norm2(grad)));
    }
}
