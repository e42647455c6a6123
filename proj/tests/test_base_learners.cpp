#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oneproj/base_learners.hpp"
#include "oneproj/environment.hpp"

using namespace oneproj;

TEST_CASE("ogd step: interior update, rescale, zero step") {
    OgdLearner interior(2, 1.0, 1.0);
    // start at (0.5, 0) via one crafted step from the origin
    interior.step({-0.5, 0.0});
    CHECK(interior.decision() == Vec{0.5, 0.0});
    interior.step({1.0, 0.0});
    CHECK(interior.decision() == Vec{-0.5, 0.0});

    OgdLearner edge(2, 1.0, 1.0);
    edge.step({-1.0, 0.0}); // to (1,0)
    CHECK(edge.decision() == Vec{1.0, 0.0});
    edge.step({-1.0, 0.0}); // hat y = (2,0) -> rescaled to (1,0)
    CHECK(edge.decision()[0] == doctest::Approx(1.0).epsilon(1e-15));

    OgdLearner frozen(2, 0.0, 1.0);
    frozen.step({3.0, -4.0});
    CHECK(frozen.decision() == Vec{0.0, 0.0});
}

TEST_CASE("sogd step sizes follow the self-confident schedule") {
    // Oracle: eta = D / sqrt(delta + sum ||g||^2), round's gradient included
    // before the step size is computed.
    const double d_param = 1.0;
    SogdLearner sogd(2, d_param, 1.0);
    sogd.step({1.0, 0.0}); // history {1}
    CHECK(sogd.current_step_size() == doctest::Approx(d_param / std::sqrt(2.0)).epsilon(1e-15));
    sogd.step({std::sqrt(3.0), 0.0}); // history {1, 3}
    CHECK(sogd.current_step_size() == doctest::Approx(d_param / std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("sogd with zero gradients never moves") {
    SogdLearner sogd(3, 2.0, 1.0);
    for (int i = 0; i < 50; ++i) sogd.step({0.0, 0.0, 0.0});
    CHECK(sogd.decision() == Vec{0.0, 0.0, 0.0});
}

TEST_CASE("feasibility, monotone steps and stability") {
    Rng rng(99);
    const double radius = 1.5;
    SogdLearner sogd(3, radius, 1.0);
    OgdLearner ogd(3, 0.2, radius);
    double last_eta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2000; ++i) {
        const Vec grad = rng.uniform_ball(3, 4.0);

        const Vec before_sogd = sogd.decision();
        sogd.step(grad);
        CHECK(norm2(sogd.decision()) <= radius + 1e-12);
        // Step sizes non-increasing.
        CHECK(sogd.current_step_size() <= last_eta + 1e-15);
        last_eta = sogd.current_step_size();

        const Vec before_ogd = ogd.decision();
        ogd.step(grad);
        CHECK(norm2(ogd.decision()) <= radius + 1e-12);
        // Stability: ||y_{t+1} - y_t|| <= eta * ||grad||.
        CHECK(dist2(ogd.decision(), before_ogd) <= 0.2 * norm2(grad) + 1e-12);
        CHECK(dist2(sogd.decision(), before_sogd) <= last_eta * norm2(grad) + 1e-12);
    }
}

TEST_CASE("ogd replay is deterministic") {
    Rng rng(123);
    std::vector<Vec> grads;
    for (int i = 0; i < 100; ++i) grads.push_back(rng.uniform_ball(2, 3.0));

    OgdLearner a(2, 0.05, 1.0), b(2, 0.05, 1.0);
    for (const Vec& g : grads) {
        a.step(g);
        b.step(g);
    }
    CHECK(a.decision() == b.decision()); // bitwise
}

TEST_CASE("sogd numerator multiplier rescales the schedule") {
    SogdLearner full(2, 2.0, 1.0, 1.0);
    SogdLearner half(2, 2.0, 1.0, 0.5);
    full.step({1.0, 0.0});
    half.step({1.0, 0.0});
    CHECK(half.current_step_size() == doctest::Approx(0.5 * full.current_step_size()));
}
