#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "oneproj/counters.hpp"
#include "oneproj/domains.hpp"
#include "oneproj/problem_constants.hpp"
#include "oneproj/vector_ops.hpp"

namespace oneproj {

// Deterministic generator (splitmix64 core): identical streams for a given
// seed regardless of platform or standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform01(); // [0, 1)
    double uniform(double lo, double hi);
    double normal(); // standard normal via Box-Muller

    Vec uniform_direction(std::size_t dim);
    Vec uniform_ball(std::size_t dim, double radius);

private:
    std::uint64_t state_;
};

struct DriftConfig {
    enum class Kind { Piecewise, RandomWalk };
    Kind kind = Kind::Piecewise;
    std::int64_t stages = 1;      // piecewise: number of equal blocks
    double step_scale = 1.0;      // random walk: step length = step_scale * D / T
};

struct EnvironmentConfig {
    std::int64_t horizon = 0;
    std::size_t dim = 0;
    FeasibleDomain domain = FeasibleDomain::ball(1.0, 1);
    DriftConfig drift;
    double noise_max = 0.1;
    std::uint64_t seed = 1;

    void validate() const;
};

// One round of the online regression stream: feature, noisy label, and the
// ground-truth model that produced the label.
struct Sample {
    Vec feature;
    double label = 0.0;
    Vec w_star;
};

// Features are uniform in the ball of diameter D (the domain's diameter);
// labels are feature' w* + noise with noise uniform on [0, noise_max].
// Piecewise drift holds w* constant within each of `stages` equal blocks;
// random-walk drift moves w* each round by a uniformly-directed step of
// length step_scale * D / T, re-projected onto the domain. Fully
// determined by the seed.
std::vector<Sample> generate_stream(const EnvironmentConfig& config);

// Square loss: value = (feature' w - label)^2 / 2, gradient =
// (feature' w - label) * feature.
double loss_value(const Sample& s, const Vec& w);
Vec loss_gradient(const Sample& s, const Vec& w);

// The experiment domain: an ellipsoid { w : w' diag(E) w <= min(E) (D/2)^2 }
// of the requested diameter, with axes spread logarithmically in [1, 10].
FeasibleDomain experiment_ellipsoid(std::size_t dim, double diameter);

// Constants valid for the given stream: D from the domain, L = max ||x_t||^2,
// G = max_t ||x_t|| * (||x_t|| D + |y_t|), an upper bound every observed
// gradient respects.
ProblemConstants derive_constants(const std::vector<Sample>& stream,
                                  const FeasibleDomain& domain,
                                  std::int64_t horizon, double delta = 1.0);

// Feedback handle for one round: lazily evaluates f_t and grad f_t at the
// committed decision, charging the matching counter exactly once per round
// no matter how often the result is re-read. Algorithms that never call
// value() therefore report zero value queries.
class RoundFeedback {
public:
    using ValueFn = std::function<double()>;
    using GradFn = std::function<Vec()>;

    RoundFeedback(ValueFn value_fn, GradFn grad_fn, std::int64_t round,
                  ComplexityCounters* counters);

    double value();
    const Vec& gradient();
    std::int64_t round() const { return round_; }

private:
    ValueFn value_fn_;
    GradFn grad_fn_;
    std::int64_t round_;
    ComplexityCounters* counters_;
    bool have_value_ = false;
    bool have_grad_ = false;
    double value_ = 0.0;
    Vec grad_;
};

RoundFeedback feedback_for_sample(const Sample& s, const Vec& decision,
                                  std::int64_t round,
                                  ComplexityCounters* counters);

} // namespace oneproj
