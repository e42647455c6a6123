#include "oneproj/environment.hpp"

#include <cmath>

namespace oneproj {

std::uint64_t Rng::next_u64() {
    // splitmix64
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
    // Box-Muller; u1 shifted away from zero.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vec Rng::uniform_direction(std::size_t dim) {
    Vec v(dim);
    double n = 0.0;
    do {
        for (std::size_t i = 0; i < dim; ++i) v[i] = normal();
        n = norm2(v);
    } while (n == 0.0);
    for (double& x : v) x /= n;
    return v;
}

Vec Rng::uniform_ball(std::size_t dim, double radius) {
    Vec v = uniform_direction(dim);
    const double r = radius * std::pow(uniform01(), 1.0 / static_cast<double>(dim));
    for (double& x : v) x *= r;
    return v;
}

void EnvironmentConfig::validate() const {
    if (horizon < 1) throw ConfigError("environment: horizon must be >= 1");
    if (dim == 0 || dim != domain.dim())
        throw ConfigError("environment: dimension must match the domain");
    if (drift.kind == DriftConfig::Kind::Piecewise && drift.stages < 1)
        throw ConfigError("environment: piecewise drift needs stages >= 1");
    if (drift.kind == DriftConfig::Kind::RandomWalk && !(drift.step_scale >= 0.0))
        throw ConfigError("environment: random-walk step scale must be >= 0");
    if (!(noise_max >= 0.0)) throw ConfigError("environment: noise bound must be >= 0");
}

std::vector<Sample> generate_stream(const EnvironmentConfig& config) {
    config.validate();
    Rng rng(config.seed);
    const double diam = config.domain.diameter();
    const double feature_radius = diam / 2.0;

    std::vector<Sample> stream;
    stream.reserve(static_cast<std::size_t>(config.horizon));

    const auto draw_model = [&]() {
        return config.domain.project(rng.uniform_ball(config.dim, feature_radius));
    };

    Vec w_star;
    std::int64_t current_stage = -1;
    const double walk_step =
        config.drift.step_scale * diam / static_cast<double>(config.horizon);

    for (std::int64_t t = 1; t <= config.horizon; ++t) {
        if (config.drift.kind == DriftConfig::Kind::Piecewise) {
            const std::int64_t stage = (t - 1) * config.drift.stages / config.horizon;
            if (stage != current_stage) {
                w_star = draw_model();
                current_stage = stage;
            }
        } else {
            if (t == 1) {
                w_star = draw_model();
            } else if (walk_step > 0.0) {
                Vec step = rng.uniform_direction(config.dim);
                w_star = config.domain.project(add_scaled(w_star, walk_step, step));
            }
        }
        Sample s;
        s.feature = rng.uniform_ball(config.dim, feature_radius);
        s.w_star = w_star;
        s.label = dot(s.feature, w_star) + rng.uniform(0.0, config.noise_max);
        stream.push_back(std::move(s));
    }
    return stream;
}

double loss_value(const Sample& s, const Vec& w) {
    require_same_dim(s.feature, w, "loss_value");
    const double r = dot(s.feature, w) - s.label;
    return 0.5 * r * r;
}

Vec loss_gradient(const Sample& s, const Vec& w) {
    require_same_dim(s.feature, w, "loss_gradient");
    const double r = dot(s.feature, w) - s.label;
    return scaled(s.feature, r);
}

FeasibleDomain experiment_ellipsoid(std::size_t dim, double diameter) {
    if (dim < 1) throw UsageError("experiment_ellipsoid: dimension must be >= 1");
    Vec diag(dim);
    for (std::size_t i = 0; i < dim; ++i)
        diag[i] = dim == 1 ? 1.0
                           : std::pow(10.0, static_cast<double>(i) /
                                                static_cast<double>(dim - 1));
    const double level = (diameter / 2.0) * (diameter / 2.0); // min axis is 1
    return FeasibleDomain::ellipsoid(std::move(diag), level);
}

ProblemConstants derive_constants(const std::vector<Sample>& stream,
                                  const FeasibleDomain& domain,
                                  std::int64_t horizon, double delta) {
    ProblemConstants c;
    c.d_bound = domain.diameter();
    c.delta = delta;
    c.horizon = horizon;
    const double w_max = domain.max_norm(); // exact sup of ||w|| over members
    double g = 0.0, l = 0.0;
    for (const Sample& s : stream) {
        const double xn = norm2(s.feature);
        l = std::max(l, xn * xn);
        g = std::max(g, xn * (xn * w_max + std::abs(s.label)));
    }
    c.smoothness = std::max(l, 1e-12);
    c.g_bound = std::max(g, 1e-12);
    c.validate();
    return c;
}

RoundFeedback::RoundFeedback(ValueFn value_fn, GradFn grad_fn,
                             std::int64_t round, ComplexityCounters* counters)
    : value_fn_(std::move(value_fn)), grad_fn_(std::move(grad_fn)),
      round_(round), counters_(counters) {}

double RoundFeedback::value() {
    if (!have_value_) {
        value_ = value_fn_();
        if (!(value_ >= 0.0) || !std::isfinite(value_))
            throw UsageError("round feedback: loss value must be non-negative and finite");
        have_value_ = true;
        if (counters_) counters_->count_value_query();
    }
    return value_;
}

const Vec& RoundFeedback::gradient() {
    if (!have_grad_) {
        grad_ = grad_fn_();
        require_finite(grad_, "round feedback gradient");
        have_grad_ = true;
        if (counters_) counters_->count_gradient_query();
    }
    return grad_;
}

RoundFeedback feedback_for_sample(const Sample& s, const Vec& decision,
                                  std::int64_t round,
                                  ComplexityCounters* counters) {
    // The decision is captured by value: the feedback stays valid after the
    // learner moves on.
    Vec at = decision;
    return RoundFeedback([s, at]() { return loss_value(s, at); },
                         [s, at]() { return loss_gradient(s, at); }, round,
                         counters);
}

} // namespace oneproj
