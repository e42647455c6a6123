#include "oneproj/covers.hpp"

#include <cmath>

namespace oneproj {

namespace {

std::int64_t lowest_set_bit(std::int64_t m) { return m & -m; }

} // namespace

MarkerSpan span_for_marker(std::int64_t m) {
    if (m < 1) throw UsageError("span_for_marker: marker index must be >= 1");
    return {m, m + lowest_set_bit(m)};
}

RoundInterval standard_cover_starting_at(std::int64_t t) {
    if (t < 1) throw UsageError("standard_cover_starting_at: round must be >= 1");
    return {t, t + lowest_set_bit(t) - 1};
}

double mu_horizon(std::int64_t horizon) {
    if (horizon < 1) throw UsageError("mu_horizon: horizon must be >= 1");
    const double t = static_cast<double>(horizon);
    return std::log(1.0 + (1.0 + std::log(1.0 + t)) / (2.0 * std::exp(1.0)));
}

double threshold(std::int64_t m, const ThresholdParams& params) {
    if (m < 1) throw UsageError("threshold: marker index must be >= 1");
    if (!(params.g_bound > 0.0) || !(params.d_bound > 0.0) ||
        !(params.smoothness > 0.0) || !(params.delta > 0.0) || params.horizon < 1)
        throw ConfigError("threshold: G, D, L, delta must be positive and T >= 1");
    if (!(params.scale > 0.0)) throw ConfigError("threshold: scale must be positive");

    const double g = params.g_bound;
    const double d = params.d_bound;
    const double l = params.smoothness;
    const double mu = mu_horizon(params.horizon);
    const double ln_m = std::log(1.0 + 2.0 * static_cast<double>(m));

    double value = 0.0;
    switch (params.variant) {
    case ThresholdParams::Variant::Adaptive:
        value = (54.0 * g * d + 168.0 * d * d * l) * ln_m +
                168.0 * d * d * l * mu * mu + 18.0 * g * d * mu +
                6.0 * d * std::sqrt(params.delta) + 672.0 * d * d * l;
        break;
    case ThresholdParams::Variant::IntervalDynamic: {
        if (params.pool_size < 1)
            throw ConfigError("threshold: interval-dynamic variant needs the pool size N");
        const double ln_n = std::log(static_cast<double>(params.pool_size));
        const double inner = 12.0 * d * std::sqrt(ln_m) + 4.0 * d * mu +
                             6.0 * d * std::sqrt(ln_n);
        value = 7.0 * l * inner * inner + 54.0 * g * d * ln_m + 18.0 * g * d * mu +
                1.5 * (6.0 + g * g * d * d) * std::sqrt(ln_n) +
                (630.0 * l + 23.0) * d * d + 9.0;
        break;
    }
    }
    return params.scale * value;
}

MarkerRegistry::MarkerRegistry(const ThresholdParams& params) : params_(params) {
    threshold_current_ = threshold(1, params_);
    marker_rounds_.push_back(1); // s_1 = 1
    active_spans_.push_back(span_for_marker(1));
}

RegistryEvents MarkerRegistry::register_loss(double f_value, std::int64_t t) {
    if (!(f_value >= 0.0) || !std::isfinite(f_value))
        throw UsageError("register_loss: loss must be non-negative and finite");
    RegistryEvents events;
    running_loss_ += f_value;
    if (running_loss_ <= threshold_current_) return events;

    // Threshold crossed: reset the accumulator, retire the learners whose
    // span ends at the incoming marker, then register it and spawn its
    // learner. One marker per round at most.
    running_loss_ = 0.0;
    const std::int64_t m_new = m_current_ + 1;
    for (auto it = active_spans_.begin(); it != active_spans_.end();) {
        if (it->end <= m_new) {
            events.retired_learners.push_back(it->start);
            it = active_spans_.erase(it);
        } else {
            ++it;
        }
    }
    m_current_ = m_new;
    marker_rounds_.push_back(t);
    threshold_current_ = threshold(m_new, params_);
    active_spans_.push_back(span_for_marker(m_new));

    events.marker_registered = true;
    events.new_marker_index = m_new;
    events.new_marker_round = t;
    events.spawned_learner = m_new;
    return events;
}

std::vector<std::int64_t> MarkerRegistry::active_learners() const {
    std::vector<std::int64_t> ids;
    ids.reserve(active_spans_.size());
    for (const MarkerSpan& s : active_spans_) ids.push_back(s.start);
    return ids;
}

} // namespace oneproj
