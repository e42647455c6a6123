#pragma once

#include <cstdint>
#include <vector>

#include "oneproj/errors.hpp"

namespace oneproj {

// Marker-index span [start, end) of the base-learner created at marker m:
// with m = i * 2^k, i odd and k maximal, the span covers marker indices
// [i * 2^k, (i+1) * 2^k). The learner deactivates when marker `end` is
// registered.
struct MarkerSpan {
    std::int64_t start = 0;
    std::int64_t end = 0;
};

MarkerSpan span_for_marker(std::int64_t m);

// Interval of rounds [first, last] (inclusive) of the standard geometric
// cover that starts at round t: with t = i * 2^k, i odd, the interval is
// [t, t + 2^k - 1].
struct RoundInterval {
    std::int64_t first = 0;
    std::int64_t last = 0;
};

RoundInterval standard_cover_starting_at(std::int64_t t);

// Inputs of the threshold generating functions.
struct ThresholdParams {
    enum class Variant { Adaptive, IntervalDynamic };

    double g_bound = 0.0;     // G
    double d_bound = 0.0;     // D
    double smoothness = 0.0;  // L
    double delta = 1.0;       // SOGD delta
    std::int64_t horizon = 0; // T
    std::int64_t pool_size = 0; // N, interval-dynamic variant only
    Variant variant = Variant::Adaptive;
    double scale = 1.0; // multiplies the generated threshold
};

// mu_T = ln(1 + (1 + ln(1+T)) / (2e)).
double mu_horizon(std::int64_t horizon);

// Threshold for the m-th marker. Adaptive variant:
//   (54GD + 168 D^2 L) ln(1+2m) + 168 D^2 L mu^2 + 18 GD mu + 6 D sqrt(delta)
//   + 672 D^2 L;
// interval-dynamic variant:
//   7L (12 D sqrt(ln(1+2m)) + 4 D mu + 6 D sqrt(ln N))^2 + 54 GD ln(1+2m)
//   + 18 GD mu + 3 (6 + G^2 D^2) sqrt(ln N) / 2 + (630 L + 23) D^2 + 9.
// The result is multiplied by params.scale. Strictly increasing in m.
double threshold(std::int64_t m, const ThresholdParams& params);

// Events emitted by one register_loss call.
struct RegistryEvents {
    bool marker_registered = false;
    std::int64_t new_marker_index = 0; // m after registration
    std::int64_t new_marker_round = 0; // s_m
    std::vector<std::int64_t> retired_learners;
    std::int64_t spawned_learner = 0; // learner id == its marker index
};

// Problem-dependent cover state: accumulates the algorithm's own loss
// L_t and registers a new marker whenever L_t exceeds the current
// threshold C_m. Registration resets L_t to 0, retires the learners whose
// span ends at the new marker, and spawns the learner owning the new
// marker. At most one marker fires per round.
class MarkerRegistry {
public:
    explicit MarkerRegistry(const ThresholdParams& params);

    RegistryEvents register_loss(double f_value, std::int64_t t);

    // Creation indices of the not-yet-retired learners, ascending.
    std::vector<std::int64_t> active_learners() const;

    std::int64_t marker_count() const { return m_current_; }
    const std::vector<std::int64_t>& marker_rounds() const { return marker_rounds_; }
    double running_loss() const { return running_loss_; }
    double current_threshold() const { return threshold_current_; }
    const std::vector<MarkerSpan>& active_spans() const { return active_spans_; }

private:
    ThresholdParams params_;
    std::vector<std::int64_t> marker_rounds_; // s_1 = 1, s_2, ...
    std::int64_t m_current_ = 1;
    double running_loss_ = 0.0;
    double threshold_current_ = 0.0;
    std::vector<MarkerSpan> active_spans_; // span.start is the learner id
};

} // namespace oneproj
