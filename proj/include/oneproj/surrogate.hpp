#pragma once

#include <functional>
#include <utility>

#include "oneproj/counters.hpp"
#include "oneproj/domains.hpp"
#include "oneproj/vector_ops.hpp"

namespace oneproj {

// Frozen per-round description of the surrogate loss
//
//   g(y) = <grad_f, y> - activation * S_X(y),
//
// where S_X is the Euclidean distance to X, v is the unit direction from
// the projected center x = Pi_X[y_center] towards y_center, and
// activation = <grad_f, v> when that inner product is negative and 0
// otherwise. With activation = 0 the loss is purely linear.
struct SurrogateSpec {
    Vec grad_f;        // gradient of the original loss at center_x
    Vec v;             // unit projection direction, or zero when inactive
    double activation; // min(0, <grad_f, v>)
    Vec center_y;      // the point the spec was built at
    Vec center_x;      // Pi_X[center_y]
};

// Builds the spec, performing the one projection x = Pi_X[y] (counted when
// counters are supplied). If y is already in X (distance <= tau_proj) the
// spec degenerates to the linear loss.
SurrogateSpec make_surrogate(const Vec& grad_f, const Vec& y,
                             const FeasibleDomain& domain_x,
                             ComplexityCounters* counters = nullptr);

// Same construction with a precomputed center_x = Pi_X[y]; performs no
// projection. This is how the round protocol reuses the previous round's
// submit projection.
SurrogateSpec make_surrogate_at(const Vec& grad_f, const Vec& y, Vec x,
                                double tau_proj);

// g(y) = <grad_f, y> - activation * S_X(y). Evaluating the distance term
// costs one projection onto X (counted) whenever activation != 0.
double surrogate_value(const SurrogateSpec& spec, const Vec& y,
                       const FeasibleDomain& domain_x,
                       ComplexityCounters* counters = nullptr);

// (Sub)gradient of g at y.
//   activation == 0            -> grad_f, no projection;
//   y == center_y (bitwise)    -> grad_f - activation * v, no projection;
//   otherwise                  -> grad_f - activation * (y - Pi_X[y]) / ||y - Pi_X[y]||,
//                                 one counted projection.
// At a point of X with activation < 0 the subdifferential is set-valued;
// grad_f is returned (a valid selection) and *chose_subgradient is set.
Vec surrogate_gradient(const SurrogateSpec& spec, const Vec& y,
                       const FeasibleDomain& domain_x,
                       ComplexityCounters* counters = nullptr,
                       bool* chose_subgradient = nullptr);

// Closed form of the gradient at the spec's own center; never projects.
// Satisfies ||result||_2 <= ||grad_f||_2.
Vec surrogate_gradient_at_center(const SurrogateSpec& spec);

// Distance S_X(center_y) cached at construction time.
double surrogate_center_distance(const SurrogateSpec& spec);

// Round protocol state: a decision y on the surrogate ball Y and its
// projection x onto X, kept in lockstep so that each round performs exactly
// one projection onto X (the submit step, whose result seeds the next
// round's surrogate construction).
struct ReductionState {
    FeasibleDomain domain_x;
    FeasibleDomain domain_y;
    Vec x_current;
    Vec y_current;
    ComplexityCounters* counters = nullptr;

    explicit ReductionState(const FeasibleDomain& x_domain,
                            ComplexityCounters* count = nullptr)
        : domain_x(x_domain), domain_y(x_domain.surrogate_ball()),
          x_current(zeros(x_domain.dim())), y_current(zeros(x_domain.dim())),
          counters(count) {}

    static ReductionState initial(const FeasibleDomain& x_domain,
                                  ComplexityCounters* counters = nullptr) {
        return ReductionState(x_domain, counters);
    }
};

// One round of the reduction: build g_t at the cached (x_t, y_t), let the
// inner algorithm produce y_{t+1} from the spec, then submit
// x_{t+1} = Pi_X[y_{t+1}] (the single counted projection). Returns
// (x_next, y_next). Throws ContractViolation if the inner step leaves Y.
std::pair<Vec, Vec> reduction_round(
    ReductionState& state, const Vec& grad_f,
    const std::function<Vec(const SurrogateSpec&)>& inner_step);

} // namespace oneproj
