#include "oneproj/surrogate.hpp"

#include <cmath>

namespace oneproj {

SurrogateSpec make_surrogate_at(const Vec& grad_f, const Vec& y, Vec x,
                                double tau_proj) {
    require_finite(grad_f, "make_surrogate gradient");
    require_finite(y, "make_surrogate y");
    require_same_dim(grad_f, y, "make_surrogate");
    require_same_dim(y, x, "make_surrogate");

    SurrogateSpec spec;
    spec.grad_f = grad_f;
    spec.center_y = y;
    spec.center_x = std::move(x);

    const double dist = dist2(spec.center_y, spec.center_x);
    if (dist <= tau_proj) {
        // y is (numerically) a member of X: v_t is undefined, the distance
        // term vanishes, and the loss degenerates to the linear case.
        spec.v = zeros(y.size());
        spec.activation = 0.0;
        return spec;
    }
    spec.v = scaled(sub(spec.center_y, spec.center_x), 1.0 / dist);
    spec.activation = std::min(0.0, dot(spec.grad_f, spec.v));
    return spec;
}

SurrogateSpec make_surrogate(const Vec& grad_f, const Vec& y,
                             const FeasibleDomain& domain_x,
                             ComplexityCounters* counters) {
    Vec x = domain_x.project(y);
    if (counters) counters->count_projection();
    return make_surrogate_at(grad_f, y, std::move(x), domain_x.projection_tolerance());
}

double surrogate_center_distance(const SurrogateSpec& spec) {
    return dist2(spec.center_y, spec.center_x);
}

double surrogate_value(const SurrogateSpec& spec, const Vec& y,
                       const FeasibleDomain& domain_x,
                       ComplexityCounters* counters) {
    require_finite(y, "surrogate_value y");
    require_same_dim(y, spec.grad_f, "surrogate_value");
    const double linear = dot(spec.grad_f, y);
    if (spec.activation == 0.0) return linear;
    const double dist = domain_x.distance(y);
    if (counters) counters->count_projection();
    return linear - spec.activation * dist;
}

Vec surrogate_gradient_at_center(const SurrogateSpec& spec) {
    if (spec.activation == 0.0) return spec.grad_f;
    return add_scaled(spec.grad_f, -spec.activation, spec.v);
}

Vec surrogate_gradient(const SurrogateSpec& spec, const Vec& y,
                       const FeasibleDomain& domain_x,
                       ComplexityCounters* counters,
                       bool* chose_subgradient) {
    require_finite(y, "surrogate_gradient y");
    require_same_dim(y, spec.grad_f, "surrogate_gradient");
    if (chose_subgradient) *chose_subgradient = false;
    if (spec.activation == 0.0) return spec.grad_f;
    if (y == spec.center_y) return surrogate_gradient_at_center(spec);

    const Vec q = domain_x.project(y);
    if (counters) counters->count_projection();
    const double dist = dist2(y, q);
    if (dist <= domain_x.projection_tolerance()) {
        // S_X(y) = 0 with an active distance term: the subdifferential is
        // set-valued and grad_f is one valid selection.
        if (chose_subgradient) *chose_subgradient = true;
        return spec.grad_f;
    }
    const Vec dir = scaled(sub(y, q), 1.0 / dist);
    return add_scaled(spec.grad_f, -spec.activation, dir);
}

std::pair<Vec, Vec> reduction_round(
    ReductionState& state, const Vec& grad_f,
    const std::function<Vec(const SurrogateSpec&)>& inner_step) {
    const SurrogateSpec spec = make_surrogate_at(
        grad_f, state.y_current, state.x_current,
        state.domain_x.projection_tolerance());

    Vec y_next = inner_step(spec);
    if (y_next.size() != state.y_current.size() || !is_finite(y_next))
        throw ContractViolation("reduction_round: inner algorithm returned an invalid point");
    if (!state.domain_y.contains(y_next, 10.0 * state.domain_y.projection_tolerance()))
        throw ContractViolation("reduction_round: inner algorithm left the surrogate ball");

    Vec x_next = state.domain_x.project(y_next);
    if (state.counters) state.counters->count_projection();

    state.y_current = std::move(y_next);
    state.x_current = x_next;
    return {std::move(x_next), state.y_current};
}

} // namespace oneproj
