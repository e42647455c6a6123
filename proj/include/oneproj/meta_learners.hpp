#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oneproj/vector_ops.hpp"

namespace oneproj {

// Hedge over a fixed set of experts, fed with linearized losses
// <grad_g, y_i>. Weights are exp(-eps * cumulative loss), normalized in
// log space with max subtraction. The learning rate is either fixed or
// self-confident:  eps_t = sqrt(ln N / (1 + D^2 * sum of ||grad||^2)).
class Hedge {
public:
    static Hedge fixed_rate(std::size_t n_experts, double epsilon);
    static Hedge self_confident(std::size_t n_experts, double d_bound);

    // Adds one round of per-expert losses; grad_sq = ||grad_g||_2^2 feeds the
    // self-confident rate (ignored in fixed mode).
    void accumulate(std::span<const double> losses, double grad_sq);

    // Current simplex weights (p_{t+1} after t accumulations).
    std::vector<double> weights() const;

    double current_epsilon() const;
    std::size_t n_experts() const { return cum_losses_.size(); }
    const std::vector<double>& cumulative_losses() const { return cum_losses_; }

private:
    Hedge() = default;
    std::vector<double> cum_losses_;
    bool self_confident_ = false;
    double epsilon_ = 0.0;     // fixed mode
    double d_bound_ = 0.0;     // self-confident mode
    double grad_sq_sum_ = 0.0; // sum of ||grad_g||^2 over accumulated rounds
};

// One sleeping expert of Adapt-ML-Prod. The weight is stored as ln(w):
// the power update w <- (w * (1 + eta*r))^(eta_new/eta_old) underflows in
// linear space over long horizons.
struct ExpertSlot {
    std::int64_t index_m = 0; // global creation index
    double gamma = 0.0;       // ln(1 + 2m)
    double ln_w = 0.0;
    double eta = 0.5;         // in (0, 1/2], non-increasing
    double sq_excess_sum = 0.0;
    std::int64_t start_round = 0;
};

// Adapt-ML-Prod with sleeping experts: per-expert learning rates
//   eta_i = min(1/2, sqrt(gamma_i / (1 + sum (hat_ell - ell_i)^2))),
// multiplicative weight update
//   w_new = (w * (1 + eta_old * (hat_ell - ell_i)))^(eta_new / eta_old),
// and final simplex weights p_i proportional to w_i * eta_i.
class AmlProd {
public:
    // Registers expert m (strictly increasing across the run) at round t
    // with w = 1, eta = min(1/2, sqrt(ln(1+2m))).
    void spawn(std::int64_t m, std::int64_t t);

    // Removes the slots with the given creation indices.
    void retire(std::span<const std::int64_t> indices);

    // One round of feedback; ells matches the current slot order.
    void update(double hat_ell, std::span<const double> ells);

    // Simplex weights over active slots, in slot order.
    std::vector<double> weights() const;

    std::size_t n_active() const { return slots_.size(); }
    const std::vector<ExpertSlot>& slots() const { return slots_; }

private:
    std::vector<ExpertSlot> slots_;
    std::int64_t max_index_ = 0;
};

// Feedback losses of the meta-algorithm (all scaled into [-1/2, 1/2]):
//   hat_ell = <grad_g, y> / (2GD),  ell_i = <grad_g, y_i> / (2GD).
// Throws ContractViolation when the configured G, D bounds do not actually
// hold for the supplied points.
struct AmlProdFeedback {
    double hat_ell;
    std::vector<double> ells;
};
AmlProdFeedback amlprod_feedback(const Vec& grad_g, const Vec& y_combined,
                                 std::span<const Vec> y_locals, double g_bound,
                                 double d_bound);

} // namespace oneproj
