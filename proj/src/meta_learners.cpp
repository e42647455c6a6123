#include "oneproj/meta_learners.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "oneproj/errors.hpp"

namespace oneproj {

Hedge Hedge::fixed_rate(std::size_t n_experts, double epsilon) {
    if (n_experts == 0) throw UsageError("hedge: empty expert set");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw UsageError("hedge: epsilon must be positive");
    Hedge h;
    h.cum_losses_.assign(n_experts, 0.0);
    h.self_confident_ = false;
    h.epsilon_ = epsilon;
    return h;
}

Hedge Hedge::self_confident(std::size_t n_experts, double d_bound) {
    if (n_experts == 0) throw UsageError("hedge: empty expert set");
    if (!(d_bound > 0.0)) throw UsageError("hedge: D bound must be positive");
    Hedge h;
    h.cum_losses_.assign(n_experts, 0.0);
    h.self_confident_ = true;
    h.d_bound_ = d_bound;
    return h;
}

void Hedge::accumulate(std::span<const double> losses, double grad_sq) {
    if (losses.size() != cum_losses_.size())
        throw UsageError("hedge accumulate: loss count does not match expert count");
    for (std::size_t i = 0; i < losses.size(); ++i) {
        if (!std::isfinite(losses[i])) throw UsageError("hedge accumulate: non-finite loss");
        cum_losses_[i] += losses[i];
    }
    if (!(grad_sq >= 0.0)) throw UsageError("hedge accumulate: negative squared gradient");
    grad_sq_sum_ += grad_sq;
}

double Hedge::current_epsilon() const {
    if (!self_confident_) return epsilon_;
    const double n = static_cast<double>(cum_losses_.size());
    return std::sqrt(std::log(n) / (1.0 + d_bound_ * d_bound_ * grad_sq_sum_));
}

std::vector<double> Hedge::weights() const {
    const double eps = current_epsilon();
    const std::size_t n = cum_losses_.size();
    std::vector<double> logits(n);
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        logits[i] = -eps * cum_losses_[i];
        max_logit = std::max(max_logit, logits[i]);
    }
    std::vector<double> w(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(logits[i] - max_logit);
        sum += w[i];
    }
    for (double& x : w) x /= sum;
    return w;
}

void AmlProd::spawn(std::int64_t m, std::int64_t t) {
    if (m <= max_index_)
        throw UsageError("amlprod spawn: index must exceed all existing indices");
    ExpertSlot s;
    s.index_m = m;
    s.gamma = std::log(1.0 + 2.0 * static_cast<double>(m));
    s.ln_w = 0.0; // w = 1
    s.eta = std::min(0.5, std::sqrt(s.gamma));
    s.sq_excess_sum = 0.0;
    s.start_round = t;
    slots_.push_back(s);
    max_index_ = m;
}

void AmlProd::retire(std::span<const std::int64_t> indices) {
    for (std::int64_t m : indices) {
        auto it = std::find_if(slots_.begin(), slots_.end(),
                               [m](const ExpertSlot& s) { return s.index_m == m; });
        if (it == slots_.end()) throw UsageError("amlprod retire: unknown expert index");
        slots_.erase(it);
    }
}

void AmlProd::update(double hat_ell, std::span<const double> ells) {
    if (ells.size() != slots_.size())
        throw UsageError("amlprod update: loss count does not match active slots");
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        ExpertSlot& s = slots_[i];
        const double r = hat_ell - ells[i];
        // Feedback values each carry up to 1e-9 slack, so allow twice that.
        if (!(std::abs(r) <= 1.0 + 1e-8))
            throw UsageError("amlprod update: excess loss outside [-1, 1]");
        const double eta_old = s.eta;
        s.sq_excess_sum += r * r;
        const double eta_new =
            std::min(0.5, std::sqrt(s.gamma / (1.0 + s.sq_excess_sum)));
        const double mult = 1.0 + eta_old * r;
        // eta_old <= 1/2 and |r| <= 1 keep the multiplier >= 1/2.
        assert(mult > 0.0);
        s.ln_w = (eta_new / eta_old) * (s.ln_w + std::log(mult));
        s.eta = eta_new;
    }
}

std::vector<double> AmlProd::weights() const {
    if (slots_.empty()) throw UsageError("amlprod weights: empty ensemble");
    const std::size_t n = slots_.size();
    std::vector<double> logits(n);
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        logits[i] = slots_[i].ln_w + std::log(slots_[i].eta);
        max_logit = std::max(max_logit, logits[i]);
    }
    std::vector<double> p(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = std::exp(logits[i] - max_logit);
        sum += p[i];
    }
    for (double& x : p) x /= sum;
    return p;
}

AmlProdFeedback amlprod_feedback(const Vec& grad_g, const Vec& y_combined,
                                 std::span<const Vec> y_locals, double g_bound,
                                 double d_bound) {
    if (!(g_bound > 0.0) || !(d_bound > 0.0))
        throw UsageError("amlprod feedback: G and D must be positive");
    require_finite(grad_g, "amlprod feedback gradient");
    if (norm2(grad_g) > g_bound * (1.0 + 1e-9))
        throw ContractViolation("amlprod feedback: gradient norm exceeds configured G");

    const double scale = 1.0 / (2.0 * g_bound * d_bound);
    const double bound = 0.5 + 1e-9;

    AmlProdFeedback fb;
    fb.hat_ell = dot(grad_g, y_combined) * scale;
    if (std::abs(fb.hat_ell) > bound)
        throw ContractViolation("amlprod feedback: combined loss outside [-1/2, 1/2]");
    fb.ells.reserve(y_locals.size());
    for (const Vec& y_i : y_locals) {
        const double ell = dot(grad_g, y_i) * scale;
        if (std::abs(ell) > bound)
            throw ContractViolation("amlprod feedback: expert loss outside [-1/2, 1/2]");
        fb.ells.push_back(ell);
    }
    return fb;
}

} // namespace oneproj
