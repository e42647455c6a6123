#include "oneproj/algorithms.hpp"

#include <algorithm>
#include <cmath>

#include "oneproj/base_learners.hpp"
#include "oneproj/covers.hpp"
#include "oneproj/meta_learners.hpp"
#include "oneproj/surrogate.hpp"

namespace oneproj {

const char* variant_name(AlgorithmVariant v) {
    switch (v) {
    case AlgorithmVariant::EfficientDynamicWorstcase: return "efficient_dynamic_worstcase";
    case AlgorithmVariant::EfficientDynamicSmallloss: return "efficient_dynamic_smallloss";
    case AlgorithmVariant::EfficientAdaptive: return "efficient_adaptive";
    case AlgorithmVariant::EfficientIntervalDynamic: return "efficient_interval_dynamic";
    case AlgorithmVariant::BaselineAder: return "baseline_ader";
    case AlgorithmVariant::BaselineAderSmallloss: return "baseline_ader_smallloss";
    case AlgorithmVariant::BaselineAdaptiveMultiproj: return "baseline_adaptive_multiproj";
    }
    throw UsageError("variant_name: unknown variant");
}

AlgorithmVariant variant_from_name(const std::string& name) {
    for (AlgorithmVariant v : {
             AlgorithmVariant::EfficientDynamicWorstcase,
             AlgorithmVariant::EfficientDynamicSmallloss,
             AlgorithmVariant::EfficientAdaptive,
             AlgorithmVariant::EfficientIntervalDynamic,
             AlgorithmVariant::BaselineAder,
             AlgorithmVariant::BaselineAderSmallloss,
             AlgorithmVariant::BaselineAdaptiveMultiproj,
         })
        if (name == variant_name(v)) return v;
    throw ConfigError("unknown algorithm name: " + name);
}

namespace {

std::vector<double> geometric_pool(double eta_first, std::size_t n) {
    std::vector<double> pool(n);
    double eta = eta_first;
    for (std::size_t i = 0; i < n; ++i) {
        pool[i] = eta;
        eta *= 2.0;
    }
    return pool;
}

} // namespace

AlgorithmConfig configure_dynamic_worstcase(const ProblemConstants& c) {
    c.validate();
    const double t = static_cast<double>(c.horizon);
    const auto n = static_cast<std::size_t>(
        std::ceil(0.5 * std::log2(1.0 + 2.0 * t / 5.0)) + 1.0);
    AlgorithmConfig cfg;
    cfg.variant = AlgorithmVariant::EfficientDynamicWorstcase;
    cfg.constants = c;
    cfg.pool = geometric_pool((c.d_bound / c.g_bound) * std::sqrt(5.0 / (2.0 * t)), n);
    cfg.self_confident_meta = false;
    cfg.fixed_epsilon = std::sqrt(
        std::log(static_cast<double>(n)) /
        (1.0 + c.g_bound * c.g_bound * c.d_bound * c.d_bound * t));
    return cfg;
}

AlgorithmConfig configure_dynamic_smallloss(const ProblemConstants& c) {
    c.validate();
    const double t = static_cast<double>(c.horizon);
    const double d_sq = c.d_bound * c.d_bound;
    const double denom = 1.0 + 8.0 * c.smoothness * c.g_bound * c.d_bound * t;
    const double ratio = (5.0 * d_sq + 2.0 * d_sq * t) * denom / (5.0 * d_sq);
    const auto n = static_cast<std::size_t>(std::ceil(0.5 * std::log2(ratio)) + 1.0);
    AlgorithmConfig cfg;
    cfg.variant = AlgorithmVariant::EfficientDynamicSmallloss;
    cfg.constants = c;
    cfg.pool = geometric_pool(std::sqrt(5.0 * d_sq / denom), n);
    cfg.self_confident_meta = true;
    return cfg;
}

AlgorithmConfig configure_adaptive(const ProblemConstants& c, double threshold_scale) {
    c.validate();
    AlgorithmConfig cfg;
    cfg.variant = AlgorithmVariant::EfficientAdaptive;
    cfg.constants = c;
    cfg.threshold_scale = threshold_scale;
    return cfg;
}

AlgorithmConfig configure_interval_dynamic(const ProblemConstants& c,
                                           double threshold_scale) {
    AlgorithmConfig cfg = configure_dynamic_smallloss(c);
    cfg.variant = AlgorithmVariant::EfficientIntervalDynamic;
    cfg.threshold_scale = threshold_scale;
    return cfg;
}

AlgorithmConfig configure_baseline_ader(const ProblemConstants& c, bool smallloss_pool) {
    AlgorithmConfig cfg =
        smallloss_pool ? configure_dynamic_smallloss(c) : configure_dynamic_worstcase(c);
    cfg.variant = smallloss_pool ? AlgorithmVariant::BaselineAderSmallloss
                                 : AlgorithmVariant::BaselineAder;
    return cfg;
}

AlgorithmConfig configure_baseline_adaptive_multiproj(const ProblemConstants& c,
                                                      double threshold_scale) {
    AlgorithmConfig cfg = configure_adaptive(c, threshold_scale);
    cfg.variant = AlgorithmVariant::BaselineAdaptiveMultiproj;
    return cfg;
}

AlgorithmConfig configure(AlgorithmVariant variant, const ProblemConstants& c,
                          double threshold_scale) {
    switch (variant) {
    case AlgorithmVariant::EfficientDynamicWorstcase: return configure_dynamic_worstcase(c);
    case AlgorithmVariant::EfficientDynamicSmallloss: return configure_dynamic_smallloss(c);
    case AlgorithmVariant::EfficientAdaptive: return configure_adaptive(c, threshold_scale);
    case AlgorithmVariant::EfficientIntervalDynamic:
        return configure_interval_dynamic(c, threshold_scale);
    case AlgorithmVariant::BaselineAder: return configure_baseline_ader(c, false);
    case AlgorithmVariant::BaselineAderSmallloss: return configure_baseline_ader(c, true);
    case AlgorithmVariant::BaselineAdaptiveMultiproj:
        return configure_baseline_adaptive_multiproj(c, threshold_scale);
    }
    throw UsageError("configure: unknown variant");
}

namespace {

Hedge make_meta_hedge(const AlgorithmConfig& cfg) {
    if (cfg.pool.empty()) throw ConfigError("learner: empty step-size pool");
    return cfg.self_confident_meta
               ? Hedge::self_confident(cfg.pool.size(), cfg.constants.d_bound)
               : Hedge::fixed_rate(cfg.pool.size(), cfg.fixed_epsilon);
}

ThresholdParams make_threshold_params(const AlgorithmConfig& cfg,
                                      ThresholdParams::Variant variant) {
    ThresholdParams p;
    p.g_bound = cfg.constants.g_bound;
    p.d_bound = cfg.constants.d_bound;
    p.smoothness = cfg.constants.smoothness;
    p.delta = cfg.constants.delta;
    p.horizon = cfg.constants.horizon;
    p.pool_size = static_cast<std::int64_t>(cfg.pool.size());
    p.variant = variant;
    p.scale = cfg.threshold_scale;
    return p;
}

// Algorithm: the efficient dynamic machine. N fixed-step OGD experts over
// the surrogate ball, combined by Hedge on linearized surrogate losses,
// wrapped in the one-projection reduction.
class EfficientDynamicLearner final : public OnlineLearner {
public:
    EfficientDynamicLearner(const AlgorithmConfig& cfg, const FeasibleDomain& domain)
        : red_(ReductionState::initial(domain, &counters_)), hedge_(make_meta_hedge(cfg)) {
        const double y_radius = red_.domain_y.ball_radius();
        experts_.reserve(cfg.pool.size());
        for (double eta : cfg.pool)
            experts_.emplace_back(domain.dim(), eta, y_radius);
    }

    const Vec& decision() const override { return red_.x_current; }

    void observe(RoundFeedback& fb) override {
        counters_.begin_round();
        const Vec& grad_f = fb.gradient();
        reduction_round(red_, grad_f, [&](const SurrogateSpec& spec) {
            const Vec grad_g = surrogate_gradient_at_center(spec);
            std::vector<double> losses(experts_.size());
            for (std::size_t i = 0; i < experts_.size(); ++i)
                losses[i] = dot(grad_g, experts_[i].decision());
            for (OgdLearner& e : experts_) e.step(grad_g);
            hedge_.accumulate(losses, dot(grad_g, grad_g));
            const std::vector<double> p = hedge_.weights();
            Vec y_next = zeros(grad_g.size());
            for (std::size_t i = 0; i < experts_.size(); ++i)
                axpy(y_next, p[i], experts_[i].decision());
            return y_next;
        });
        ++round_;
    }

    Diagnostics diagnostics() const override {
        Diagnostics d;
        d.meta_weights = hedge_.weights();
        d.active_learners = static_cast<std::int64_t>(experts_.size());
        return d;
    }

private:
    ReductionState red_;
    Hedge hedge_;
    std::vector<OgdLearner> experts_;
    std::int64_t round_ = 1;
};

// Algorithm: the efficient problem-dependent adaptive machine. SOGD experts
// scheduled by the marker registry, combined by Adapt-ML-Prod, wrapped in
// the reduction.
class EfficientAdaptiveLearner final : public OnlineLearner {
public:
    EfficientAdaptiveLearner(const AlgorithmConfig& cfg, const FeasibleDomain& domain)
        : red_(ReductionState::initial(domain, &counters_)),
          registry_(make_threshold_params(cfg, ThresholdParams::Variant::Adaptive)),
          g_bound_(cfg.constants.g_bound), d_scale_(cfg.constants.d_bound),
          delta_(cfg.constants.delta), mult_(cfg.sogd_numerator_mult) {
        units_.push_back(Unit{1, SogdLearner(domain.dim(), red_.domain_y.ball_radius(),
                                             delta_, mult_, 1)});
        aml_.spawn(1, 1);
    }

    const Vec& decision() const override { return red_.x_current; }

    void observe(RoundFeedback& fb) override {
        counters_.begin_round();
        const Vec& grad_f = fb.gradient();
        const double f_val = fb.value();
        reduction_round(red_, grad_f, [&](const SurrogateSpec& spec) {
            const Vec grad_g = surrogate_gradient_at_center(spec);
            apply_registry_events(registry_.register_loss(f_val, round_), spec.center_y);

            std::vector<Vec> locals;
            locals.reserve(units_.size());
            for (const Unit& u : units_) locals.push_back(u.learner.decision());
            const AmlProdFeedback meta_fb =
                amlprod_feedback(grad_g, spec.center_y, locals, g_bound_, d_scale_);

            for (Unit& u : units_) u.learner.step(grad_g);
            aml_.update(meta_fb.hat_ell, meta_fb.ells);
            const std::vector<double> p = aml_.weights();
            Vec y_next = zeros(grad_g.size());
            for (std::size_t i = 0; i < units_.size(); ++i)
                axpy(y_next, p[i], units_[i].learner.decision());
            return y_next;
        });
        ++round_;
    }

    Diagnostics diagnostics() const override {
        Diagnostics d;
        d.meta_weights = aml_.weights();
        d.active_learners = static_cast<std::int64_t>(units_.size());
        d.marker_count = registry_.marker_count();
        d.marker_rounds = registry_.marker_rounds();
        d.active_learner_ids = registry_.active_learners();
        return d;
    }

private:
    struct Unit {
        std::int64_t id;
        SogdLearner learner;
    };

    // Spawned learners restart at the current combined prediction so that a
    // new marker does not jolt the ensemble output.
    void apply_registry_events(const RegistryEvents& events, const Vec& y_now) {
        if (!events.marker_registered) return;
        for (std::int64_t id : events.retired_learners)
            std::erase_if(units_, [id](const Unit& u) { return u.id == id; });
        aml_.retire(events.retired_learners);
        units_.push_back(Unit{events.spawned_learner,
                              SogdLearner(y_now, red_.domain_y.ball_radius(), delta_,
                                          mult_, static_cast<int>(round_))});
        aml_.spawn(events.spawned_learner, round_);
    }

    ReductionState red_;
    MarkerRegistry registry_;
    AmlProd aml_;
    std::vector<Unit> units_;
    double g_bound_;
    double d_scale_;
    double delta_;
    double mult_;
    std::int64_t round_ = 1;
};

// One base-learner of the interval-dynamic machine: a full dynamic machine
// of its own (N OGD experts + self-confident Hedge started at its spawn
// round), producing a combined local decision on the surrogate ball.
struct InnerDynamicUnit {
    std::int64_t id;
    std::vector<OgdLearner> experts;
    Hedge hedge;
    Vec y_local;

    InnerDynamicUnit(std::int64_t id_, Vec start,
                     const std::vector<double>& pool, double y_radius,
                     double d_bound)
        : id(id_), hedge(Hedge::self_confident(pool.size(), d_bound)),
          y_local(start) {
        experts.reserve(pool.size());
        for (double eta : pool) experts.emplace_back(start, eta, y_radius);
    }

    void step(const Vec& grad_g) {
        std::vector<double> losses(experts.size());
        for (std::size_t j = 0; j < experts.size(); ++j)
            losses[j] = dot(grad_g, experts[j].decision());
        for (OgdLearner& e : experts) e.step(grad_g);
        hedge.accumulate(losses, dot(grad_g, grad_g));
        const std::vector<double> p = hedge.weights();
        y_local = zeros(y_local.size());
        for (std::size_t j = 0; j < experts.size(); ++j)
            axpy(y_local, p[j], experts[j].decision());
    }
};

class EfficientIntervalDynamicLearner final : public OnlineLearner {
public:
    EfficientIntervalDynamicLearner(const AlgorithmConfig& cfg,
                                    const FeasibleDomain& domain)
        : red_(ReductionState::initial(domain, &counters_)),
          registry_(make_threshold_params(cfg, ThresholdParams::Variant::IntervalDynamic)),
          pool_(cfg.pool), g_bound_(cfg.constants.g_bound),
          d_scale_(cfg.constants.d_bound) {
        if (pool_.empty()) throw ConfigError("interval-dynamic learner: empty pool");
        units_.emplace_back(1, zeros(domain.dim()), pool_,
                            red_.domain_y.ball_radius(), d_scale_);
        aml_.spawn(1, 1);
    }

    const Vec& decision() const override { return red_.x_current; }

    void observe(RoundFeedback& fb) override {
        counters_.begin_round();
        const Vec& grad_f = fb.gradient();
        const double f_val = fb.value();
        reduction_round(red_, grad_f, [&](const SurrogateSpec& spec) {
            const Vec grad_g = surrogate_gradient_at_center(spec);
            apply_registry_events(registry_.register_loss(f_val, round_), spec.center_y);

            std::vector<Vec> locals;
            locals.reserve(units_.size());
            for (const InnerDynamicUnit& u : units_) locals.push_back(u.y_local);
            const AmlProdFeedback meta_fb =
                amlprod_feedback(grad_g, spec.center_y, locals, g_bound_, d_scale_);

            for (InnerDynamicUnit& u : units_) u.step(grad_g);
            aml_.update(meta_fb.hat_ell, meta_fb.ells);
            const std::vector<double> p = aml_.weights();
            Vec y_next = zeros(grad_g.size());
            for (std::size_t i = 0; i < units_.size(); ++i)
                axpy(y_next, p[i], units_[i].y_local);
            return y_next;
        });
        ++round_;
    }

    Diagnostics diagnostics() const override {
        Diagnostics d;
        d.meta_weights = aml_.weights();
        d.active_learners = static_cast<std::int64_t>(units_.size());
        d.marker_count = registry_.marker_count();
        d.marker_rounds = registry_.marker_rounds();
        d.active_learner_ids = registry_.active_learners();
        return d;
    }

private:
    void apply_registry_events(const RegistryEvents& events, const Vec& y_now) {
        if (!events.marker_registered) return;
        for (std::int64_t id : events.retired_learners)
            std::erase_if(units_, [id](const InnerDynamicUnit& u) { return u.id == id; });
        aml_.retire(events.retired_learners);
        units_.emplace_back(events.spawned_learner, y_now, pool_,
                            red_.domain_y.ball_radius(), d_scale_);
        aml_.spawn(events.spawned_learner, round_);
    }

    ReductionState red_;
    MarkerRegistry registry_;
    AmlProd aml_;
    std::vector<InnerDynamicUnit> units_;
    std::vector<double> pool_;
    double g_bound_;
    double d_scale_;
    std::int64_t round_ = 1;
};

// Multi-projection dynamic baseline: every expert projects onto X itself.
class BaselineAderLearner final : public OnlineLearner {
public:
    BaselineAderLearner(const AlgorithmConfig& cfg, const FeasibleDomain& domain)
        : domain_(domain), pool_(cfg.pool), hedge_(make_meta_hedge(cfg)),
          x_(zeros(domain.dim())) {
        experts_.assign(pool_.size(), zeros(domain.dim()));
    }

    const Vec& decision() const override { return x_; }

    void observe(RoundFeedback& fb) override {
        counters_.begin_round();
        const Vec& grad_f = fb.gradient();
        std::vector<double> losses(experts_.size());
        for (std::size_t i = 0; i < experts_.size(); ++i)
            losses[i] = dot(grad_f, experts_[i]);
        for (std::size_t i = 0; i < experts_.size(); ++i) {
            experts_[i] = domain_.project(add_scaled(experts_[i], -pool_[i], grad_f));
            counters_.count_projection();
        }
        hedge_.accumulate(losses, dot(grad_f, grad_f));
        const std::vector<double> p = hedge_.weights();
        Vec x_next = zeros(x_.size());
        for (std::size_t i = 0; i < experts_.size(); ++i)
            axpy(x_next, p[i], experts_[i]);
        x_ = std::move(x_next);
        ++round_;
    }

    Diagnostics diagnostics() const override {
        Diagnostics d;
        d.meta_weights = hedge_.weights();
        d.active_learners = static_cast<std::int64_t>(experts_.size());
        return d;
    }

private:
    FeasibleDomain domain_;
    std::vector<double> pool_;
    Hedge hedge_;
    std::vector<Vec> experts_;
    Vec x_;
    std::int64_t round_ = 1;
};

// Multi-projection adaptive baseline: the same cover/meta structure with
// SOGD experts updating directly on X, so each round costs one projection
// per active expert.
class MultiprojAdaptiveLearner final : public OnlineLearner {
public:
    MultiprojAdaptiveLearner(const AlgorithmConfig& cfg, const FeasibleDomain& domain)
        : domain_(domain),
          registry_(make_threshold_params(cfg, ThresholdParams::Variant::Adaptive)),
          g_bound_(cfg.constants.g_bound), d_scale_(cfg.constants.d_bound),
          delta_(cfg.constants.delta), mult_(cfg.sogd_numerator_mult),
          x_(zeros(domain.dim())) {
        units_.push_back(Unit{1, zeros(domain.dim()), 0.0});
        aml_.spawn(1, 1);
    }

    const Vec& decision() const override { return x_; }

    void observe(RoundFeedback& fb) override {
        counters_.begin_round();
        const Vec& grad_f = fb.gradient();
        const double f_val = fb.value();

        const RegistryEvents events = registry_.register_loss(f_val, round_);
        if (events.marker_registered) {
            for (std::int64_t id : events.retired_learners)
                std::erase_if(units_, [id](const Unit& u) { return u.id == id; });
            aml_.retire(events.retired_learners);
            // New experts restart at the current combined decision.
            units_.push_back(Unit{events.spawned_learner, x_, 0.0});
            aml_.spawn(events.spawned_learner, round_);
        }

        std::vector<Vec> locals;
        locals.reserve(units_.size());
        for (const Unit& u : units_) locals.push_back(u.x);
        const AmlProdFeedback meta_fb =
            amlprod_feedback(grad_f, x_, locals, g_bound_, d_scale_);

        const double grad_sq = dot(grad_f, grad_f);
        for (Unit& u : units_) {
            u.sq_grad_sum += grad_sq;
            const double eta = self_confident_step(d_scale_, mult_, delta_, u.sq_grad_sum);
            u.x = domain_.project(add_scaled(u.x, -eta, grad_f));
            counters_.count_projection();
        }
        aml_.update(meta_fb.hat_ell, meta_fb.ells);
        const std::vector<double> p = aml_.weights();
        Vec x_next = zeros(x_.size());
        for (std::size_t i = 0; i < units_.size(); ++i) axpy(x_next, p[i], units_[i].x);
        x_ = std::move(x_next);
        ++round_;
    }

    Diagnostics diagnostics() const override {
        Diagnostics d;
        d.meta_weights = aml_.weights();
        d.active_learners = static_cast<std::int64_t>(units_.size());
        d.marker_count = registry_.marker_count();
        d.marker_rounds = registry_.marker_rounds();
        d.active_learner_ids = registry_.active_learners();
        return d;
    }

private:
    struct Unit {
        std::int64_t id;
        Vec x;
        double sq_grad_sum;
    };

    FeasibleDomain domain_;
    MarkerRegistry registry_;
    AmlProd aml_;
    std::vector<Unit> units_;
    double g_bound_;
    double d_scale_;
    double delta_;
    double mult_;
    Vec x_;
    std::int64_t round_ = 1;
};

} // namespace

std::unique_ptr<OnlineLearner> make_learner(const AlgorithmConfig& config,
                                            const FeasibleDomain& domain) {
    config.constants.validate();
    switch (config.variant) {
    case AlgorithmVariant::EfficientDynamicWorstcase:
    case AlgorithmVariant::EfficientDynamicSmallloss:
        return std::make_unique<EfficientDynamicLearner>(config, domain);
    case AlgorithmVariant::EfficientAdaptive:
        return std::make_unique<EfficientAdaptiveLearner>(config, domain);
    case AlgorithmVariant::EfficientIntervalDynamic:
        return std::make_unique<EfficientIntervalDynamicLearner>(config, domain);
    case AlgorithmVariant::BaselineAder:
    case AlgorithmVariant::BaselineAderSmallloss:
        return std::make_unique<BaselineAderLearner>(config, domain);
    case AlgorithmVariant::BaselineAdaptiveMultiproj:
        return std::make_unique<MultiprojAdaptiveLearner>(config, domain);
    }
    throw UsageError("make_learner: unknown variant");
}

} // namespace oneproj
