#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "oneproj/counters.hpp"
#include "oneproj/domains.hpp"
#include "oneproj/environment.hpp"
#include "oneproj/problem_constants.hpp"
#include "oneproj/vector_ops.hpp"

namespace oneproj {

enum class AlgorithmVariant {
    EfficientDynamicWorstcase,
    EfficientDynamicSmallloss,
    EfficientAdaptive,
    EfficientIntervalDynamic,
    BaselineAder,          // worst-case pool, fixed meta rate
    BaselineAderSmallloss, // small-loss pool, self-confident meta rate
    BaselineAdaptiveMultiproj,
};

const char* variant_name(AlgorithmVariant v);
AlgorithmVariant variant_from_name(const std::string& name);

struct AlgorithmConfig {
    AlgorithmVariant variant = AlgorithmVariant::EfficientDynamicWorstcase;
    ProblemConstants constants;
    std::vector<double> pool;        // step-size pool (dynamic pools, Ader)
    bool self_confident_meta = false;
    double fixed_epsilon = 0.0;      // meta rate when not self-confident
    double threshold_scale = 1.0;    // cover-based variants
    double sogd_numerator_mult = 1.0;
};

// Step-size pool eta_i = 2^{i-1} (D/G) sqrt(5 / (2T)),
// N = ceil(log2(1 + 2T/5) / 2) + 1, fixed meta rate
// eps = sqrt(ln N / (1 + G^2 D^2 T)).
AlgorithmConfig configure_dynamic_worstcase(const ProblemConstants& constants);

// Step-size pool eta_i = 2^{i-1} sqrt(5 D^2 / (1 + 8LGDT)),
// N = ceil(log2((5D^2 + 2D^2 T)(1 + 8LGDT) / (5D^2)) / 2) + 1,
// self-confident meta rate.
AlgorithmConfig configure_dynamic_smallloss(const ProblemConstants& constants);

AlgorithmConfig configure_adaptive(const ProblemConstants& constants,
                                   double threshold_scale = 1.0);

// Small-loss pool for the inner dynamic machines plus the interval-dynamic
// threshold (which needs the pool size N).
AlgorithmConfig configure_interval_dynamic(const ProblemConstants& constants,
                                           double threshold_scale = 1.0);

AlgorithmConfig configure_baseline_ader(const ProblemConstants& constants,
                                        bool smallloss_pool = false);

AlgorithmConfig configure_baseline_adaptive_multiproj(
    const ProblemConstants& constants, double threshold_scale = 1.0);

// Builds the config for a variant with its standard parameter derivation.
AlgorithmConfig configure(AlgorithmVariant variant,
                          const ProblemConstants& constants,
                          double threshold_scale = 1.0);

// Internal state snapshot for reports.
struct Diagnostics {
    std::vector<double> meta_weights;
    std::int64_t active_learners = 0;
    std::vector<std::int64_t> active_learner_ids; // cover-based variants
    std::int64_t marker_count = 0;
    std::vector<std::int64_t> marker_rounds;
};

// Uniform round interface: the learner holds the committed decision x_t;
// observe() consumes the round-t feedback and advances to x_{t+1}. Every
// emitted decision is a member of X (within 10 * tau_proj).
class OnlineLearner {
public:
    virtual ~OnlineLearner() = default;

    virtual const Vec& decision() const = 0;
    virtual void observe(RoundFeedback& fb) = 0;

    ComplexityCounters& counters() { return counters_; }
    const ComplexityCounters& counters() const { return counters_; }

    virtual Diagnostics diagnostics() const = 0;

protected:
    ComplexityCounters counters_;
};

std::unique_ptr<OnlineLearner> make_learner(const AlgorithmConfig& config,
                                            const FeasibleDomain& domain);

} // namespace oneproj
