#pragma once

#include <cstdint>
#include <vector>

namespace oneproj {

// Exact accounting of the three expensive operations: projections onto the
// feasible domain X, gradient queries of f_t, and function-value queries of
// f_t. Totals are maintained alongside a per-round breakdown.
class ComplexityCounters {
public:
    struct RoundCounts {
        std::int64_t proj_x = 0;
        std::int64_t grad_q = 0;
        std::int64_t val_q = 0;
    };

    void begin_round() { per_round_.emplace_back(); }

    void count_projection() {
        ++total_.proj_x;
        if (!per_round_.empty()) ++per_round_.back().proj_x;
    }
    void count_gradient_query() {
        ++total_.grad_q;
        if (!per_round_.empty()) ++per_round_.back().grad_q;
    }
    void count_value_query() {
        ++total_.val_q;
        if (!per_round_.empty()) ++per_round_.back().val_q;
    }

    std::int64_t projections_onto_x() const { return total_.proj_x; }
    std::int64_t gradient_queries() const { return total_.grad_q; }
    std::int64_t value_queries() const { return total_.val_q; }
    const std::vector<RoundCounts>& per_round() const { return per_round_; }

private:
    RoundCounts total_;
    std::vector<RoundCounts> per_round_;
};

} // namespace oneproj
