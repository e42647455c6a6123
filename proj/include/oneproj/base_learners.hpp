#pragma once

#include <cmath>

#include "oneproj/vector_ops.hpp"

namespace oneproj {

// Projection onto the surrogate ball { y : ||y|| <= radius } is a radial
// rescale, applied in place.
inline void rescale_onto_ball(Vec& y, double radius) {
    const double n = norm2(y);
    if (n > radius) {
        const double c = radius / n;
        for (double& x : y) x *= c;
    }
}

// Self-confident step size eta = mult * D / sqrt(delta + sum of squared
// gradient norms). The round's own gradient is accumulated before the step
// size is computed.
inline double self_confident_step(double radius, double mult, double delta,
                                  double sq_grad_sum) {
    return mult * radius / std::sqrt(delta + sq_grad_sum);
}

// Fixed-step online gradient descent over the surrogate ball. Starts at
// the origin unless an explicit start point (a member of the ball) is
// given.
class OgdLearner {
public:
    OgdLearner(std::size_t dim, double step_size, double radius)
        : y_(zeros(dim)), eta_(step_size), radius_(radius) {}
    OgdLearner(Vec start, double step_size, double radius)
        : y_(std::move(start)), eta_(step_size), radius_(radius) {
        rescale_onto_ball(y_, radius_);
    }

    void step(const Vec& grad) {
        require_finite(grad, "ogd step gradient");
        y_ = add_scaled(y_, -eta_, grad);
        rescale_onto_ball(y_, radius_);
    }

    const Vec& decision() const { return y_; }
    double step_size() const { return eta_; }

private:
    Vec y_;
    double eta_;
    double radius_;
};

// Scale-free online gradient descent over the surrogate ball, with
// eta_t = mult * D / sqrt(delta + sum_{s=start}^{t} ||grad_s||^2).
class SogdLearner {
public:
    SogdLearner(std::size_t dim, double radius, double delta,
                double numerator_mult = 1.0, int start_round = 1)
        : y_(zeros(dim)), radius_(radius), delta_(delta), mult_(numerator_mult),
          start_round_(start_round) {}
    SogdLearner(Vec start, double radius, double delta,
                double numerator_mult = 1.0, int start_round = 1)
        : y_(std::move(start)), radius_(radius), delta_(delta),
          mult_(numerator_mult), start_round_(start_round) {
        rescale_onto_ball(y_, radius_);
    }

    void step(const Vec& grad) {
        require_finite(grad, "sogd step gradient");
        sq_grad_sum_ += dot(grad, grad);
        const double eta = self_confident_step(radius_, mult_, delta_, sq_grad_sum_);
        y_ = add_scaled(y_, -eta, grad);
        rescale_onto_ball(y_, radius_);
    }

    const Vec& decision() const { return y_; }
    double sq_grad_sum() const { return sq_grad_sum_; }
    double current_step_size() const {
        return self_confident_step(radius_, mult_, delta_, sq_grad_sum_);
    }
    int start_round() const { return start_round_; }

private:
    Vec y_;
    double radius_;
    double delta_;
    double mult_;
    int start_round_;
    double sq_grad_sum_ = 0.0;
};

} // namespace oneproj
