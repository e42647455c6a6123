#pragma once

#include <cstddef>

#include "oneproj/vector_ops.hpp"

namespace oneproj {

enum class DomainKind { Ball, Box, Ellipsoid };

// Feasible domain X with Euclidean projection, distance and membership.
// All domains contain the origin; non-centered inputs are rejected at
// construction instead of being shifted.
//
// Supported shapes:
//   ball:      { x : ||x||_2 <= r }
//   box:       { x : lower_i <= x_i <= upper_i }, lower_i <= 0 <= upper_i
//   ellipsoid: { x : x' diag(E) x <= c }, E_ii > 0, c > 0
//
// Instances are immutable after construction and safe to share across
// threads.
class FeasibleDomain {
public:
    static FeasibleDomain ball(double radius, std::size_t dim);
    // Convenience overload matching configs that carry an explicit center;
    // the center must be the origin.
    static FeasibleDomain ball(double radius, const Vec& center);
    static FeasibleDomain box(Vec lower, Vec upper);
    static FeasibleDomain ellipsoid(Vec diag, double level);

    DomainKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }

    // Supremum distance between two member points. 2r for a ball,
    // ||upper - lower||_2 for a box, 2*sqrt(c / min_i E_ii) for an ellipsoid.
    double diameter() const { return diameter_; }

    // Supremum of ||x||_2 over members (attained). At most diameter() since
    // the origin is a member.
    double max_norm() const;

    // tau_proj: all membership/idempotence guarantees hold to this absolute
    // tolerance (1e-10 relative to the diameter).
    double projection_tolerance() const { return 1e-10 * diameter_; }

    // Euclidean projection argmin_{x in X} ||x - p||_2. Interior points are
    // returned unchanged, bit for bit.
    Vec project(const Vec& p) const;

    // ||p - project(p)||_2; zero (up to tau_proj) iff p is a member.
    double distance(const Vec& p) const;

    // Signed constraint residual: <= 0 inside, > 0 outside. Length units for
    // ball/box; quadratic-form units (p'Ep - c) for the ellipsoid.
    double residual(const Vec& p) const;

    bool contains(const Vec& p, double tol) const;

    // Y = { x : ||x||_2 <= diameter() }: the smallest origin-centered
    // Euclidean ball guaranteed to contain every member (0 in X and
    // diam(X) <= D give ||x|| <= D).
    FeasibleDomain surrogate_ball() const;

    // Shape parameters, for serialization and reports.
    double ball_radius() const;
    const Vec& box_lower() const;
    const Vec& box_upper() const;
    const Vec& ellipsoid_diag() const;
    double ellipsoid_level() const;

private:
    FeasibleDomain() = default;

    DomainKind kind_ = DomainKind::Ball;
    std::size_t dim_ = 0;
    double diameter_ = 0.0;
    double radius_ = 0.0; // ball
    Vec lower_, upper_;   // box
    Vec diag_;            // ellipsoid
    double level_ = 0.0;  // ellipsoid
};

} // namespace oneproj
