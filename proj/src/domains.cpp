#include "oneproj/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oneproj {

namespace {

void check_point(const FeasibleDomain& d, const Vec& p, const char* what) {
    if (p.size() != d.dim()) throw UsageError(std::string(what) + ": dimension mismatch");
    require_finite(p, what);
}

} // namespace

FeasibleDomain FeasibleDomain::ball(double radius, std::size_t dim) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw UsageError("ball: radius must be positive and finite");
    if (dim == 0) throw UsageError("ball: dimension must be >= 1");
    FeasibleDomain d;
    d.kind_ = DomainKind::Ball;
    d.dim_ = dim;
    d.radius_ = radius;
    d.diameter_ = 2.0 * radius;
    return d;
}

FeasibleDomain FeasibleDomain::ball(double radius, const Vec& center) {
    for (double c : center)
        if (c != 0.0)
            throw UsageError("ball: only origin-centered domains are supported");
    return ball(radius, center.size());
}

FeasibleDomain FeasibleDomain::box(Vec lower, Vec upper) {
    if (lower.size() != upper.size() || lower.empty())
        throw UsageError("box: bounds must be non-empty and of equal dimension");
    require_finite(lower, "box lower");
    require_finite(upper, "box upper");
    double diam_sq = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] > 0.0 || upper[i] < 0.0)
            throw UsageError("box: must contain the origin (lower_i <= 0 <= upper_i)");
        const double w = upper[i] - lower[i];
        diam_sq += w * w;
    }
    FeasibleDomain d;
    d.kind_ = DomainKind::Box;
    d.dim_ = lower.size();
    d.lower_ = std::move(lower);
    d.upper_ = std::move(upper);
    d.diameter_ = std::sqrt(diam_sq);
    if (!(d.diameter_ > 0.0)) throw UsageError("box: degenerate (zero diameter)");
    return d;
}

FeasibleDomain FeasibleDomain::ellipsoid(Vec diag, double level) {
    if (diag.empty()) throw UsageError("ellipsoid: empty diagonal");
    require_finite(diag, "ellipsoid diag");
    if (!(level > 0.0) || !std::isfinite(level))
        throw UsageError("ellipsoid: level must be positive and finite");
    double min_e = std::numeric_limits<double>::infinity();
    for (double e : diag) {
        if (!(e > 0.0)) throw UsageError("ellipsoid: axes must be positive (E_ii > 0)");
        min_e = std::min(min_e, e);
    }
    FeasibleDomain d;
    d.kind_ = DomainKind::Ellipsoid;
    d.dim_ = diag.size();
    d.diag_ = std::move(diag);
    d.level_ = level;
    d.diameter_ = 2.0 * std::sqrt(level / min_e);
    return d;
}

double FeasibleDomain::max_norm() const {
    switch (kind_) {
    case DomainKind::Ball:
        return radius_;
    case DomainKind::Box: {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            const double m = std::max(-lower_[i], upper_[i]);
            s += m * m;
        }
        return std::sqrt(s);
    }
    case DomainKind::Ellipsoid: {
        double min_e = std::numeric_limits<double>::infinity();
        for (double e : diag_) min_e = std::min(min_e, e);
        return std::sqrt(level_ / min_e);
    }
    }
    throw UsageError("max_norm: unknown domain kind");
}

double FeasibleDomain::residual(const Vec& p) const {
    check_point(*this, p, "residual");
    switch (kind_) {
    case DomainKind::Ball:
        return norm2(p) - radius_;
    case DomainKind::Box: {
        double r = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dim_; ++i)
            r = std::max({r, lower_[i] - p[i], p[i] - upper_[i]});
        return r;
    }
    case DomainKind::Ellipsoid: {
        double q = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) q += diag_[i] * p[i] * p[i];
        return q - level_;
    }
    }
    throw UsageError("residual: unknown domain kind");
}

bool FeasibleDomain::contains(const Vec& p, double tol) const {
    if (tol < 0.0) throw UsageError("contains: tolerance must be >= 0");
    return residual(p) <= tol;
}

Vec FeasibleDomain::project(const Vec& p) const {
    check_point(*this, p, "project");
    switch (kind_) {
    case DomainKind::Ball: {
        const double n = norm2(p);
        if (n <= radius_) return p;
        return scaled(p, radius_ / n);
    }
    case DomainKind::Box: {
        Vec q(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            q[i] = std::clamp(p[i], lower_[i], upper_[i]);
        return q;
    }
    case DomainKind::Ellipsoid: {
        // Interior points project to themselves.
        double qform = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) qform += diag_[i] * p[i] * p[i];
        if (qform <= level_) return p;

        // KKT for min ||x-p||^2 s.t. x'Ex = c gives x_i = p_i / (1 + lam*E_i)
        // with lam > 0 solving
        //   phi(lam) = sum_i E_i p_i^2 / (1 + lam*E_i)^2 - c = 0.
        // phi is strictly decreasing and convex on lam >= 0 with phi(0) > 0,
        // so Newton from the left is monotone; a bisection bracket guards
        // against rounding at the endpoints.
        const auto phi = [&](double lam, double* dphi) {
            double f = -level_, df = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
                const double den = 1.0 + lam * diag_[i];
                const double w = diag_[i] * p[i] * p[i] / (den * den);
                f += w;
                df -= 2.0 * w * diag_[i] / den;
            }
            if (dphi) *dphi = df;
            return f;
        };

        double lo = 0.0, hi = 1.0;
        while (phi(hi, nullptr) > 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300) throw ContractViolation("ellipsoid projection: bracket search failed");
        }

        double lam = lo;
        for (int it = 0; it < 200; ++it) {
            double dphi = 0.0;
            const double f = phi(lam, &dphi);
            if (f > 0.0)
                lo = lam;
            else
                hi = lam;
            double next;
            if (dphi < 0.0) {
                next = lam - f / dphi;
                if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
            } else {
                next = 0.5 * (lo + hi);
            }
            const double tol_root = std::max(1e-12, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next));
            if (std::abs(next - lam) <= tol_root) {
                lam = next;
                break;
            }
            lam = next;
        }

        Vec q(dim_);
        for (std::size_t i = 0; i < dim_; ++i) q[i] = p[i] / (1.0 + lam * diag_[i]);
        return q;
    }
    }
    throw UsageError("project: unknown domain kind");
}

double FeasibleDomain::distance(const Vec& p) const {
    check_point(*this, p, "distance");
    if (kind_ == DomainKind::Ball) {
        // Closed form; identical to ||p - project(p)|| but avoids the copy.
        return std::max(0.0, norm2(p) - radius_);
    }
    return dist2(p, project(p));
}

FeasibleDomain FeasibleDomain::surrogate_ball() const { return ball(diameter_, dim_); }

double FeasibleDomain::ball_radius() const {
    if (kind_ != DomainKind::Ball) throw UsageError("ball_radius: not a ball");
    return radius_;
}
const Vec& FeasibleDomain::box_lower() const {
    if (kind_ != DomainKind::Box) throw UsageError("box_lower: not a box");
    return lower_;
}
const Vec& FeasibleDomain::box_upper() const {
    if (kind_ != DomainKind::Box) throw UsageError("box_upper: not a box");
    return upper_;
}
const Vec& FeasibleDomain::ellipsoid_diag() const {
    if (kind_ != DomainKind::Ellipsoid) throw UsageError("ellipsoid_diag: not an ellipsoid");
    return diag_;
}
double FeasibleDomain::ellipsoid_level() const {
    if (kind_ != DomainKind::Ellipsoid) throw UsageError("ellipsoid_level: not an ellipsoid");
    return level_;
}

} // namespace oneproj
