#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "oneproj/errors.hpp"

namespace oneproj {

// Decision vectors, gradients and comparators are plain dense vectors.
// Dimensions are small (d ~ 10) so no linear-algebra library is pulled in.
using Vec = std::vector<double>;

inline bool is_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline void require_finite(const Vec& v, const char* what) {
    if (!is_finite(v)) throw UsageError(std::string(what) + ": non-finite coordinate");
}

inline void require_same_dim(const Vec& a, const Vec& b, const char* what) {
    if (a.size() != b.size()) throw UsageError(std::string(what) + ": dimension mismatch");
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Vec zeros(std::size_t d) { return Vec(d, 0.0); }

// r = a + c*b
inline Vec add_scaled(const Vec& a, double c, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scaled(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

// acc += c*b, in place; used for convex combinations.
inline void axpy(Vec& acc, double c, const Vec& b) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * b[i];
}

} // namespace oneproj
