#pragma once

// Longitude eigenvalue and the Schlafli integrand.
//
// For a root x of phi at meridian eigenvalue M, the longitude eigenvalue is
//     L = -(M^2 A - B) / (A - M^2 B),
//     A = S_n(v) - S_{n-1}(v),  B = S_{n-1}(v) - S_{n-2}(v),  v = x + M^2 + M^{-2}.
// It satisfies W_21 * L + W*_21 = 0, degenerates to L = -1 at M = 1 and to
// L = +1 at M = i, and obeys L(conj(x)) = 1/conj(L(x)) so that Arg(L^2) does
// not depend on which member of a conjugate root pair is used.
//
// The cone-manifold volume derivative is beta(alpha)/2 with beta the
// continuous argument of L^2 along the geometric branch; the pointwise
// integrand operations below return principal values in (-pi, pi], and the
// quadrature engine restores continuity by unwrapping (see cs.hpp).

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracker.hpp"

namespace knotcs {

struct LongitudeValue {
    cplx L;          // longitude eigenvalue
    double arg_L;    // principal argument of L
    double abs_L;    // modulus (>= 1 on the geometric member)
};

inline cplx longitude_L(int n, cplx x, cplx M) {
    if (M == cplx(0.0)) throw std::domain_error("longitude_L: M must be nonzero");
    const cplx M2 = M * M;
    const cplx v = x + M2 + 1.0 / M2;
    const cplx A = cheb(n, v) - cheb(n - 1, v);
    const cplx B = cheb(n - 1, v) - cheb(n - 2, v);
    const cplx den = A - M2 * B;
    const cplx L = -(M2 * A - B) / den;
    if (!std::isfinite(L.real()) || !std::isfinite(L.imag()))
        throw std::runtime_error("longitude_L: vanishing denominator A - M^2 B");
    return L;
}

inline LongitudeValue longitude_value(int n, cplx x, cplx M) {
    const cplx L = longitude_L(n, x, M);
    return {L, std::arg(L), std::abs(L)};
}

// Reduce an angle to the principal interval (-pi, pi].
inline double wrap_angle(double t) {
    const double pi = std::numbers::pi;
    double r = std::remainder(t, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

// Principal-value Schlafli integrand on the hyperbolic side: Arg(L^2) at the
// geometric root.  (Identical for both members of the conjugate pair.)
inline double integrand_hyp(KnotParams p, double alpha) {
    const cplx x = geometric_root(p, alpha);
    const cplx M = std::polar(1.0, std::max(alpha, 1e-6) / 2.0);
    const cplx L = longitude_L(p.n, x, M);
    return std::arg(L * L);
}

// Principal-value integrand on the spherical side: the wrapped sum of the
// two branch arguments Arg(L(x1)) + Arg(L(x2)).  Defined for alpha in
// (alpha0, pi]; exactly zero at alpha = pi where L = +1 on both branches.
inline double integrand_sph(KnotParams p, double alpha) {
    detail::validate_params(p, "integrand_sph");
    const double pi = std::numbers::pi;
    const detail::Alpha0Detail ad = detail::locate_alpha0(p.n, p.m);
    if (!(alpha > ad.alpha0 && alpha <= pi))
        throw std::domain_error("integrand_sph: alpha outside the spherical range (alpha0, pi]");
    auto [x1, x2] = spherical_seeds(p);
    detail::PairState st{x1, x2, pi};
    const detail::PairStatus status = detail::step_pair(p.n, p.m, st, alpha);
    if (status != detail::PairStatus::reached_target) {
        const double ca = 2.0 * std::cos(alpha);
        st.x1 = detail::newton_real(p.n, p.m, st.x1, ca);
        st.x2 = detail::newton_real(p.n, p.m, st.x2, ca);
        st.alpha = alpha;
    }
    const cplx M = std::polar(1.0, alpha / 2.0);
    return wrap_angle(std::arg(longitude_L(p.n, cplx(st.x1), M)) +
                      std::arg(longitude_L(p.n, cplx(st.x2), M)));
}

// Composite Simpson rule for a callable integrand.
template <class F>
double simpson(F&& f, double a, double b, int intervals) {
    if (intervals < 2 || intervals % 2 != 0)
        throw std::invalid_argument("simpson: intervals must be even and at least 2");
    const double h = (b - a) / intervals;
    double acc = 0.0;
    for (int i = 0; i <= intervals; ++i) {
        const double t = (i == intervals) ? b : a + i * h;
        const double ft = f(t);
        if (!std::isfinite(ft))
            throw std::runtime_error("simpson: integrand not finite at t=" + std::to_string(t));
        const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * ft;
    }
    return acc * h / 3.0;
}

// Composite Simpson rule on pre-sampled equidistant values (intervals = size-1).
inline double simpson_samples(const std::vector<double>& f, double a, double b) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("simpson_samples: need an even number of intervals (odd sample count >= 3)");
    for (double v : f)
        if (!std::isfinite(v)) throw std::runtime_error("simpson_samples: non-finite sample");
    const double h = (b - a) / n;
    double acc = f.front() + f.back();
    for (int i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return acc * h / 3.0;
}

namespace detail {

// In-place unwrap of a principal-value sequence: each element is shifted by
// a cumulative multiple of 2*pi so consecutive differences stay within pi.
// Anchored at the front (first element unchanged).
inline void unwrap_forward(std::vector<double>& f) {
    if (f.empty()) return;
    const double pi = std::numbers::pi;
    double off = 0.0, prev_raw = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double d = f[i] - prev_raw;
        prev_raw = f[i];
        if (d > pi) off -= 2.0 * pi;
        else if (d < -pi) off += 2.0 * pi;
        f[i] += off;
    }
}

// Same, anchored at the back (last element unchanged).
inline void unwrap_backward(std::vector<double>& f) {
    if (f.empty()) return;
    const double pi = std::numbers::pi;
    double off = 0.0, prev_raw = f.back();
    for (int i = static_cast<int>(f.size()) - 2; i >= 0; --i) {
        const double d = f[i] - prev_raw;
        prev_raw = f[i];
        if (d > pi) off -= 2.0 * pi;
        else if (d < -pi) off += 2.0 * pi;
        f[i] += off;
    }
}

} // namespace detail

} // namespace knotcs
