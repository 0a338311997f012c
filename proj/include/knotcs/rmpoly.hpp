#pragma once

// The defining polynomial phi_{n,m}(x, ca) of parabolic/cone representations
// for J(2n,-2m), its x-derivative, dense coefficient extraction, and the
// representation residual used to certify roots.
//
// With v = x + ca (ca = M^2 + M^{-2} = 2*cos(alpha) on the unit circle),
//     z  = 2 + (v - 2) * x * S_{n-1}(v)^2
//     phi = S_m(z) + [ -1 + x * S_{n-1}(v) * (S_n(v) + (1 - v) S_{n-1}(v)) ] * S_{m-1}(z).
// For real ca the coefficients in x are real; the polynomial has degree 2nm.
// x is a root iff (x, M) determines a representation of the knot group,
// certified by the residual of rho(w)^m rho(t)^{-1} rho(w)^{-m} rho(s) = I
// written as S * W^m * T^{-1} * W^{-m} = I.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "algebra.hpp"

namespace knotcs {

// One point on a traced branch: cone angle, meridian eigenvalue, trace
// coordinate x, and the derived traces v = tr(S T^{-1}) = x + M^2 + M^{-2},
// z = tr(W).
struct TracePoint {
    double alpha;
    cplx M;
    cplx x;
    cplx v;
    cplx z;
};

namespace detail {

// Scalar-generic cores (T = double on the real spherical locus, complex
// elsewhere).  Keeping the real path in pure double arithmetic makes sign
// tests on phi exact.
template <class T>
T rm_eval_t(int n, int m, const T& x, const T& ca) {
    const T v = x + ca;
    const T sn = cheb(n, v), sn1 = cheb(n - 1, v);
    const T z = 2.0 + (v - 2.0) * x * sn1 * sn1;
    const T cf = -1.0 + x * sn1 * (sn + (1.0 - v) * sn1);
    return cheb(m, z) + cf * cheb(m - 1, z);
}

template <class T>
T rm_dx_t(int n, int m, const T& x, const T& ca) {
    const T v = x + ca; // dv/dx = 1
    const ChebJet<T> jn = cheb_jet(n, v), jn1 = cheb_jet(n - 1, v);
    const T sn = jn.value, dsn = jn.deriv;
    const T sn1 = jn1.value, dsn1 = jn1.deriv;

    const T z = 2.0 + (v - 2.0) * x * sn1 * sn1;
    const T zp = sn1 * sn1 * (x + v - 2.0) + 2.0 * (v - 2.0) * x * sn1 * dsn1;

    const T inner = sn + (1.0 - v) * sn1;
    const T cf = -1.0 + x * sn1 * inner;
    const T cfp = sn1 * inner + x * dsn1 * inner + x * sn1 * (dsn - sn1 + (1.0 - v) * dsn1);

    const ChebJet<T> jm = cheb_jet(m, z), jm1 = cheb_jet(m - 1, z);
    return jm.deriv * zp + cfp * jm1.value + cf * jm1.deriv * zp;
}

} // namespace detail

inline cplx meridian_ca(cplx M) {
    if (M == cplx(0.0)) throw std::domain_error("meridian eigenvalue must be nonzero");
    const cplx M2 = M * M;
    return M2 + 1.0 / M2;
}

// phi_{n,m}(x) at meridian eigenvalue M.
inline cplx rm_eval(KnotParams p, cplx x, cplx M) {
    return detail::rm_eval_t<cplx>(p.n, p.m, x, meridian_ca(M));
}

// d phi / d x, analytically (no finite differences).
inline cplx rm_dx(KnotParams p, cplx x, cplx M) {
    return detail::rm_dx_t<cplx>(p.n, p.m, x, meridian_ca(M));
}

inline TracePoint make_trace_point(KnotParams p, double alpha, cplx x) {
    const cplx M = std::polar(1.0, alpha / 2.0);
    const cplx v = x + meridian_ca(M);
    const cplx z = 2.0 + (v - 2.0) * x * cheb(p.n - 1, v) * cheb(p.n - 1, v);
    return {alpha, M, x, v, z};
}

// Dense coefficients of phi in x (degree 2nm, lowest first), recovered by
// evaluation at scaled roots of unity and an inverse discrete Fourier
// transform.  The scale radius 2 keeps node values well separated in
// magnitude across the degrees that occur here.
inline std::vector<cplx> rm_coeffs(KnotParams p, cplx M) {
    const cplx ca = meridian_ca(M);
    const int deg = 2 * p.n * p.m;
    const int N = deg + 1;
    const double radius = 2.0;
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<cplx> f(N);
    for (int j = 0; j < N; ++j) {
        const cplx xj = radius * std::polar(1.0, two_pi * j / N);
        f[j] = detail::rm_eval_t<cplx>(p.n, p.m, xj, ca);
    }

    std::vector<cplx> coeffs(N);
    double rk = 1.0;
    for (int k = 0; k < N; ++k) {
        cplx acc(0.0);
        for (int j = 0; j < N; ++j)
            acc += f[j] * std::polar(1.0, -two_pi * double(j) * double(k) / N);
        coeffs[k] = acc / (double(N) * rk);
        rk *= radius;
    }

    // Interpolation consistency probe at an off-node point.
    const cplx probe = 0.37 * radius * std::polar(1.0, 0.7);
    cplx horner(0.0);
    for (int k = N - 1; k >= 0; --k) horner = horner * probe + coeffs[k];
    const cplx direct = detail::rm_eval_t<cplx>(p.n, p.m, probe, ca);
    double scale = 1.0;
    for (const cplx& fj : f) scale = std::max(scale, std::abs(fj));
    if (std::abs(horner - direct) > 1e-6 * scale)
        throw std::runtime_error("rm_coeffs: interpolation is singular or ill-conditioned");
    return coeffs;
}

// Max-norm deviation of S * W^m * T^{-1} * W^{-m} from the identity; zero
// exactly when (x, M) yields a representation.
inline double rep_residual(KnotParams p, cplx x, cplx M) {
    const Holonomy h = build_holonomy(p, x, M);
    const SL2 wm = mat_pow(h.W, p.m);
    const SL2 wmi = mat_pow(h.W, -p.m);
    const SL2 r = h.S * wm * h.T.inverse() * wmi;
    const SL2 id = SL2::identity();
    double res = 0.0;
    res = std::max(res, std::abs(r.a - id.a));
    res = std::max(res, std::abs(r.b - id.b));
    res = std::max(res, std::abs(r.c - id.c));
    res = std::max(res, std::abs(r.d - id.d));
    return res;
}

} // namespace knotcs
