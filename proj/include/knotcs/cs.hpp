#pragma once

// Chern-Simons invariants assembled from the Schlafli integrand.
//
// The invariant is accumulated as
//     cs = 1/2 * lens + ( I_hyp + I_sph ) / (4*pi^2)   (then reduced mod m)
// where lens = (m - n)/(4nm + 1) mod 1 is the lens-space contribution of the
// alpha -> 0 limit, and I_* are integrals of the continuous longitude
// argument beta(alpha) over the hyperbolic [lower, alpha0] and spherical
// [alpha0, pi] ranges.  beta is sampled as principal values of Arg(L^2)
// (hyperbolic) and Arg(L1) + Arg(L2) (spherical), made continuous by
// unwrapping each range and splicing the hyperbolic range onto the spherical
// value at the junction by the unique 2*pi multiple; the spherical range is
// anchored at beta(pi) = 0, which also forces beta(0) = 0 in the knot limit.
//
// Moduli: knot complements are defined mod 1/2; the orbifold with cone angle
// 2*pi/k is defined mod 1/k (k even) or 1/(2k) (k odd); its k-fold cyclic
// covering is k times the orbifold value mod 1 (k even) or mod 1/2 (k odd).

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "schlafli.hpp"

namespace knotcs {

// A value together with the modulus it is defined under; 0 <= value < modulus.
struct ModValue {
    double value;
    double modulus;
};

inline double mod_reduce(double v, double modulus) {
    if (!(modulus > 0.0))
        throw std::invalid_argument("mod_reduce: modulus must be positive");
    double r = v - modulus * std::floor(v / modulus);
    if (r >= modulus) r -= modulus;
    if (r < 0.0) r += modulus;
    return r;
}

// Exact lens-space contribution L(4nm+1, 2m(2nm+1)... ) of the alpha -> 0
// limit: (m - n)/(4nm + 1) mod 1.
inline ModValue lens_cs(KnotParams p) {
    detail::validate_params(p, "lens_cs");
    const double q = 4.0 * p.n * p.m + 1.0;
    return {mod_reduce((p.m - p.n) / q, 1.0), 1.0};
}

// Hyperbolic cone angle 2*pi/k on the knot; k >= 3.
struct OrbifoldSpec {
    KnotParams params{1, 1};
    int k{3};
};

namespace detail {

// A fully sampled two-regime quadrature of beta(alpha) over
// [a_lower, alpha0] u [alpha0, pi], plus the node data that produced it.
struct Assembly {
    double alpha0{};
    double x0{};
    double I_hyp{}, I_sph{};
    double lens_frac{};
    double total_raw{}; // 1/2 * lens_frac + (I_hyp + I_sph)/(4 pi^2), unreduced

    // spherical nodes, ascending alpha in [alpha0, pi]
    std::vector<double> sph_alpha, sph_x1, sph_x2;
    std::vector<double> sph_arg1, sph_arg2; // principal Arg L per branch
    std::vector<double> sph_beta;           // unwrapped Arg L1 + Arg L2

    // hyperbolic nodes, ascending alpha in [a_lower, alpha0]
    std::vector<double> hyp_alpha;
    std::vector<cplx> hyp_x;              // geometric (Q >= 0) root
    std::vector<double> hyp_arg;          // principal Arg(L^2)
    std::vector<double> hyp_beta;         // unwrapped and spliced
};

inline Assembly assemble(KnotParams p, double a_lower, int n_hyp, int n_sph,
                         const Alpha0Detail* pre = nullptr) {
    validate_params(p, "cs");
    if (n_hyp < 2 || n_hyp % 2 != 0 || n_sph < 2 || n_sph % 2 != 0)
        throw std::invalid_argument("cs: interval counts must be even and at least 2");
    const double pi = std::numbers::pi;
    const Alpha0Detail ad = pre ? *pre : locate_alpha0(p.n, p.m);
    if (!(a_lower >= 0.0 && a_lower < ad.alpha0))
        throw std::domain_error("cs: lower cone angle is not inside the hyperbolic range [0, alpha0)");

    Assembly out;
    out.alpha0 = ad.alpha0;
    out.x0 = ad.x0;

    // ---- spherical range [alpha0, pi], filled descending from the pi seeds ----
    const int Ns = n_sph;
    out.sph_alpha.resize(Ns + 1);
    out.sph_x1.resize(Ns + 1);
    out.sph_x2.resize(Ns + 1);
    out.sph_arg1.resize(Ns + 1);
    out.sph_arg2.resize(Ns + 1);
    std::vector<double> fs(Ns + 1);
    for (int i = 0; i <= Ns; ++i)
        out.sph_alpha[i] = (i == Ns) ? pi : ad.alpha0 + (pi - ad.alpha0) * i / Ns;

    const auto record_sph = [&](int i, double x1, double x2) {
        const double a = out.sph_alpha[i];
        const cplx M = std::polar(1.0, a / 2.0);
        out.sph_x1[i] = x1;
        out.sph_x2[i] = x2;
        out.sph_arg1[i] = std::arg(longitude_L(p.n, cplx(x1), M));
        out.sph_arg2[i] = std::arg(longitude_L(p.n, cplx(x2), M));
        fs[i] = out.sph_arg1[i] + out.sph_arg2[i];
    };

    const auto [s1, s2] = spherical_seeds(p);
    record_sph(Ns, s1, s2);
    PairState st{s1, s2, pi};
    for (int i = Ns - 1; i >= 1; --i) {
        const double a = out.sph_alpha[i];
        PairState next = st;
        const PairStatus stat = step_pair(p.n, p.m, next, a, 0.0, 1e-13, 1.0);
        if (stat != PairStatus::reached_target) {
            const double ca = 2.0 * std::cos(a);
            next.x1 = newton_real(p.n, p.m, st.x1, ca);
            next.x2 = newton_real(p.n, p.m, st.x2, ca);
            next.alpha = a;
        }
        st = next;
        record_sph(i, st.x1, st.x2);
    }
    {
        // junction: both branches have collapsed onto x0
        const cplx M0 = std::polar(1.0, ad.alpha0 / 2.0);
        const double arg0 = std::arg(longitude_L(p.n, cplx(ad.x0), M0));
        out.sph_x1[0] = out.sph_x2[0] = ad.x0;
        out.sph_arg1[0] = out.sph_arg2[0] = arg0;
        fs[0] = 2.0 * arg0;
    }
    unwrap_backward(fs); // anchored at beta(pi) = 0
    out.sph_beta = fs;
    out.I_sph = simpson_samples(fs, ad.alpha0, pi);

    // ---- hyperbolic range [a_lower, alpha0], filled descending from the handoff ----
    const int Nh = n_hyp;
    out.hyp_alpha.resize(Nh + 1);
    out.hyp_x.resize(Nh + 1);
    out.hyp_arg.resize(Nh + 1);
    std::vector<double> fh(Nh + 1);
    for (int i = 0; i <= Nh; ++i)
        out.hyp_alpha[i] = (i == Nh) ? ad.alpha0 : a_lower + (ad.alpha0 - a_lower) * i / Nh;

    {
        const cplx M0 = std::polar(1.0, ad.alpha0 / 2.0);
        const cplx L0 = longitude_L(p.n, cplx(ad.x0), M0);
        fh[Nh] = std::arg(L0 * L0);
        out.hyp_x[Nh] = cplx(ad.x0);
        out.hyp_arg[Nh] = fh[Nh];
    }

    const double step_h = (ad.alpha0 - a_lower) / Nh;
    Handoff ho = hyper_handoff(p.n, p.m, ad, std::min(1e-4, 0.5 * step_h));
    cplx cur = ho.x;
    if (sign_Q(p.n, cur, 2.0 * std::cos(ho.alpha)) < 0.0) cur = std::conj(cur);
    double cura = ho.alpha;
    for (int i = Nh - 1; i >= 0; --i) {
        const double a_eval = std::max(out.hyp_alpha[i], 1e-6);
        cur = track_c(p.n, p.m, cur, cura, a_eval, 1e-13, 1.0);
        cura = a_eval;
        const double ca = 2.0 * std::cos(a_eval);
        const cplx yq = (sign_Q(p.n, cur, ca) >= 0.0) ? cur : std::conj(cur);
        const cplx M = std::polar(1.0, a_eval / 2.0);
        const cplx L = longitude_L(p.n, yq, M);
        out.hyp_x[i] = yq;
        out.hyp_arg[i] = std::arg(L * L);
        fh[i] = out.hyp_arg[i];
    }
    unwrap_forward(fh);
    // splice onto the spherical junction value by the unique 2*pi multiple
    const double two_pi = 2.0 * pi;
    const double shift = two_pi * std::round((fs[0] - fh[Nh]) / two_pi);
    for (double& b : fh) b += shift;
    out.hyp_beta = fh;
    out.I_hyp = simpson_samples(fh, a_lower, ad.alpha0);

    out.lens_frac = mod_reduce(double(p.m - p.n) / (4.0 * p.n * p.m + 1.0), 1.0);
    out.total_raw = 0.5 * out.lens_frac + (out.I_hyp + out.I_sph) / (4.0 * pi * pi);
    return out;
}

} // namespace detail

// Chern-Simons invariant of the hyperbolic knot complement (alpha -> 0),
// defined mod 1/2.
inline ModValue cs_knot(KnotParams p, int hyp_intervals = 20000, int sph_intervals = 20000) {
    const detail::Assembly a = detail::assemble(p, 0.0, hyp_intervals, sph_intervals);
    return {mod_reduce(a.total_raw, 0.5), 0.5};
}

// Chern-Simons invariant of the cone-orbifold with angle 2*pi/k, defined
// mod 1/k (k even) or 1/(2k) (k odd).  Throws std::domain_error when the
// orbifold is not hyperbolic, i.e. 2*pi/k >= alpha0.
inline ModValue cs_orbifold(const OrbifoldSpec& spec, int hyp_intervals = 200, int sph_intervals = 200) {
    detail::validate_params(spec.params, "cs_orbifold");
    if (spec.k < 3)
        throw std::invalid_argument("cs_orbifold: k must be at least 3");
    const double lower = 2.0 * std::numbers::pi / spec.k;
    const detail::Alpha0Detail ad = detail::locate_alpha0(spec.params.n, spec.params.m);
    // Margin beyond the bisection accuracy: a range narrower than that is
    // numerically empty (e.g. (1,1) with k=3, where alpha0 is exactly 2*pi/3).
    if (!(lower < ad.alpha0 - 1e-9))
        throw std::domain_error("cs_orbifold: cone angle 2*pi/k is not below alpha0; the orbifold is not hyperbolic");
    const detail::Assembly a = detail::assemble(spec.params, lower, hyp_intervals, sph_intervals, &ad);
    const double modulus = (spec.k % 2 == 0) ? 1.0 / spec.k : 0.5 / spec.k;
    return {mod_reduce(a.total_raw, modulus), modulus};
}

// Chern-Simons invariant of the k-fold cyclic covering branched over the
// knot: k times the orbifold value, mod 1 (k even) or mod 1/2 (k odd).
inline ModValue cs_cover(const OrbifoldSpec& spec, int hyp_intervals = 200, int sph_intervals = 200) {
    const ModValue orb = cs_orbifold(spec, hyp_intervals, sph_intervals);
    const double modulus = (spec.k % 2 == 0) ? 1.0 : 0.5;
    return {mod_reduce(spec.k * orb.value, modulus), modulus};
}

} // namespace knotcs
