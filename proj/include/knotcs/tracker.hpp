#pragma once

// Root location and continuation for the cone-angle family  phi_{n,m}(x; alpha).
//
// On the spherical side (alpha0 < alpha <= pi) the two relevant roots are real
// and are continued as an ordered pair; they collide at the regime-change
// angle alpha0 and move into the complex plane on the hyperbolic side
// (0 < alpha < alpha0), where the geometric root is the member of the
// conjugate pair selected by the orientation sign Q = Im(A * conj(B)) >= 0
// built from the longitude entries.  All continuation is predictor-free
// Newton correction with adaptive step control: a step is accepted only if
// the corrected roots keep residual |phi| < 1e-9 and move by less than the
// jump bound, otherwise the step is halved.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rmpoly.hpp"

namespace knotcs {

namespace detail {

inline constexpr double kJumpBound = 0.2;
inline constexpr double kResidualTol = 1e-9;

inline int signum(double x) { return (x > 0.0) - (x < 0.0); }

inline void validate_params(KnotParams p, const char* who) {
    if (p.n < 1 || p.m < 1)
        throw std::invalid_argument(std::string(who) + ": knot parameters require n >= 1 and m >= 1");
}

// Damped-free Newton on the real locus (real ca keeps phi real).
inline double newton_real(int n, int m, double x, double ca,
                          int iters = 60, double tol = 1e-13) {
    for (int i = 0; i < iters; ++i) {
        const double f = rm_eval_t<double>(n, m, x, ca);
        const double d = rm_dx_t<double>(n, m, x, ca);
        if (d == 0.0) break;
        const double step = f / d;
        x -= step;
        if (std::abs(step) < tol) break;
    }
    return x;
}

inline cplx newton_cplx(int n, int m, cplx x, double ca,
                        int iters = 60, double tol = 1e-13) {
    const cplx cac(ca);
    for (int i = 0; i < iters; ++i) {
        const cplx f = rm_eval_t<cplx>(n, m, x, cac);
        const cplx d = rm_dx_t<cplx>(n, m, x, cac);
        if (d == cplx(0.0)) break;
        const cplx step = f / d;
        x -= step;
        if (std::abs(step) < tol) break;
    }
    return x;
}

// Critical point of phi in x (secant iteration on d phi/dx), used to probe
// whether the real pair still brackets a sign change.
inline double crit_point(int n, int m, double x, double ca,
                         int iters = 80, double tol = 1e-14) {
    double x0 = x, x1 = x + 1e-6;
    double f0 = rm_dx_t<double>(n, m, x0, ca);
    double f1 = rm_dx_t<double>(n, m, x1, ca);
    for (int i = 0; i < iters; ++i) {
        if (f1 == f0) break;
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1; f0 = f1;
        x1 = x2; f1 = rm_dx_t<double>(n, m, x2, ca);
        if (std::abs(x1 - x0) < tol) break;
    }
    return x1;
}

struct PairState {
    double x1, x2; // ordered: x1 > x2
    double alpha;
};

enum class PairStatus { reached_target, gap_stop, stalled };

// Adaptive continuation of the ordered real pair from st.alpha to a_to.
// Acceptance requires both residuals small, both moves under the jump bound
// and under the pair separation itself (a colliding pair moves on the scale
// of its own gap; a larger move means Newton hopped onto a different real
// branch past the collision), the ordering preserved, and the gap not
// collapsing by more than half in a single step (which would indicate the
// branches have crossed).  Terminates
// early with gap_stop once the gap drops below stop_gap, or stalled when the
// step cannot be shrunk further.  base_div controls the initial step as a
// fraction of the full range.
inline PairStatus step_pair(int n, int m, PairState& st, double a_to,
                            double stop_gap = 0.0, double min_step = 1e-13,
                            double base_div = 100.0) {
    double a = st.alpha, x1 = st.x1, x2 = st.x2;
    const double dir = (a_to >= a) ? 1.0 : -1.0;
    const double base = std::abs(a_to - a) / base_div;
    if (base == 0.0) return PairStatus::reached_target;
    double step = dir * base;
    while ((a_to - a) * dir > 1e-15) {
        if ((a + step - a_to) * dir > 0.0) step = a_to - a;
        bool ok = false;
        const double gap = x1 - x2;
        double s = step, anew = a, y1 = x1, y2 = x2;
        while (std::abs(s) >= min_step ||
               (std::abs(a_to - a) <= 2.0 * std::abs(s) && std::abs(s) >= 1e-16)) {
            anew = (std::abs(a_to - a) <= std::abs(s)) ? a_to : a + s;
            const double ca = 2.0 * std::cos(anew);
            y1 = newton_real(n, m, x1, ca);
            y2 = newton_real(n, m, x2, ca);
            const double newgap = y1 - y2;
            const double move_cap = std::min(kJumpBound, std::max(gap, newgap));
            if (std::abs(rm_eval_t<double>(n, m, y1, ca)) < kResidualTol &&
                std::abs(rm_eval_t<double>(n, m, y2, ca)) < kResidualTol &&
                std::abs(y1 - x1) < move_cap && std::abs(y2 - x2) < move_cap &&
                newgap > 0.0 && newgap > 0.5 * gap) {
                ok = true;
                break;
            }
            s *= 0.5;
        }
        if (!ok) {
            st = {x1, x2, a};
            return PairStatus::stalled;
        }
        x1 = y1; x2 = y2; a = anew;
        if (x1 - x2 < stop_gap) {
            st = {x1, x2, a};
            return PairStatus::gap_stop;
        }
        step = s * 1.9;
        if (std::abs(step) > base) step = dir * base;
    }
    st = {x1, x2, a};
    return PairStatus::reached_target;
}

// Adaptive continuation of a single (generally complex) root.  Throws on
// stall.  The final step snaps exactly onto a_to.
inline cplx track_c(int n, int m, cplx x, double a_from, double a_to,
                    double min_step = 1e-13, double base_div = 100.0) {
    if (a_to == a_from) return x;
    double a = a_from;
    const double dir = (a_to >= a_from) ? 1.0 : -1.0;
    const double base = std::max(std::abs(a_to - a_from) / base_div, 1e-9);
    double step = dir * base;
    while ((a_to - a) * dir > 1e-15) {
        if ((a + step - a_to) * dir > 0.0) step = a_to - a;
        bool ok = false;
        double s = step, anew = a;
        cplx y = x;
        while (std::abs(s) >= min_step ||
               (std::abs(a_to - a) <= 2.0 * std::abs(s) && std::abs(s) >= 1e-16)) {
            anew = (std::abs(a_to - a) <= std::abs(s)) ? a_to : a + s;
            const double ca = 2.0 * std::cos(anew);
            y = newton_cplx(n, m, x, ca);
            if (std::abs(rm_eval_t<cplx>(n, m, y, cplx(ca))) < kResidualTol &&
                std::abs(y - x) < kJumpBound) {
                ok = true;
                break;
            }
            s *= 0.5;
        }
        if (!ok)
            throw std::runtime_error("continuation stalled at alpha=" + std::to_string(a));
        x = y; a = anew;
        step = s * 1.9;
        if (std::abs(step) > base) step = dir * base;
    }
    return x;
}

// Orientation sign selecting the geometric member of a conjugate root pair:
// Q = Im(A * conj(B)) with A = S_n - S_{n-1}, B = S_{n-1} - S_{n-2} at
// v = x + 2*cos(alpha).
inline double sign_Q(int n, cplx x, double ca) {
    const cplx v = x + ca;
    const cplx A = cheb(n, v) - cheb(n - 1, v);
    const cplx B = cheb(n - 1, v) - cheb(n - 2, v);
    return std::imag(A * std::conj(B));
}

struct Alpha0Detail {
    double alpha0;        // regime-change cone angle
    double x0;            // trace coordinate of the colliding root pair
    double collision_gap; // pair gap at the last angle where the pair stays separable
};

// Two-phase location of the regime change: (1) continue the real pair down
// from pi until its gap falls below 1e-3; (2) track the critical point of
// phi between the pair and bisect on the sign of phi there -- the sign flips
// exactly when the two real roots cease to exist.
inline Alpha0Detail locate_alpha0(int n, int m, double tol = 1e-12,
                                  double phase1_div = 100.0) {
    if (tol < 1e-13)
        throw std::invalid_argument("find_alpha0: tol must be at least 1e-13");
    const double pi = std::numbers::pi;
    const double floor_a = 2.0 * pi / 3.0 - 0.2;
    const double q = 4.0 * n * m + 1.0;
    PairState st{2.0 - 2.0 * std::cos(pi * (2 * m + 1) / q),
                 2.0 - 2.0 * std::cos(pi * (2 * m - 1) / q), pi};
    const PairStatus status = step_pair(n, m, st, floor_a, 1e-3, 1e-13, phase1_div);
    if (status == PairStatus::reached_target ||
        (status == PairStatus::stalled && st.x1 - st.x2 >= 1e-3))
        throw std::runtime_error("find_alpha0: no regime change found in [2*pi/3, pi)");

    double a_hi = st.alpha;
    double xc = crit_point(n, m, 0.5 * (st.x1 + st.x2), 2.0 * std::cos(a_hi));
    const int sgn = signum(rm_eval_t<double>(n, m, xc, 2.0 * std::cos(a_hi)));

    // Expanding scan below a_hi until the sign of phi at the critical point flips.
    double d = 1e-7;
    double a_lo = 0.0;
    bool bracketed = false;
    while (!bracketed) {
        const double a_try = a_hi - d;
        if (a_try < floor_a)
            throw std::runtime_error("find_alpha0: no regime change found in [2*pi/3, pi)");
        const double xc2 = crit_point(n, m, xc, 2.0 * std::cos(a_try));
        const double h = rm_eval_t<double>(n, m, xc2, 2.0 * std::cos(a_try));
        if (signum(h) != sgn) {
            a_lo = a_try;
            bracketed = true;
        } else {
            a_hi = a_try;
            xc = xc2;
            d *= 2.0;
        }
    }

    double lo = a_lo, hi = a_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double xc2 = crit_point(n, m, xc, 2.0 * std::cos(mid));
        const double h = rm_eval_t<double>(n, m, xc2, 2.0 * std::cos(mid));
        if (signum(h) == sgn) hi = mid; else lo = mid;
        xc = xc2;
    }
    const double a0 = 0.5 * (lo + hi);
    xc = crit_point(n, m, xc, 2.0 * std::cos(a0));

    // Measure how closely the real pair approaches before separability is lost.
    PairState pg = st;
    step_pair(n, m, pg, a0, 0.0, 1e-13, phase1_div);
    return {a0, xc, pg.x1 - pg.x2};
}

struct Handoff {
    double alpha;
    cplx x;
};

// Seed the complex branch just below the regime change: the conjugate pair
// leaves the collision point along the imaginary direction with
// Im(x) ~ sqrt(2 * delta * phi_alpha / phi_xx).
inline Handoff hyper_handoff(int n, int m, const Alpha0Detail& ad, double delta = 1e-4) {
    const double a0 = ad.alpha0, x0 = ad.x0;
    const double fd = 1e-6;
    const double pa = (rm_eval_t<double>(n, m, x0, 2.0 * std::cos(a0 + fd)) -
                       rm_eval_t<double>(n, m, x0, 2.0 * std::cos(a0 - fd))) / (2.0 * fd);
    const double ca0 = 2.0 * std::cos(a0);
    const double pxx = (rm_dx_t<double>(n, m, x0 + fd, ca0) -
                        rm_dx_t<double>(n, m, x0 - fd, ca0)) / (2.0 * fd);
    const double im = std::sqrt(std::abs(2.0 * delta * pa / pxx));
    cplx x = newton_cplx(n, m, cplx(x0, im), 2.0 * std::cos(a0 - delta));
    if (!(std::abs(x.imag()) > 1e-12))
        throw std::runtime_error("hyperbolic handoff collapsed onto the real locus");
    if (x.imag() < 0.0) x = std::conj(x);
    return {a0 - delta, x};
}

} // namespace detail

// The two real roots at alpha = pi that continue into the cone-manifold
// branch:  x_{1,2} = 2 - 2*cos(pi*(2m +- 1)/(4nm+1)), ordered x1 > x2.
inline std::pair<double, double> spherical_seeds(KnotParams p) {
    detail::validate_params(p, "spherical_seeds");
    const double q = 4.0 * p.n * p.m + 1.0;
    const double pi = std::numbers::pi;
    return {2.0 - 2.0 * std::cos(pi * (2 * p.m + 1) / q),
            2.0 - 2.0 * std::cos(pi * (2 * p.m - 1) / q)};
}

// All 2nm roots of phi at cone angle alpha (Aberth-Ehrlich on the dense
// coefficients, then Newton polish against the exact evaluation).  Restricted
// to alpha in (0.1, pi], where the leading coefficient stays well away from
// zero.  Returned sorted by (Re, Im).
inline std::vector<cplx> all_roots(KnotParams p, double alpha, int max_iter = 500) {
    detail::validate_params(p, "all_roots");
    const double pi = std::numbers::pi;
    if (!(alpha > 0.1 && alpha <= pi))
        throw std::domain_error("all_roots: alpha must lie in (0.1, pi]");
    const std::vector<cplx> c = rm_coeffs(p, std::polar(1.0, alpha / 2.0));
    const int deg = static_cast<int>(c.size()) - 1;
    const cplx lead = c[deg];
    if (std::abs(lead) < 1e-12)
        throw std::runtime_error("all_roots: leading coefficient vanished");

    // Fujiwara bound on the root moduli fixes the initial circle.
    double radius = 0.0;
    for (int j = 1; j <= deg; ++j)
        radius = std::max(radius, std::pow(std::abs(c[deg - j] / lead), 1.0 / j));
    radius = 2.0 * radius + 0.1;

    std::vector<cplx> z(deg);
    for (int i = 0; i < deg; ++i)
        z[i] = radius * std::polar(1.0, 2.0 * pi * i / deg + 0.37);

    // Evaluate p, p', and the running bound eb = sum |c_k| |t|^k on the
    // evaluation rounding error: once |p(z)| <= O(deg) * eps * eb the value is
    // indistinguishable from an exact root in double precision, and the
    // correction can only dither.
    const auto horner3 = [&](cplx t) {
        cplx pv(0.0), dv(0.0);
        double eb = 0.0;
        const double at = std::abs(t);
        for (int k = deg; k >= 0; --k) {
            dv = dv * t + pv;
            pv = pv * t + c[k];
            eb = eb * at + std::abs(c[k]);
        }
        return std::tuple<cplx, cplx, double>{pv, dv, eb};
    };
    const double eval_floor = 8.0 * deg * std::numeric_limits<double>::epsilon();

    bool converged = false;
    for (int it = 0; it < max_iter && !converged; ++it) {
        bool settled = true;
        for (int i = 0; i < deg; ++i) {
            const auto [pv, dv, eb] = horner3(z[i]);
            if (std::abs(pv) <= eval_floor * eb) continue;
            const cplx w = (dv == cplx(0.0)) ? cplx(1e-8) : pv / dv;
            cplx sum(0.0);
            for (int j = 0; j < deg; ++j) {
                if (j == i) continue;
                const cplx diff = z[i] - z[j];
                if (std::abs(diff) < 1e-300) continue;
                sum += 1.0 / diff;
            }
            const cplx den = 1.0 - w * sum;
            const cplx delta = (den == cplx(0.0)) ? w : w / den;
            z[i] -= delta;
            if (std::abs(delta) / (1.0 + std::abs(z[i])) >= 1e-14) settled = false;
        }
        converged = settled;
    }
    if (!converged)
        throw std::runtime_error("all_roots: iteration cap reached without convergence");

    const double ca = 2.0 * std::cos(alpha);
    for (cplx& r : z) r = detail::newton_cplx(p.n, p.m, r, ca);
    std::sort(z.begin(), z.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return z;
}

enum class Regime { spherical, hyperbolic };

struct BranchSample {
    double alpha;
    cplx x;
};

// A continued branch of roots.  Invariants: alpha is monotone along samples,
// consecutive x differ by less than the jump bound, every sample satisfies
// |phi| < 1e-9, and spherical paths stay within 1e-8 of the real axis.
struct BranchPath {
    KnotParams params{1, 1};
    Regime regime{Regime::spherical};
    std::vector<BranchSample> samples;
};

inline BranchPath track_branch(KnotParams p, cplx seed, double alpha_from, double alpha_to,
                               int steps = 2000, double jump_bound = detail::kJumpBound) {
    detail::validate_params(p, "track_branch");
    if (steps < 0) throw std::invalid_argument("track_branch: steps must be nonnegative");
    if (!(jump_bound > 0.0)) throw std::invalid_argument("track_branch: jump bound must be positive");
    {
        const cplx ca(2.0 * std::cos(alpha_from));
        if (!(std::abs(detail::rm_eval_t<cplx>(p.n, p.m, seed, ca)) < detail::kResidualTol))
            throw std::invalid_argument("track_branch: seed does not satisfy |phi| < 1e-9 at alpha_from");
    }
    BranchPath path;
    path.params = p;
    path.regime = std::abs(seed.imag()) < 1e-8 ? Regime::spherical : Regime::hyperbolic;
    path.samples.push_back({alpha_from, seed});
    if (steps == 0 || alpha_to == alpha_from) return path;

    const double dir = (alpha_to >= alpha_from) ? 1.0 : -1.0;
    const double base = std::abs(alpha_to - alpha_from) / steps;
    double a = alpha_from, step = dir * base;
    cplx x = seed;
    while ((alpha_to - a) * dir > 1e-15) {
        if ((a + step - alpha_to) * dir > 0.0) step = alpha_to - a;
        bool ok = false;
        double s = step, anew = a;
        cplx y = x;
        for (int halvings = 0; halvings <= 20; ++halvings) {
            anew = (std::abs(alpha_to - a) <= std::abs(s)) ? alpha_to : a + s;
            const double ca = 2.0 * std::cos(anew);
            y = detail::newton_cplx(p.n, p.m, x, ca);
            if (std::abs(detail::rm_eval_t<cplx>(p.n, p.m, y, cplx(ca))) < detail::kResidualTol &&
                std::abs(y - x) < jump_bound) {
                ok = true;
                break;
            }
            s *= 0.5;
        }
        if (!ok)
            throw std::runtime_error("track_branch: continuation failure at alpha=" + std::to_string(a));
        x = y; a = anew;
        path.samples.push_back({a, x});
        step = s * 1.9;
        if (std::abs(step) > base) step = dir * base;
    }
    return path;
}

struct Alpha0Result {
    double alpha0;
    double collision_gap;
};

// Cone angle at which the two real spherical roots collide and the geometry
// changes from spherical to hyperbolic.  Throws if no such change occurs in
// [2*pi/3, pi).
inline Alpha0Result find_alpha0(KnotParams p, double tol = 1e-12) {
    detail::validate_params(p, "find_alpha0");
    const detail::Alpha0Detail ad = detail::locate_alpha0(p.n, p.m, tol);
    return {ad.alpha0, ad.collision_gap};
}

// The geometric root (Q >= 0 member of the conjugate pair) at a hyperbolic
// cone angle 0 < alpha < alpha0.
inline cplx geometric_root(KnotParams p, double alpha) {
    detail::validate_params(p, "geometric_root");
    const detail::Alpha0Detail ad = detail::locate_alpha0(p.n, p.m);
    if (!(alpha > 0.0 && alpha < ad.alpha0))
        throw std::domain_error("geometric_root: alpha outside the hyperbolic range (0, alpha0)");
    const detail::Handoff h = detail::hyper_handoff(p.n, p.m, ad);
    const double a_eval = std::max(alpha, 1e-6);
    cplx x = detail::track_c(p.n, p.m, h.x, h.alpha, a_eval);
    if (detail::sign_Q(p.n, x, 2.0 * std::cos(a_eval)) < 0.0) x = std::conj(x);
    return x;
}

} // namespace knotcs
