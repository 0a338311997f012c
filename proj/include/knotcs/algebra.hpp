#pragma once

// Chebyshev-like polynomial evaluation and SL(2,C) matrix algebra.
//
// The polynomials S_k satisfy the three-term recurrence
//     S_0 = 1,  S_1 = v,  S_k = v*S_{k-1} - S_{k-2},
// extended to negative indices by S_{-1} = 0 and S_k = -S_{-k-2} (k <= -2).
// At v = 2*cos(t) they reduce to sin((k+1)t)/sin(t), which serves as the
// test oracle.  All trace computations for the J(2n,-2m) knot family reduce
// to evaluations of S_k at moderate |k|, so the forward recurrence is used
// directly.

#include <complex>
#include <stdexcept>
#include <utility>

namespace knotcs {

using cplx = std::complex<double>;

// Knot family parameters: J(2n,-2m) has 2n vertical and 2m horizontal
// crossings.  Both entries must be >= 1.
struct KnotParams {
    int n;
    int m;
};

// S_k(v) for any integer k (scalar type T is double or std::complex<double>).
template <class T>
T cheb(int k, const T& v) {
    if (k >= 0) {
        T sm(0.0), s(1.0); // S_{-1}, S_0
        for (int i = 0; i < k; ++i) {
            T nx = v * s - sm;
            sm = s;
            s = nx;
        }
        return s;
    }
    if (k == -1) return T(0.0);
    return -cheb(-k - 2, v);
}

// (S_k, S_{k-1}) in one call.
template <class T>
std::pair<T, T> cheb_pair(int k, const T& v) {
    return {cheb(k, v), cheb(k - 1, v)};
}

template <class T>
struct ChebJet {
    T value; // S_k(v)
    T deriv; // d/dv S_k(v)
};

// S_k and its v-derivative via the differentiated recurrence
//     S'_k = S_{k-1} + v*S'_{k-1} - S'_{k-2},  S'_0 = 0, S'_1 = 1.
template <class T>
ChebJet<T> cheb_jet(int k, const T& v) {
    if (k == -1) return {T(0.0), T(0.0)};
    if (k < -1) {
        ChebJet<T> j = cheb_jet(-k - 2, v);
        return {-j.value, -j.deriv};
    }
    if (k == 0) return {T(1.0), T(0.0)};
    T sm(1.0), s = v;  // S_0, S_1
    T dm(0.0), d(1.0); // S'_0, S'_1
    for (int i = 0; i < k - 1; ++i) {
        T ns = v * s - sm;
        sm = s; // now S_{j}
        s = ns; // S_{j+1}
        T nd = sm + v * d - dm;
        dm = d;
        d = nd;
    }
    return {s, d};
}

// 2x2 complex matrix with unit determinant.
struct SL2 {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    cplx trace() const { return a + d; }
    cplx det() const { return a * d - b * c; }

    SL2 operator*(const SL2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    // Inverse of a unimodular matrix.
    SL2 inverse() const { return {d, -b, -c, a}; }

    static SL2 identity() { return {}; }
};

// V^k through the trace recursion: with v = tr(V),
//     V^k = [ S_k - d*S_{k-1}     b*S_{k-1}      ]
//           [ c*S_{k-1}           S_k - a*S_{k-1} ]
// valid for every integer k (negative powers included).
inline SL2 mat_pow(const SL2& V, int k) {
    if (std::abs(V.det() - 1.0) > 1e-10)
        throw std::invalid_argument("mat_pow: matrix is not unimodular");
    const cplx v = V.trace();
    const auto [sk, skm1] = cheb_pair(k, v);
    return {sk - V.d * skm1, V.b * skm1, V.c * skm1, sk - V.a * skm1};
}

// Holonomy images of the two meridian generators s, t and of the word
// w = (t^{-1} s)^n (t s^{-1})^n, for meridian eigenvalue M and trace
// coordinate x (v = x + M^2 + M^{-2}):
//     rho(s) = [ M  1 ]      rho(t) = [ M    0   ]
//              [ 0 1/M ],             [ 2-v 1/M ].
// W = rho(w) is assembled from its closed-form entries; W_star is W with
// M replaced by 1/M.  z = tr(W).
struct Holonomy {
    SL2 S, T, W, W_star;
    cplx z;
};

inline Holonomy build_holonomy(KnotParams p, cplx x, cplx M) {
    if (M == cplx(0.0)) throw std::domain_error("build_holonomy: M must be nonzero");
    const cplx M2 = M * M, Mi = 1.0 / M, Mi2 = Mi * Mi;
    const cplx v = x + M2 + Mi2;
    const auto [sn, sn1] = cheb_pair(p.n, v);

    Holonomy h;
    h.S = {M, 1.0, 0.0, Mi};
    h.T = {M, 0.0, 2.0 - v, Mi};

    auto w_entries = [&](cplx m2, cplx mi2, cplx mm, cplx mmi) -> SL2 {
        SL2 W;
        W.a = sn * sn + (2.0 - 2.0 * v) * sn * sn1 +
              (1.0 + 2.0 * mi2 - 2.0 * v - mi2 * v + v * v) * sn1 * sn1;
        W.b = (mmi - mm) * sn * sn1 + (mm * v - mm - mmi) * sn1 * sn1;
        W.c = (2.0 - v) * W.b;
        W.d = sn * sn - 2.0 * sn * sn1 + (1.0 + 2.0 * m2 - m2 * v) * sn1 * sn1;
        return W;
    };
    h.W = w_entries(M2, Mi2, M, Mi);
    h.W_star = w_entries(Mi2, M2, Mi, M); // M <-> 1/M
    h.z = h.W.trace();
    return h;
}

} // namespace knotcs
