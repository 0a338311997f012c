#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <knotcs/tracker.hpp>

using namespace knotcs;
using Catch::Matchers::WithinAbs;

namespace {

// Regime-change angles, frozen from independent high-precision runs.
struct Alpha0Ref {
    int n, m;
    double alpha0;
};
constexpr Alpha0Ref kAlpha0Refs[] = {
    {1, 1, 2.094395102393195}, {2, 1, 2.574140778131840}, {3, 1, 2.750685152010280},
    {4, 1, 2.843209532683532}, {2, 2, 2.847642272262783}, {3, 2, 2.942465754372979},
    {4, 2, 2.990939179603150}, {3, 3, 3.007517657179940}, {4, 3, 3.040474611156828},
    {4, 4, 3.065453796328835},
};

double min_root_distance(const std::vector<cplx>& roots, cplx x) {
    double best = 1e300;
    for (const cplx& r : roots) best = std::min(best, std::abs(r - x));
    return best;
}

} // namespace

TEST_CASE("spherical_seeds closed form and ordering", "[tracker][seeds]") {
    const double pi = std::numbers::pi;
    for (int n = 1; n <= 4; ++n) {
        for (int m = 1; m <= 4; ++m) {
            const auto [x1, x2] = spherical_seeds({n, m});
            const double q = 4.0 * n * m + 1.0;
            REQUIRE_THAT(x1, WithinAbs(2.0 - 2.0 * std::cos(pi * (2 * m + 1) / q), 1e-15));
            REQUIRE_THAT(x2, WithinAbs(2.0 - 2.0 * std::cos(pi * (2 * m - 1) / q), 1e-15));
            REQUIRE(x1 > x2);
            REQUIRE(x2 > 0.0);
        }
    }
    REQUIRE_THROWS_AS(spherical_seeds({0, 1}), std::invalid_argument);
}

TEST_CASE("find_alpha0 reproduces the reference angles", "[tracker][alpha0]") {
    for (const auto& ref : kAlpha0Refs) {
        const Alpha0Result r = find_alpha0({ref.n, ref.m});
        INFO("(n,m) = (" << ref.n << "," << ref.m << ")");
        REQUIRE_THAT(r.alpha0, WithinAbs(ref.alpha0, 1e-9));
        REQUIRE(r.collision_gap >= 0.0);
        REQUIRE(r.collision_gap < 1e-3);
    }
}

TEST_CASE("find_alpha0 is stable under continuation-step doubling", "[tracker][alpha0]") {
    for (const KnotParams p : {KnotParams{2, 1}, KnotParams{4, 2}, KnotParams{4, 4}}) {
        const auto a = detail::locate_alpha0(p.n, p.m, 1e-12, 100.0);
        const auto b = detail::locate_alpha0(p.n, p.m, 1e-12, 200.0);
        REQUIRE_THAT(a.alpha0, WithinAbs(b.alpha0, 1e-9));
    }
}

TEST_CASE("find_alpha0 validates its tolerance", "[tracker][alpha0]") {
    REQUIRE_THROWS_AS(find_alpha0({2, 1}, 1e-14), std::invalid_argument);
    REQUIRE_THROWS_AS(find_alpha0({0, 2}), std::invalid_argument);
}

TEST_CASE("all_roots returns the full root multiset", "[tracker][allroots]") {
    const double pi = std::numbers::pi;
    for (const KnotParams p : {KnotParams{1, 1}, KnotParams{2, 1}, KnotParams{2, 2},
                               KnotParams{3, 2}}) {
        for (double alpha : {0.5, 1.5, 2.5, pi}) {
            const auto roots = all_roots(p, alpha);
            REQUIRE(static_cast<int>(roots.size()) == 2 * p.n * p.m);
            const cplx M = std::polar(1.0, alpha / 2.0);
            for (const cplx& r : roots)
                REQUIRE(std::abs(rm_eval(p, r, M)) < 1e-8);
            // real coefficients: the multiset is closed under conjugation
            for (const cplx& r : roots)
                REQUIRE(min_root_distance(roots, std::conj(r)) < 1e-7);
        }
    }
}

TEST_CASE("all_roots contains the spherical seeds at alpha = pi", "[tracker][allroots]") {
    const double pi = std::numbers::pi;
    for (const KnotParams p : {KnotParams{2, 1}, KnotParams{3, 3}}) {
        const auto roots = all_roots(p, pi);
        const auto [x1, x2] = spherical_seeds(p);
        REQUIRE(min_root_distance(roots, cplx(x1)) < 1e-9);
        REQUIRE(min_root_distance(roots, cplx(x2)) < 1e-9);
    }
}

TEST_CASE("all_roots is deterministic and validates alpha", "[tracker][allroots]") {
    const auto a = all_roots({2, 1}, 1.7);
    const auto b = all_roots({2, 1}, 1.7);
    REQUIRE(a == b);
    REQUIRE_THROWS_AS(all_roots({2, 1}, 0.05), std::domain_error);
    REQUIRE_THROWS_AS(all_roots({2, 1}, 3.5), std::domain_error);
}

TEST_CASE("track_branch follows the spherical pair", "[tracker][branch]") {
    const double pi = std::numbers::pi;
    const KnotParams p{2, 1};
    const auto [x1, x2] = spherical_seeds(p);
    const double a0 = find_alpha0(p).alpha0;
    const double target = a0 + 0.05;

    const BranchPath path = track_branch(p, cplx(x1), pi, target, 100);
    REQUIRE(path.regime == Regime::spherical);
    REQUIRE(path.samples.front().alpha == pi);
    REQUIRE(path.samples.back().alpha == target);
    const cplx Mt = std::polar(1.0, target / 2.0);

    double prev = pi + 1.0;
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        const BranchSample& s = path.samples[i];
        REQUIRE(s.alpha < prev + 1e-15); // monotone decreasing here
        prev = s.alpha;
        REQUIRE(std::abs(s.x.imag()) < 1e-8);
        const cplx M = std::polar(1.0, s.alpha / 2.0);
        REQUIRE(std::abs(rm_eval(p, s.x, M)) < 1e-9);
        if (i > 0)
            REQUIRE(std::abs(s.x - path.samples[i - 1].x) < 0.2);
    }
}

TEST_CASE("track_branch handles degenerate requests", "[tracker][branch]") {
    const double pi = std::numbers::pi;
    const KnotParams p{2, 1};
    const auto [x1, x2] = spherical_seeds(p);

    const BranchPath still = track_branch(p, cplx(x1), pi, 2.8, 0);
    REQUIRE(still.samples.size() == 1);
    REQUIRE(still.samples.front().x == cplx(x1));

    const BranchPath same = track_branch(p, cplx(x1), pi, pi, 50);
    REQUIRE(same.samples.size() == 1);

    REQUIRE_THROWS_AS(track_branch(p, cplx(x1 + 0.05), pi, 2.8, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(track_branch(p, cplx(x1), pi, 2.8, -3), std::invalid_argument);
}

TEST_CASE("track_branch classifies hyperbolic seeds", "[tracker][branch]") {
    const KnotParams p{2, 1};
    const cplx seed = geometric_root(p, 1.8);
    const BranchPath path = track_branch(p, seed, 1.8, 1.2, 60);
    REQUIRE(path.regime == Regime::hyperbolic);
    REQUIRE(path.samples.back().alpha == 1.2);
    for (const BranchSample& s : path.samples)
        REQUIRE(std::abs(s.x.imag()) > 1e-8);
}

TEST_CASE("geometric_root lies on the polynomial and in the upper regime", "[tracker][geometric]") {
    for (const KnotParams p : {KnotParams{1, 1}, KnotParams{2, 1}, KnotParams{3, 2}}) {
        for (double alpha : {0.5, 1.2, 1.9}) {
            const cplx x = geometric_root(p, alpha);
            const cplx M = std::polar(1.0, alpha / 2.0);
            REQUIRE(std::abs(rm_eval(p, x, M)) < 1e-9);
            REQUIRE(std::abs(x.imag()) > 1e-6);
            REQUIRE(detail::sign_Q(p.n, x, 2.0 * std::cos(alpha)) >= 0.0);
            // it is one of the 2nm roots
            const auto roots = all_roots(p, alpha);
            double best = 1e300;
            for (const cplx& r : roots) best = std::min(best, std::abs(r - x));
            REQUIRE(best < 1e-8);
        }
    }
}

TEST_CASE("geometric_root rejects non-hyperbolic angles", "[tracker][geometric]") {
    const KnotParams p{2, 1};
    const double a0 = find_alpha0(p).alpha0;
    REQUIRE_THROWS_AS(geometric_root(p, a0 + 0.1), std::domain_error);
    REQUIRE_THROWS_AS(geometric_root(p, 3.1), std::domain_error);
    REQUIRE_THROWS_AS(geometric_root(p, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(geometric_root(p, -0.5), std::domain_error);
}

TEST_CASE("tracked roots agree across conjugate selection", "[tracker][geometric]") {
    // real coefficients: the conjugate of any root is also a root
    const KnotParams p{3, 1};
    const double alpha = 1.4;
    const cplx x = geometric_root(p, alpha);
    const cplx M = std::polar(1.0, alpha / 2.0);
    REQUIRE(std::abs(rm_eval(p, std::conj(x), M)) < 1e-9);
}
