#include "oracles.hpp"

#include "ptnls/criteria.hpp"
#include "ptnls/error.hpp"
#include "ptnls/functionals.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ptnls;

namespace {

const SystemParams kFig2{0.5, 1.0, 1.0, 1.0, -0.5, 3};
const SystemParams kFig1{0.5, 1.0, 4.0, -1.0, -0.5, 3};
const SystemParams kManakov{0.5, 1.0, 1.0, 1.0, 1.0, 3};

InitialFunctionals make_initial(double s0, double e0, double x0, double y0, double s1 = 0.0) {
    InitialFunctionals f;
    f.stokes.s0 = s0;
    f.stokes.s1 = s1;
    f.energy = e0;
    f.msw = x0;
    f.mswRate = y0;
    return f;
}

double F_direct(const InitialFunctionals& f, const SystemParams& p, double t) {
    const double n = p.dim, g = p.gamma;
    return f.msw + f.mswRate * t + 8.0 * n / (n + 2.0) * f.energy * t * t +
           4.0 * p.kappa / (g * g) * f.stokes.s0 * (std::exp(2 * g * t) - 2 * g * t - 1);
}

} // namespace

TEST_CASE("criterion constants") {
    const CriterionConstants c = constants({0.5, 1.0, 1.0, 1.0, 0.0, 3});
    CHECK(c.c1 == doctest::Approx(23.0).epsilon(1e-15));
    CHECK(*c.c2 == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(c.c3 == doctest::Approx(19.2).epsilon(1e-15));
    CHECK(c.c4 == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
    CHECK(*c.beta == doctest::Approx(12.0).epsilon(1e-15));

    // Attractive-repulsive branch: min{1, g1 + g sqrt(g1/g2), g2 + g sqrt(g2/g1)}.
    CHECK(*constants(kFig2).c2 == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(*constants({0.5, 1.0, 4.0, 1.0, -1.0, 3}).c2 ==
          doctest::Approx(0.8 * std::min({1.0, 4.0 - 2.0, 1.0 - 0.5})).epsilon(1e-15));
    CHECK(constants({0.5, 1.0, 3.0, 2.0, 1.0, 4}).c3 == doctest::Approx(32.0 * 4 / 6 * 3));

    CHECK_FALSE(constants(kFig1).c2.has_value());
    CHECK_THROWS_AS(theorem1_constants(kFig1), Error);
    CHECK_THROWS_AS(constants({0.5, 1.0, 1.0, 1.0, 1.0, 2}), Error);
    CHECK_FALSE(focusing_regime({0.5, 1.0, 1.0, 1.0, -1.0, 3}));
    CHECK(early_collapse_regime(kFig1));
    CHECK(is_manakov(kManakov));
}

TEST_CASE("functions at t = 0") {
    const InitialFunctionals f = gaussian_moments({4.0, 3.0, 0.3, 0.1}, kFig2);
    CHECK(F_function(f, kFig2, 0.0) == f.msw);
    CHECK(G_function(f, kFig2, 0.0) == 0.0);
    CHECK(M_function(f, kFig2, 0.0) == f.msw + 1.0);
    const InitialFunctionals z = gaussian_moments({5.8, 1.3, 1.0, 1.0}, kFig1);
    CHECK(early_collapse_Z(z, kFig1, 0.0) == doctest::Approx(z.msw).epsilon(1e-15));
    const InitialFunctionals m = gaussian_moments({2.0, 1.0, 0.5, 0.4}, kManakov);
    CHECK(F_hat(m, kManakov, 0.0) == m.msw);
    CHECK(G_hat(m, kManakov, 0.0) == 0.0);
}

TEST_CASE("F matches its defining formula") {
    const InitialFunctionals f = make_initial(3.0, -40.0, 2.0, 1.5);
    for (double t : {0.01, 0.3, 1.0, 4.0})
        CHECK(F_function(f, kFig2, t) == doctest::Approx(F_direct(f, kFig2, t)).epsilon(1e-13));
}

TEST_CASE("M is the running supremum of F plus one") {
    // Y(0) > 0 and strongly negative E(0): F rises to an interior maximum, then falls.
    const InitialFunctionals f = make_initial(0.5, -30.0, 1.0, 6.0);
    auto dF = [&](double t) {
        const double g = kFig2.gamma;
        return f.mswRate + 2.0 * 8.0 * 3.0 / 5.0 * f.energy * t +
               4.0 * kFig2.kappa / (g * g) * f.stokes.s0 * (2 * g * std::exp(2 * g * t) - 2 * g);
    };
    // Critical point by bisection on the sign change of F'.
    double lo = 0.0, hi = 1.0;
    REQUIRE(dF(lo) > 0.0);
    REQUIRE(dF(hi) < 0.0);
    for (int i = 0; i < 200; ++i) (dF(0.5 * (lo + hi)) > 0 ? lo : hi) = 0.5 * (lo + hi);
    const double tStar = 0.5 * (lo + hi);
    const double supOracle = F_direct(f, kFig2, tStar);

    CHECK(M_function(f, kFig2, 0.5 * tStar) ==
          doctest::Approx(F_direct(f, kFig2, 0.5 * tStar) + 1.0).epsilon(1e-12));
    for (double t : {1.2 * tStar, 3.0 * tStar, 1.0})
        CHECK(M_function(f, kFig2, t) == doctest::Approx(supOracle + 1.0).epsilon(1e-10));

    double prevM = 0.0, prevG = -1.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.005 * i;
        const double M = M_function(f, kFig2, t), G = G_function(f, kFig2, t);
        // The supremum is resolved to a relative 1e-10.
        CHECK(M >= prevM * (1.0 - 1e-12));
        CHECK(G >= prevG * (1.0 - 1e-12));
        CHECK(M >= f.msw + 1.0);
        prevM = M;
        prevG = G;
    }
}

TEST_CASE("Theorem 1 checker") {
    SUBCASE("Fig. 2(a) inputs stay unsatisfied") {
        const InitialFunctionals f = gaussian_moments({4.0, 2.0, 0.3, 0.1}, kFig2);
        for (int i = 0; i <= 1000; ++i) CHECK(F_function(f, kFig2, 5.0 * i / 1000) + 1.0 > 0.0);
        CHECK_FALSE(check_theorem1(f, kFig2, 5.0).satisfied);
    }
    SUBCASE("zero data is never certified") {
        const auto rep = check_theorem1(InitialFunctionals{}, kFig2, 5.0);
        CHECK_FALSE(rep.satisfied);
        CHECK_FALSE(rep.certifiedTime.has_value());
    }
    SUBCASE("certified time satisfies both inequalities and is stable under refinement") {
        const InitialFunctionals f = make_initial(0.2, -5e4, 0.1, -1.0);
        const auto coarse = check_theorem1(f, kFig2, 1.0, 512);
        const auto fine = check_theorem1(f, kFig2, 1.0, 16384);
        REQUIRE(coarse.satisfied);
        REQUIRE(fine.satisfied);
        const double T0 = *fine.certifiedTime;
        CHECK(T0 > 0.0);
        CHECK(F_function(f, kFig2, T0) + 1.0 < 0.0);
        CHECK(G_function(f, kFig2, T0) < 1.0);
        CHECK(std::abs(*coarse.certifiedTime - T0) < 2.0 * kTimeTolerance);
        CHECK(fine.columns == std::vector<std::string>{"t", "F", "M", "G"});
    }
    CHECK_THROWS_AS(check_theorem1(InitialFunctionals{}, kFig1, 5.0), Error);
}

TEST_CASE("lemma thresholds") {
    const CriterionConstants c = theorem1_constants(kFig2);
    const double beta = *c.beta;
    SUBCASE("degenerate data collapses the T0 bracket") {
        const LemmaThreshold l = lemma1_threshold(make_initial(0, -1, 0, 0), kFig2);
        const double T = std::log(1.0 + beta * beta / (beta * beta + c.c1)) / beta;
        CHECK(l.T0max == doctest::Approx(T).epsilon(1e-14));
        CHECK(l.T0min == doctest::Approx(T).epsilon(1e-14));
        CHECK(l.bound < 0.0);
        CHECK(std::isfinite(l.bound));
        const LemmaThreshold l2 = lemma2_threshold(make_initial(0, 0, 0, 0), kFig2);
        CHECK(l2.bound == doctest::Approx(-1.0 / l2.T0min).epsilon(1e-14));
    }
    SUBCASE("Y(0) at or above 8 kappa S0 / gamma never satisfies lemma 2") {
        const InitialFunctionals f = make_initial(2.0, -100.0, 1.0, 8.0 * 2.0 / 0.5);
        CHECK_FALSE(lemma2_threshold(f, kFig2).satisfied);
    }
    SUBCASE("T0min <= T0max") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        for (int i = 0; i < 100; ++i) {
            const LemmaThreshold l =
                lemma1_threshold(make_initial(u(rng), -u(rng), u(rng), u(rng) - 5.0), kFig2);
            CHECK(l.T0min <= l.T0max);
        }
    }
    CHECK_THROWS_AS(lemma1_threshold(InitialFunctionals{}, kFig1), Error);
}

TEST_CASE("lemmas imply the theorem on random inputs") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int lemma1Hits = 0, lemma2Hits = 0;
    for (int i = 0; i < 50; ++i) {
        const SystemParams p{0.2 + u(rng), 1.0 + u(rng), 0.5 + u(rng), 0.5 + u(rng), u(rng) - 0.3, 3};
        REQUIRE(focusing_regime(p));
        // Alternate between a dominant negative energy and a dominant inward width rate.
        const bool energyLed = i % 2 == 0;
        const double e0 = energyLed ? -std::pow(10.0, 1.0 + 5.0 * u(rng)) : -10.0 * u(rng);
        const double y0 = energyLed ? 4.0 * u(rng) - 2.0 : -std::pow(10.0, 1.0 + 5.0 * u(rng));
        const InitialFunctionals f = make_initial(0.01 + u(rng), e0, 0.05 + 2.0 * u(rng), y0);
        const LemmaThreshold l1 = lemma1_threshold(f, p);
        const LemmaThreshold l2 = lemma2_threshold(f, p);
        if (!l1.satisfied && !l2.satisfied) continue;
        const auto rep = check_theorem1(f, p, std::max(l1.T0max, l2.T0max) * 1.01);
        if (l1.satisfied) {
            ++lemma1Hits;
            CHECK(rep.satisfied);
        }
        if (l2.satisfied) {
            ++lemma2Hits;
            CHECK(rep.satisfied);
        }
    }
    CHECK(lemma1Hits > 5);
    CHECK(lemma2Hits > 5);
}

TEST_CASE("closed-form Z against nested quadrature") {
    for (const SystemParams& p : {kFig1, SystemParams{0.15, 1.0, 4.0, -1.0, -0.5, 3},
                                  SystemParams{0.5, 0.4, 4.0, -1.0, -0.5, 5}}) {
        const InitialFunctionals f = gaussian_moments({5.8, 0.9, 1.0, 1.0}, p);
        const double c4 = constants(p).c4, g = p.gamma, n = p.dim;
        auto inner = [&](double s) {
            return oracle::adaptive_simpson(
                [&](double sig) {
                    return std::exp(c4 * sig) *
                           (energy_bound(f, p, sig) + p.kappa * f.stokes.s0 * std::exp(2 * g * sig));
                },
                0.0, s, 1e-13);
        };
        for (double t : {0.1, 0.5, 1.3}) {
            const double Zq =
                f.msw + oracle::adaptive_simpson(
                            [&](double s) {
                                return std::exp(-2 * c4 * s) *
                                       (f.mswRate - c4 * f.msw + 4.0 * n * inner(s));
                            },
                            0.0, t, 1e-11);
            const double Z = early_collapse_Z(f, p, t);
            CHECK(std::abs(Z - Zq) <= 1e-8 * std::max(1.0, std::abs(Zq)));
        }
    }
    CHECK_THROWS_AS(early_collapse_Z(InitialFunctionals{}, kFig2, 1.0), Error);
    CHECK_THROWS_AS(check_theorem2(InitialFunctionals{}, kFig2, 1.0), Error);
}

TEST_CASE("Theorem 2 root is a zero of Z") {
    const SystemParams p{0.3, 1.0, 4.0, -1.0, -0.5, 3};
    const auto rep = check_theorem2(gaussian_moments({5.8, 0.9, 1.0, 1.0}, p), p, 8.0);
    REQUIRE(rep.satisfied);
    const double T = *rep.certifiedTime;
    const InitialFunctionals f = rep.inputs;
    CHECK(early_collapse_Z(f, p, T) <= 0.0);
    CHECK(early_collapse_Z(f, p, T - 1e-8) > 0.0);
    for (int i = 0; i < 100; ++i) CHECK(early_collapse_Z(f, p, T * i / 100.0) > 0.0);
}

TEST_CASE("Manakov invariants and modified functions") {
    const InitialFunctionals f = gaussian_moments({2.0, 1.3, 0.5, 0.4}, kManakov);
    const ManakovInvariants inv = manakov_invariants(f, kManakov);
    CHECK(inv.S1const == f.stokes.s1);
    CHECK(inv.Sconst == doctest::Approx(kManakov.kappa * f.stokes.s0));
    REQUIRE(inv.oscillation);
    CHECK(inv.oscillation->s0_at(0.0) == doctest::Approx(f.stokes.s0).epsilon(1e-14));
    CHECK(inv.oscillation->omega == doctest::Approx(std::sqrt(0.75)));
    // At kappa = 1 the printed and derived S01 coincide.
    CHECK(inv.oscillation->S01printed == doctest::Approx(inv.oscillation->S01).epsilon(1e-14));

    const InitialFunctionals sym = gaussian_moments({1.5, 1.5, 0.6, 0.6}, kManakov);
    CHECK(manakov_invariants(sym, kManakov).oscillation->S02 == 0.0);

    // G-hat carries the exponent 48 N gamma / (N + 2); G carries c3 gamma / c2.
    const CriterionConstants c = theorem1_constants(kManakov);
    for (double t : {0.01, 0.05, 0.2}) {
        const double bracketHat = G_hat(f, kManakov, t) / M_hat(f, kManakov, t);
        const double bracket = G_function(f, kManakov, t) / M_function(f, kManakov, t);
        CHECK(bracketHat ==
              doctest::Approx(0.5 * c.c1 * t * t + std::expm1(48.0 * 3 * 0.5 * t / 5)).epsilon(1e-13));
        CHECK(bracket == doctest::Approx(0.5 * c.c1 * t * t + std::expm1(*c.beta * t)).epsilon(1e-13));
    }

    // No S1 and E(0) < 0: F-hat is a downward parabola.
    const InitialFunctionals q = make_initial(1.0, -2.0, 1.0, 0.5);
    CHECK(F_hat(q, kManakov, 10.0) + 1.0 < 0.0);
    CHECK(F_hat(q, kManakov, 1.0) ==
          doctest::Approx(1.0 + 0.5 + 8.0 * 3.0 / 5.0 * -2.0).epsilon(1e-14));

    CHECK_THROWS_AS(manakov_invariants(f, kFig2), Error);
    CHECK_THROWS_AS(check_manakov_theorem(f, kFig2, 1.0), Error);
}
