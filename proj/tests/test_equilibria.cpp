#include <doctest.h>

#include <cmath>
#include <random>

#include "nemadyn/equilibria.hpp"
#include "support.hpp"

using namespace nemadyn;

namespace {
const double kSqrt3 = std::sqrt(3.0);
const double kSqrt2 = std::sqrt(2.0);
} // namespace

TEST_SUITE_BEGIN("equilibria");

TEST_CASE("y3_of closed form and guard") {
    CHECK(y3_of(0.5) == doctest::Approx(kSqrt3 - 1.0).epsilon(1e-15));
    CHECK(y3_of(0.0) == 1.0);
    CHECK(y3_of(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    // residual of the defining equation at the k=2 root
    CHECK(std::abs(1.0 / (1.0 + 2.0 * 0.5) - 0.5) == 0.0);

    SUBCASE("series guard agrees with the closed form at the switch point") {
        // the closed form loses ~8 digits to cancellation at k = 1e-8, which
        // is exactly why the guard takes over there
        const double k = 1e-8;
        const double series = 1.0 - k + 2.0 * k * k;
        const double closed = (std::sqrt(1.0 + 4.0 * k) - 1.0) / (2.0 * k);
        CHECK(series == doctest::Approx(closed).epsilon(1e-7));
        CHECK(y3_of(k) == series);
    }
    SUBCASE("strictly decreasing and bounded in (0,1]") {
        double prev = y3_of(0.0);
        CHECK(prev == 1.0);
        for (double lk = -6.0; lk <= 3.0; lk += 0.125) {
            const double v = y3_of(std::pow(10.0, lk));
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
    SUBCASE("solves the defining equation") {
        for (double k : {0.01, 0.3, 1.0, 5.0, 50.0}) {
            const double y = y3_of(k);
            CHECK(std::abs(1.0 / (1.0 + k * y) - y) < 1e-12);
        }
        // near the guard the closed form itself carries cancellation error
        for (double k : {1e-10, 1e-7, 1e-6}) {
            const double y = y3_of(k);
            CHECK(std::abs(1.0 / (1.0 + k * y) - y) < 1e-9);
        }
    }
    CHECK_THROWS_AS(y3_of(-0.1), InvalidInputError);
}

TEST_CASE("thresholds") {
    const Thresholds a = thresholds(NormalizedParams{0.5, 0.2, 0.0});
    CHECK(a.u0 == doctest::Approx(0.2 * (kSqrt3 - 1.0)).epsilon(1e-15));
    CHECK(a.u_hopf == a.u0 / 2.0);

    const Thresholds b = thresholds(NormalizedParams{0.0, 1.0, 0.0});
    CHECK(b.u0 == 1.0);
    CHECK(b.u_hopf == 0.5);

    const Thresholds c = thresholds(NormalizedParams{2.0, 1.0, 0.0});
    CHECK(c.u0 == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("no-release equilibria") {
    const OriginalParams p{2.0, 0.5, 2.0, 0.4, 0.0};
    const auto eqs = equilibria_no_release(p);
    REQUIRE(eqs.size() == 2);

    SUBCASE("origin is a saddle with eigenvalues r and -m") {
        CHECK(eqs[0].kind == EquilibriumKind::Origin);
        CHECK(eqs[0].cls == StabilityClass::Saddle);
        CHECK(std::max(eqs[0].lambda1.real(), eqs[0].lambda2.real()) == doctest::Approx(2.0));
        CHECK(std::min(eqs[0].lambda1.real(), eqs[0].lambda2.real()) == doctest::Approx(-0.4));
    }
    SUBCASE("positive equilibrium is unstable with trace m") {
        const Equilibrium& e1 = eqs[1];
        CHECK(e1.kind == EquilibriumKind::Coexistence);
        const bool unstable = e1.cls == StabilityClass::UnstableNode ||
                              e1.cls == StabilityClass::UnstableFocus;
        CHECK(unstable);
        const Jacobian2 j = jacobian(p, e1.location);
        CHECK(j.trace() == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(j.det() > 0.0);
        // closed-form location
        CHECK(e1.location.x == doctest::Approx(0.27320508075688773).epsilon(1e-14));
        CHECK(e1.location.y == doctest::Approx(0.73205080756887729).epsilon(1e-14));
    }
    SUBCASE("equilibrium residuals vanish") {
        for (const Equilibrium& e : eqs)
            CHECK(test_support::field_norm(p, e.location) < 1e-12);
    }
    SUBCASE("k = 0 limit works through the series guard") {
        const auto eqs0 = equilibria_no_release(OriginalParams{2.0, 0.0, 2.0, 0.4, 0.0});
        CHECK(eqs0[1].location.y == doctest::Approx(1.0));       // r/c
        CHECK(eqs0[1].location.x == doctest::Approx(0.2));       // m/(c*y1)
        CHECK(test_support::field_norm(OriginalParams{2.0, 0.0, 2.0, 0.4, 0.0},
                                       eqs0[1].location) < 1e-12);
    }
    SUBCASE("nonzero release rate is rejected") {
        CHECK_THROWS_AS(equilibria_no_release(OriginalParams{2.0, 0.5, 2.0, 0.4, 0.1}),
                        InvalidInputError);
    }
}

TEST_CASE("with-release equilibria across the Example regimes") {
    SUBCASE("two equilibria below elimination") {
        const auto eqs = equilibria_with_release(NormalizedParams{0.5, 0.2, 0.1});
        REQUIRE(eqs.size() == 2);
        CHECK(eqs[0].kind == EquilibriumKind::PestFree);
        CHECK(eqs[0].location.y == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(eqs[0].cls == StabilityClass::Saddle);
        CHECK(eqs[1].kind == EquilibriumKind::Coexistence);
        CHECK(eqs[1].location.x == doctest::Approx(0.086602540378443865).epsilon(1e-12));
        CHECK(eqs[1].location.y == doctest::Approx(0.73205080756887729).epsilon(1e-12));
        CHECK(eqs[1].cls == StabilityClass::StableFocus);
    }
    SUBCASE("single stable node above elimination") {
        const auto eqs = equilibria_with_release(NormalizedParams{0.5, 0.2, 0.2});
        REQUIRE(eqs.size() == 1);
        CHECK(eqs[0].location.y == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(eqs[0].cls == StabilityClass::StableNode);
    }
    SUBCASE("attracting saddle node exactly at elimination") {
        const double u0 = 0.2 * (kSqrt3 - 1.0);
        const auto eqs = equilibria_with_release(NormalizedParams{0.5, 0.2, u0});
        REQUIRE(eqs.size() == 1);
        CHECK(eqs[0].location.y == doctest::Approx(0.73205080756887729).epsilon(1e-12));
        CHECK(eqs[0].cls == StabilityClass::AttractingSaddleNode);
    }
    SUBCASE("residuals and eigenvalues are consistent") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> K(0.0, 4.0), M(0.05, 2.0), F(0.05, 1.6);
        for (int i = 0; i < 40; ++i) {
            NormalizedParams p{K(rng), M(rng), 0.0};
            p.u = F(rng) * thresholds(p).u0;
            for (const Equilibrium& e : equilibria_with_release(p)) {
                CHECK(test_support::field_norm(p, e.location) < 1e-10);
                const Jacobian2 j = jacobian(p, e.location);
                // characteristic polynomial residual
                for (const auto& l : {e.lambda1, e.lambda2}) {
                    const std::complex<double> res = l * l - j.trace() * l + j.det();
                    CHECK(std::abs(res) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("linear classification") {
    CHECK(classify_linear({-1.0 / 3.0, 0.0, 1.0, -0.2}) == StabilityClass::StableNode);
    CHECK(classify_linear({2.0, 0.0, 0.0, -0.4}) == StabilityClass::Saddle);
    // pure rotation: inside the tolerance band, needs normal-form refinement
    CHECK(classify_linear({0.0, -1.5, 0.7, 0.0}) == StabilityClass::DegenerateOther);

    SUBCASE("agrees with a brute-force eigensolver away from the band") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> E(-2.0, 2.0);
        int checked = 0;
        for (int i = 0; i < 10000; ++i) {
            const Jacobian2 j{E(rng), E(rng), E(rng), E(rng)};
            const double scale = std::max({std::abs(j.a11), std::abs(j.a12),
                                           std::abs(j.a21), std::abs(j.a22)});
            // skip the degenerate band, where classify_linear defers on purpose
            if (std::abs(j.det()) <= 1e-6 * scale * scale ||
                std::abs(j.trace()) <= 1e-6 * scale)
                continue;
            ++checked;
            const auto [l1, l2] =
                test_support::brute_eigenvalues(j.a11, j.a12, j.a21, j.a22);
            StabilityClass expect;
            if (l1.real() * l2.real() < 0.0)
                expect = StabilityClass::Saddle;
            else if (l1.imag() != 0.0)
                expect = l1.real() < 0.0 ? StabilityClass::StableFocus
                                         : StabilityClass::UnstableFocus;
            else
                expect = l1.real() < 0.0 ? StabilityClass::StableNode
                                         : StabilityClass::UnstableNode;
            CHECK(classify_linear(j) == expect);
        }
        CHECK(checked > 9000);
    }
    SUBCASE("NaN entries are rejected") {
        CHECK_THROWS_AS(classify_linear({std::nan(""), 0, 0, 1}), InvalidInputError);
    }
}

TEST_CASE("pest-free classification thresholds") {
    CHECK(classify_pest_free({0.5, 0.2, 0.1 * (kSqrt2 - 1.0)}) == StabilityClass::Saddle);
    CHECK(classify_pest_free({0.5, 0.2, 0.2}) == StabilityClass::StableNode);
    const double u0 = thresholds(NormalizedParams{0.5, 0.2, 0.0}).u0;
    CHECK(classify_pest_free({0.5, 0.2, u0}) == StabilityClass::AttractingSaddleNode);
}

TEST_CASE("coexistence classification thresholds") {
    CHECK(classify_coexistence({0.5, 0.2, 0.1 * (kSqrt2 - 1.0)}) ==
          StabilityClass::UnstableFocus);
    CHECK(classify_coexistence({0.5, 0.2, 0.1}) == StabilityClass::StableFocus);
    CHECK(classify_coexistence({0.5, 0.2, 0.1 * (kSqrt3 - 1.0)}) ==
          StabilityClass::CenterTypeStableFocus);
    const double u0 = thresholds(NormalizedParams{0.5, 0.2, 0.0}).u0;
    CHECK_THROWS_AS(classify_coexistence({0.5, 0.2, u0}), NotApplicableError);
    CHECK_THROWS_AS(classify_coexistence({0.5, 0.2, 1.5 * u0}), NotApplicableError);
}

TEST_CASE("classification flips exactly once across each boundary") {
    const Thresholds th = thresholds(NormalizedParams{0.5, 0.2, 0.0});

    // grids offset by half a step so no sample lands inside the 1e-9 band
    SUBCASE("pest-free class across u0") {
        int flips = 0;
        StabilityClass prev = classify_pest_free({0.5, 0.2, th.u0 * (1.0 - 5.5e-6)});
        for (int i = 0; i <= 10; ++i) {
            const double u = th.u0 * (1.0 - 4.5e-6 + 1e-6 * i);
            const StabilityClass cur = classify_pest_free({0.5, 0.2, u});
            if (cur != prev) ++flips;
            prev = cur;
        }
        CHECK(flips == 1);
        CHECK(prev == StabilityClass::StableNode);
    }
    SUBCASE("coexistence class across u0/2") {
        int flips = 0;
        StabilityClass prev = classify_coexistence({0.5, 0.2, th.u_hopf * (1.0 - 5.5e-6)});
        for (int i = 0; i <= 10; ++i) {
            const double u = th.u_hopf * (1.0 - 4.5e-6 + 1e-6 * i);
            const StabilityClass cur = classify_coexistence({0.5, 0.2, u});
            if (cur != prev) ++flips;
            prev = cur;
        }
        CHECK(flips == 1);
        CHECK(prev == StabilityClass::StableFocus);
    }
}

TEST_CASE("reduction to the uninhibited model at k ~ 0") {
    const double k = 1e-12;
    const NormalizedParams p{k, 0.2, 0.1};
    const Thresholds th = thresholds(p);
    CHECK(th.u0 == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(th.u_hopf == doctest::Approx(0.1).epsilon(1e-9));

    const auto eqs = equilibria_with_release(p);
    REQUIRE(eqs.size() == 2);
    CHECK(eqs[1].location.x == doctest::Approx(0.1).epsilon(1e-9)); // m - u
    CHECK(eqs[1].location.y == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("no-cycle certificate") {
    SUBCASE("reference parameters: divergence constant is c = 2") {
        const auto cert = dulac_certificate(OriginalParams{2.0, 0.5, 2.0, 0.4, 0.0}, 1000);
        CHECK(cert.pass);
        CHECK(cert.divergence_constant == 2.0);
        CHECK(cert.max_abs_deviation < 1e-4);
    }
    SUBCASE("any positive c passes, even a tiny one") {
        const auto cert = dulac_certificate(OriginalParams{1.0, 0.3, 0.001, 0.7, 0.0}, 500);
        CHECK(cert.pass);
        CHECK(cert.divergence_constant == 0.001);
    }
    SUBCASE("finite-difference divergence at a single point") {
        const OriginalParams p{2.0, 0.5, 2.0, 0.4, 0.0};
        const auto bp = [&p](double x, double y) {
            return vector_field(p, State{x, y}).dx / (x * y);
        };
        const auto bq = [&p](double x, double y) {
            return vector_field(p, State{x, y}).dy / (x * y);
        };
        const double h = 1e-5;
        const double div = (bp(1.0 + h, 1.0) - bp(1.0 - h, 1.0)) / (2.0 * h) +
                           (bq(1.0, 1.0 + h) - bq(1.0, 1.0 - h)) / (2.0 * h);
        CHECK(div == doctest::Approx(2.0).epsilon(5e-5));
    }
    SUBCASE("refuses the released system") {
        CHECK_THROWS_AS(dulac_certificate(OriginalParams{2.0, 0.5, 2.0, 0.4, 0.1}, 100),
                        NotApplicableError);
    }
}

TEST_SUITE_END();
