#include <doctest.h>

#include <cmath>
#include <random>

#include "nemadyn/bifurcation.hpp"
#include "support.hpp"

using namespace nemadyn;

namespace {

// Reference values for (k,m) = (0.5, 0.2), evaluated from the closed forms
// in 30-digit arithmetic: y3 = sqrt(3)-1, x3 = m/(2 y3), omega^2 = x3(k y3^2+1),
// beta = y3 omega, kappa = sqrt(3)-1.
constexpr double kUCritical = 0.073205080756887729;
constexpr double kBeta = 0.30466427921164456;
constexpr double kOmega = 0.41617914502878172;
constexpr double kAlphaPrime = -1.3660254037844386;
constexpr double kAlpha1 = -0.13616454968463011;
constexpr double kL1 = -0.099679368558885990;
constexpr double kPeriod = 20.623308132604464;
constexpr double kEtaToY = 1.7589800361530629;       // beta/(x3(k y3^2+1))
constexpr double kFxyExpected = -2.2302973163427432; // -(k y3^2+1)*M

const double kY3 = std::sqrt(3.0) - 1.0;

// half-trace of the coexistence Jacobian as a function of u, for the
// transversality finite difference
double half_trace_at(double k, double m, double u) {
    const double y3 = y3_of(k);
    const double x3 = (m * y3 - u) / (y3 * y3);
    return jacobian(NormalizedParams{k, m, u}, State{x3, y3}).trace() / 2.0;
}

} // namespace

TEST_SUITE_BEGIN("bifurcation");

TEST_CASE("closed-form Hopf analysis at the reference parameters") {
    const HopfReport rep = hopf_analysis(NormalizedParams{0.5, 0.2, 0.0});

    CHECK(rep.u_critical == doctest::Approx(kUCritical).epsilon(1e-14));
    CHECK(std::abs(rep.alpha) < 1e-12);
    CHECK(rep.beta == doctest::Approx(kBeta).epsilon(1e-13));
    CHECK(rep.omega == doctest::Approx(kOmega).epsilon(1e-13));
    CHECK(rep.alpha_prime == doctest::Approx(kAlphaPrime).epsilon(1e-14));
    CHECK(rep.alpha1 == doctest::Approx(kAlpha1).epsilon(1e-12));
    CHECK(rep.l1 == doctest::Approx(kL1).epsilon(1e-12));
    CHECK(rep.predicted_period == doctest::Approx(kPeriod).epsilon(1e-13));
    CHECK(rep.alpha1 < 0.0);
    CHECK(rep.l1 < 0.0);
    CHECK(rep.alpha_prime < 0.0);
    CHECK(rep.beta > 0.0);
}

TEST_CASE("critical point identities") {
    SUBCASE("trace vanishes at u0/2") {
        for (double k : {0.1, 0.5, 1.0, 4.0}) {
            for (double m : {0.1, 0.4, 1.5}) {
                const Thresholds th = thresholds(NormalizedParams{k, m, 0.0});
                const double y3 = th.y3;
                const double x3 = (m * y3 - th.u_hopf) / (y3 * y3);
                const Jacobian2 j =
                    jacobian(NormalizedParams{k, m, th.u_hopf}, State{x3, y3});
                CHECK(std::abs(j.trace()) < 1e-12);
                CHECK(std::abs(2.0 * x3 * y3 - m) < 1e-12);
            }
        }
    }
    SUBCASE("pure imaginary eigenvalue pair at the critical rate") {
        const HopfReport rep = hopf_analysis(NormalizedParams{0.5, 0.2, 0.0});
        const double x3 = (0.2 * kY3 - rep.u_critical) / (kY3 * kY3);
        const Jacobian2 j =
            jacobian(NormalizedParams{0.5, 0.2, rep.u_critical}, State{x3, kY3});
        auto [l1, l2] = j.eigenvalues();
        CHECK(std::abs(l1.real()) < 1e-10);
        CHECK(std::abs(l2.real()) < 1e-10);
        CHECK(std::abs(std::abs(l1.imag()) - kY3 * rep.omega) < 1e-10);
    }
    SUBCASE("transversality: finite difference of the half trace") {
        const Thresholds th = thresholds(NormalizedParams{0.5, 0.2, 0.0});
        const double h = 1e-6 * th.u0;
        const double fd = (half_trace_at(0.5, 0.2, th.u_hopf + h) -
                           half_trace_at(0.5, 0.2, th.u_hopf - h)) /
                          (2.0 * h);
        CHECK(fd == doctest::Approx(-1.0 / kY3).epsilon(1e-6));
    }
}

TEST_CASE("numeric normal-form partials") {
    const auto d = detail::normal_frame_partials(NormalizedParams{0.5, 0.2, 0.0});

    SUBCASE("partials that vanish identically") {
        CHECK(std::abs(d.fxxx) < 1e-7);
        CHECK(std::abs(d.fxx) < 1e-7);
        CHECK(std::abs(d.gxxy) < 1e-7);
        CHECK(std::abs(d.gyyy) < 1e-7);
        CHECK(std::abs(d.gxx) < 1e-7);
    }
    SUBCASE("nonzero partials match their closed forms") {
        const double k = 0.5, m = 0.2;
        const double y3 = kY3;
        const double x3 = m / (2.0 * y3);
        const double M = d.eta_to_y;
        CHECK(M == doctest::Approx(kEtaToY).epsilon(1e-12));
        CHECK(std::abs(d.fxy - kFxyExpected) < 1e-7);
        CHECK(std::abs(d.fxy - (-(k * y3 * y3 + 1.0) * M)) < 1e-7);
        CHECK(std::abs(d.fxyy - 2.0 * k * k * y3 * y3 * y3 * M * M) < 1e-7);
        CHECK(std::abs(d.fyy - 2.0 * k * k * x3 * y3 * y3 * y3 * M * M) < 1e-7);
        CHECK(std::abs(d.gxy - 2.0 * y3) < 1e-7);
        CHECK(std::abs(d.gyy - 2.0 * x3 * M) < 1e-7);
    }
}

TEST_CASE("dual-route first focus quantity") {
    SUBCASE("reference parameters") {
        const double closed = hopf_analysis(NormalizedParams{0.5, 0.2, 0.0}).alpha1;
        const double numeric = first_lyapunov_numeric(NormalizedParams{0.5, 0.2, 0.0});
        CHECK(std::abs(closed - numeric) <= 1e-6 * std::abs(closed));
    }
    SUBCASE("negative and route-consistent over the parameter grid") {
        for (double k : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            for (double m : {0.1, 0.2, 0.5, 1.0, 2.0}) {
                const double closed = hopf_analysis(NormalizedParams{k, m, 0.0}).alpha1;
                const double numeric = first_lyapunov_numeric(NormalizedParams{k, m, 0.0});
                CHECK(closed < 0.0);
                CHECK(numeric < 0.0);
                CHECK(std::abs(closed - numeric) <= 1e-6 * std::abs(closed));
            }
        }
    }
}

TEST_CASE("saddle-node normal form") {
    SUBCASE("reference coefficient") {
        const double u0 = thresholds(NormalizedParams{0.5, 0.2, 0.0}).u0;
        const SaddleNodeReport rep = saddle_node_normal_form(NormalizedParams{0.5, 0.2, u0});
        CHECK(rep.quadratic_coefficient ==
              doctest::Approx(16.987298107780677).epsilon(1e-12));
        CHECK(rep.u_critical == doctest::Approx(u0));
    }
    SUBCASE("coefficient is positive for random parameters") {
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> K(0.0, 8.0), M(0.05, 3.0);
        for (int i = 0; i < 100; ++i) {
            NormalizedParams p{K(rng), M(rng), 0.0};
            p.u = thresholds(p).u0;
            CHECK(saddle_node_normal_form(p).quadratic_coefficient > 0.0);
        }
    }
    SUBCASE("uninhibited unit-rate case collapses to 1") {
        const SaddleNodeReport rep = saddle_node_normal_form(NormalizedParams{0.0, 1.0, 1.0});
        CHECK(rep.quadratic_coefficient == 1.0);
    }
    SUBCASE("rejected away from the collision") {
        CHECK_THROWS_AS(saddle_node_normal_form(NormalizedParams{0.5, 0.2, 0.1}),
                        NotApplicableError);
    }
}

TEST_SUITE_END();
