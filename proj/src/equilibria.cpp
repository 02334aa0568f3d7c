#include "nemadyn/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nemadyn {

namespace {

constexpr double kSeriesGuard = 1e-8; // below this, closed forms in k hit 0/0

Equilibrium make_equilibrium(const NormalizedParams& p, State loc, StabilityClass cls,
                             SystemKind system, EquilibriumKind kind) {
    const Jacobian2 j = jacobian(p, loc);
    auto [l1, l2] = j.eigenvalues();
    return {loc, cls, system, kind, UnitSystem::Normalized, l1, l2};
}

Equilibrium make_equilibrium(const OriginalParams& p, State loc, StabilityClass cls,
                             SystemKind system, EquilibriumKind kind) {
    const Jacobian2 j = jacobian(p, loc);
    auto [l1, l2] = j.eigenvalues();
    return {loc, cls, system, kind, UnitSystem::Original, l1, l2};
}

} // namespace

double y3_of(double k) {
    if (!std::isfinite(k) || k < 0.0) throw InvalidInputError("inhibition level k must be >= 0");
    if (k <= kSeriesGuard) return 1.0 - k + 2.0 * k * k;
    return (std::sqrt(1.0 + 4.0 * k) - 1.0) / (2.0 * k);
}

Thresholds thresholds(const NormalizedParams& p) {
    p.validate();
    const double y3 = y3_of(p.k);
    const double u0 = p.m * y3;
    return {y3, u0, u0 / 2.0};
}

StabilityClass classify_linear(const Jacobian2& j, double tol) {
    if (!std::isfinite(j.a11) || !std::isfinite(j.a12) || !std::isfinite(j.a21) ||
        !std::isfinite(j.a22))
        throw InvalidInputError("Jacobian has non-finite entries");
    const double scale =
        std::max({std::abs(j.a11), std::abs(j.a12), std::abs(j.a21), std::abs(j.a22)});
    if (scale == 0.0) return StabilityClass::DegenerateOther;

    const double tr = j.trace();
    const double de = j.det();
    const double tr_tol = tol * scale;
    const double det_tol = tol * scale * scale;

    if (de < -det_tol) return StabilityClass::Saddle;
    if (de <= det_tol) return StabilityClass::DegenerateOther;   // eigenvalue ~ 0
    if (std::abs(tr) <= tr_tol) return StabilityClass::DegenerateOther; // linear center
    const bool node = j.discriminant() >= 0.0;
    if (tr < 0.0) return node ? StabilityClass::StableNode : StabilityClass::StableFocus;
    return node ? StabilityClass::UnstableNode : StabilityClass::UnstableFocus;
}

StabilityClass classify_pest_free(const NormalizedParams& p, double tol) {
    p.validate();
    const Thresholds th = thresholds(p);
    if (p.u < th.u0 * (1.0 - tol)) return StabilityClass::Saddle;
    if (p.u > th.u0 * (1.0 + tol)) return StabilityClass::StableNode;
    return StabilityClass::AttractingSaddleNode;
}

StabilityClass classify_coexistence(const NormalizedParams& p, double tol) {
    p.validate();
    const Thresholds th = thresholds(p);
    if (p.u >= th.u0 * (1.0 - tol))
        throw NotApplicableError("no coexistence equilibrium: release rate at or above u0");
    if (p.u < th.u_hopf * (1.0 - tol)) return StabilityClass::UnstableFocus;
    if (p.u > th.u_hopf * (1.0 + tol)) return StabilityClass::StableFocus;
    return StabilityClass::CenterTypeStableFocus;
}

std::vector<Equilibrium> equilibria_no_release(const OriginalParams& p) {
    p.validate();
    if (p.u != 0.0) throw InvalidInputError("no-release analysis requires u = 0");

    std::vector<Equilibrium> out;
    out.push_back(make_equilibrium(p, State{0.0, 0.0}, StabilityClass::Saddle,
                                   SystemKind::NoRelease, EquilibriumKind::Origin));

    // The positive equilibrium solves r/(1+k*y) = c*y, the rescaled image of
    // the y3 equation; x follows from c*x*y^2 = m*y.
    const double y1 = (p.r / p.c) * y3_of(p.k * p.r / p.c);
    const double x1 = p.m / (p.c * y1);
    const Jacobian2 j = jacobian(p, State{x1, y1});
    out.push_back(make_equilibrium(p, State{x1, y1}, classify_linear(j), SystemKind::NoRelease,
                                   EquilibriumKind::Coexistence));
    return out;
}

std::vector<Equilibrium> equilibria_no_release(const NormalizedParams& p) {
    p.validate();
    if (p.u != 0.0) throw InvalidInputError("no-release analysis requires u = 0");

    std::vector<Equilibrium> out;
    out.push_back(make_equilibrium(p, State{0.0, 0.0}, StabilityClass::Saddle,
                                   SystemKind::NoRelease, EquilibriumKind::Origin));
    const double y1 = y3_of(p.k);
    const double x1 = p.m / y1;
    const Jacobian2 j = jacobian(p, State{x1, y1});
    out.push_back(make_equilibrium(p, State{x1, y1}, classify_linear(j), SystemKind::NoRelease,
                                   EquilibriumKind::Coexistence));
    return out;
}

std::vector<Equilibrium> equilibria_with_release(const NormalizedParams& p) {
    p.validate();
    const Thresholds th = thresholds(p);

    std::vector<Equilibrium> out;
    const double y2 = p.u / p.m;
    out.push_back(make_equilibrium(p, State{0.0, y2}, classify_pest_free(p),
                                   SystemKind::WithRelease, EquilibriumKind::PestFree));

    if (p.u < th.u0 * (1.0 - kClassifyTol)) {
        const double x3 = (p.m * th.y3 - p.u) / (th.y3 * th.y3);
        out.push_back(make_equilibrium(p, State{x3, th.y3}, classify_coexistence(p),
                                       SystemKind::WithRelease, EquilibriumKind::Coexistence));
    }
    return out;
}

NoCycleCertificate dulac_certificate(const OriginalParams& p, int sample_count,
                                     std::uint64_t seed) {
    p.validate();
    if (p.u != 0.0)
        throw NotApplicableError(
            "the no-cycle certificate applies to the no-release system only (u = 0)");
    if (sample_count < 1) throw InvalidInputError("sample_count must be positive");

    // Weighted components B*P and B*Q with B = 1/(x*y), evaluated through the
    // actual vector field rather than their reduced algebraic forms.
    const auto bp = [&p](double x, double y) {
        return vector_field_unchecked(p, State{x, y}).dx / (x * y);
    };
    const auto bq = [&p](double x, double y) {
        return vector_field_unchecked(p, State{x, y}).dy / (x * y);
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_range(std::log(0.05), std::log(5.0));

    NoCycleCertificate cert;
    cert.divergence_constant = p.c;
    cert.samples = sample_count;
    cert.pass = true;
    for (int i = 0; i < sample_count; ++i) {
        const double x = std::exp(log_range(rng));
        const double y = std::exp(log_range(rng));
        const double hx = 1e-5 * x;
        const double hy = 1e-5 * y;
        const double div = (bp(x + hx, y) - bp(x - hx, y)) / (2.0 * hx) +
                           (bq(x, y + hy) - bq(x, y - hy)) / (2.0 * hy);
        cert.max_abs_deviation = std::max(cert.max_abs_deviation, std::abs(div - p.c));
        if (!(div > 0.0)) cert.pass = false;
    }
    if (cert.max_abs_deviation > 1e-4) cert.pass = false;
    return cert;
}

} // namespace nemadyn
