#pragma once

#include <complex>
#include <utility>

#include "nemadyn/errors.hpp"

namespace nemadyn {

enum class UnitSystem { Original, Normalized };

/// Pest density x and nematode density y. Valid states live in the closed
/// first quadrant; derivative evaluations are allowed slightly outside it
/// (finite-difference probes, integrator trial steps).
struct State {
    double x = 0.0;
    double y = 0.0;

    void validate() const; // finite and nonnegative
};

/// Time derivative of a State.
struct Deriv {
    double dx = 0.0;
    double dy = 0.0;
};

/// Parameters of the dimensional model
///
///   dx/dt = r x / (1 + k y) - c x y
///   dy/dt = c x y^2 - m y + u
///
/// r: pest birth rate (1/time), k: inhibition level (1/density),
/// c: predation/conversion rate (1/(density*time)), m: nematode death rate
/// (1/time), u: nematode release rate (density/time).
///
/// k = 0 removes the inhibition factor; u = 0 removes the release term.
struct OriginalParams {
    double r = 1.0;
    double k = 0.0;
    double c = 1.0;
    double m = 1.0;
    double u = 0.0;

    void validate() const; // r,c,m > 0; k,u >= 0; all finite
};

/// Parameters of the rescaled model
///
///   dx/dt = x / (1 + k y) - x y
///   dy/dt = x y^2 - m y + u
///
/// obtained from the dimensional one through y -> (c/r) y, t -> r t with
/// k = k_dim r / c, m = m_dim / r, u = c u_dim / r^2.
struct NormalizedParams {
    double k = 0.0;
    double m = 1.0;
    double u = 0.0;

    void validate() const; // m > 0; k,u >= 0; all finite
};

/// The rescaling that links the two parameterizations:
/// normalized y = y_scale * original y, normalized t = t_scale * original t.
/// x is not rescaled.
struct ScaleMap {
    double y_scale = 1.0; // c/r
    double t_scale = 1.0; // r

    bool is_identity() const { return y_scale == 1.0 && t_scale == 1.0; }
};

/// 2x2 Jacobian of a planar vector field.
struct Jacobian2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    double discriminant() const { return trace() * trace() - 4.0 * det(); }

    /// Eigenvalues from the characteristic polynomial, complex pair when the
    /// discriminant is negative.
    std::pair<std::complex<double>, std::complex<double>> eigenvalues() const;
};

/// Right-hand sides without input checking, for integrator hot loops.
/// Both are written so that x = 0 propagates to dx = 0 exactly.
inline Deriv vector_field_unchecked(const OriginalParams& p, const State& s) noexcept {
    return {p.r * s.x / (1.0 + p.k * s.y) - p.c * s.x * s.y,
            p.c * s.x * s.y * s.y - p.m * s.y + p.u};
}

inline Deriv vector_field_unchecked(const NormalizedParams& p, const State& s) noexcept {
    return {s.x / (1.0 + p.k * s.y) - s.x * s.y,
            s.x * s.y * s.y - p.m * s.y + p.u};
}

/// Checked right-hand side evaluations. Throw InvalidInputError on
/// non-finite input; off-quadrant states are permitted.
Deriv vector_field(const OriginalParams& p, const State& s);
Deriv vector_field(const NormalizedParams& p, const State& s);

Jacobian2 jacobian(const OriginalParams& p, const State& s);
Jacobian2 jacobian(const NormalizedParams& p, const State& s);

/// Map dimensional parameters to the rescaled ones together with the state
/// and time scaling that realizes the reduction.
std::pair<NormalizedParams, ScaleMap> nondimensionalize(const OriginalParams& p);

/// Inverse of nondimensionalize: recover the dimensional parameters from a
/// normalized set and the scale map produced alongside it.
OriginalParams dimensionalize(const NormalizedParams& p, const ScaleMap& sm);

} // namespace nemadyn
