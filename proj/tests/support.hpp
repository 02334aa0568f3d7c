#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "nemadyn/model.hpp"

namespace test_support {

// Independent 2x2 eigensolver used as the oracle for classify_linear: solve
// the characteristic polynomial directly with std::complex arithmetic.
inline std::pair<std::complex<double>, std::complex<double>>
brute_eigenvalues(double a11, double a12, double a21, double a22) {
    const std::complex<double> tr(a11 + a22, 0.0);
    const std::complex<double> det(a11 * a22 - a12 * a21, 0.0);
    const std::complex<double> s = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + s) / 2.0, (tr - s) / 2.0};
}

// Central-difference Jacobian of the normalized vector field.
inline nemadyn::Jacobian2 fd_jacobian(const nemadyn::NormalizedParams& p,
                                      const nemadyn::State& s) {
    using nemadyn::State;
    const double hx = 1e-6 * std::max(1.0, std::abs(s.x));
    const double hy = 1e-6 * std::max(1.0, std::abs(s.y));
    const auto f = [&p](double x, double y) { return nemadyn::vector_field(p, State{x, y}); };
    const auto fxp = f(s.x + hx, s.y), fxm = f(s.x - hx, s.y);
    const auto fyp = f(s.x, s.y + hy), fym = f(s.x, s.y - hy);
    return {(fxp.dx - fxm.dx) / (2 * hx), (fyp.dx - fym.dx) / (2 * hy),
            (fxp.dy - fxm.dy) / (2 * hx), (fyp.dy - fym.dy) / (2 * hy)};
}

inline double field_norm(const nemadyn::NormalizedParams& p, const nemadyn::State& s) {
    const auto d = nemadyn::vector_field(p, s);
    return std::hypot(d.dx, d.dy);
}

inline double field_norm(const nemadyn::OriginalParams& p, const nemadyn::State& s) {
    const auto d = nemadyn::vector_field(p, s);
    return std::hypot(d.dx, d.dy);
}

} // namespace test_support
