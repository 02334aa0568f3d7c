#pragma once

#include <string>

#include "nemadyn/equilibria.hpp"
#include "nemadyn/model.hpp"

namespace nemadyn {

/// Quantitative description of the Hopf bifurcation of the coexistence
/// equilibrium at u = u0/2. All quantities are evaluated at the critical
/// release rate.
struct HopfReport {
    double u_critical = 0.0;       // u0/2
    double alpha = 0.0;            // Re(lambda) = trace/2 at u_critical (~0)
    double beta = 0.0;             // Im(lambda) at u_critical, = y3*omega
    double alpha_prime = 0.0;      // d(Re lambda)/du at u_critical, = -1/y3
    double alpha1 = 0.0;           // first focus quantity, closed form
    double l1 = 0.0;               // first Lyapunov coefficient, -alpha1/alpha_prime
    double omega = 0.0;            // sqrt(x3*(k*y3^2+1))
    double predicted_period = 0.0; // 2*pi/beta
    std::string verdict;
};

/// Closed-form Hopf analysis at u0/2. alpha1 < 0 and l1 < 0 for every valid
/// (k, m): the bifurcating periodic orbits are orbitally asymptotically
/// stable and exist for release rates just below u0/2, where the coexistence
/// focus is unstable. The u field of p does not enter; the analysis is
/// pinned to the critical rate.
HopfReport hopf_analysis(const NormalizedParams& p);

/// Independent numerical route to the first focus quantity: transform the
/// full vector field to eigen-aligned coordinates around the coexistence
/// point at u0/2 and feed finite-difference partials into the standard
/// planar normal-form formula
///
///   a1 = (Fxxx + Fxyy + Gxxy + Gyyy)/16
///      + (Fxy (Fxx+Fyy) - Gxy (Gxx+Gyy) - Fxx Gxx + Fyy Gyy)/(16 beta).
///
/// Serves as the oracle for the closed form in hopf_analysis; the two agree
/// to ~1e-9 relative in practice. Throws NumericalInstabilityError when the
/// difference-quotient extrapolation fails to settle.
double first_lyapunov_numeric(const NormalizedParams& p);

/// Saddle-node data at the collision u = u0: the restricted center-manifold
/// flow (after the time reversal used to normalize the hyperbolic direction)
/// has quadratic coefficient y2^2 (k y2^2 + 1)/m^2 > 0, so the merged
/// pest-free point attracts from the positive side.
struct SaddleNodeReport {
    double u_critical = 0.0;
    double quadratic_coefficient = 0.0;
    std::string verdict;
};

/// Requires |u - u0| <= 1e-9 * u0; throws NotApplicableError otherwise.
SaddleNodeReport saddle_node_normal_form(const NormalizedParams& p);

namespace detail {

/// Finite-difference partials of the nonlinear parts in the eigen-aligned
/// frame at the Hopf point, exposed for verification; not part of the public
/// surface.
struct NormalFramePartials {
    double fxx = 0, fxy = 0, fyy = 0;
    double gxx = 0, gxy = 0, gyy = 0;
    double fxxx = 0, fxyy = 0, gxxy = 0, gyyy = 0;
    double beta = 0;     // rotation rate of the linear part
    double eta_to_y = 0; // scale factor from the second frame coordinate to y
};

NormalFramePartials normal_frame_partials(const NormalizedParams& p);

} // namespace detail

} // namespace nemadyn
