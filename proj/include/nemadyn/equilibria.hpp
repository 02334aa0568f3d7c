#pragma once

#include <cstdint>
#include <vector>

#include "nemadyn/model.hpp"

namespace nemadyn {

/// Linear (and, on the degenerate boundaries, normal-form) verdict for a
/// planar fixed point.
enum class StabilityClass {
    Saddle,
    StableNode,
    UnstableNode,
    StableFocus,
    UnstableFocus,
    CenterTypeStableFocus,
    AttractingSaddleNode,
    DegenerateOther, // inside the tolerance band and no normal-form case applies
};

enum class SystemKind { NoRelease, WithRelease };

/// Role of an equilibrium in the model family.
enum class EquilibriumKind {
    Origin,      // (0,0), both species extinct
    PestFree,    // (0, u/m), pests eliminated by the release
    Coexistence, // positive equilibrium
};

struct Equilibrium {
    State location;
    StabilityClass cls = StabilityClass::DegenerateOther;
    SystemKind system = SystemKind::WithRelease;
    EquilibriumKind kind = EquilibriumKind::Coexistence;
    UnitSystem units = UnitSystem::Normalized;
    std::complex<double> lambda1, lambda2;
};

/// Release-rate thresholds of the normalized system: the pests persist below
/// u0 = m*y3 and are eliminated at or above it; the coexistence focus changes
/// stability at u_hopf = u0/2.
struct Thresholds {
    double y3 = 0.0;
    double u0 = 0.0;
    double u_hopf = 0.0;
};

/// Relative tolerance used for all threshold comparisons. The boundaries
/// u = u0 and u = u0/2 are exact-equality cases that floating point cannot
/// hit, so a narrow band around each routes to the normal-form
/// classification instead.
inline constexpr double kClassifyTol = 1e-9;

/// Nematode level of the coexistence equilibrium: the positive root of
/// 1/(1+k*y) - y = 0, i.e. (sqrt(1+4k)-1)/(2k). For k <= 1e-8 the removable
/// 0/0 is avoided with the series 1 - k + 2k^2.
double y3_of(double k);

/// u0 = m*y3(k) and u_hopf = u0/2 for the normalized system (u field ignored).
Thresholds thresholds(const NormalizedParams& p);

/// Equilibria of the no-release system (u = 0): the origin (a saddle) and the
/// positive equilibrium, which is always unstable. Throws InvalidInputError
/// when u != 0.
std::vector<Equilibrium> equilibria_no_release(const OriginalParams& p);
std::vector<Equilibrium> equilibria_no_release(const NormalizedParams& p);

/// Equilibria of the normalized system with release. The pest-free point
/// (0, u/m) always exists; the coexistence point ((m*y3-u)/y3^2, y3) is
/// appended while u < u0. Within the tolerance band around u0 the two have
/// collided and only the pest-free point (attracting saddle node) is
/// returned.
std::vector<Equilibrium> equilibria_with_release(const NormalizedParams& p);

/// Trace-determinant classification of a linear planar fixed point. Inside
/// the tolerance band (trace ~ 0 with positive determinant, or determinant
/// ~ 0) returns DegenerateOther; the caller refines through the normal-form
/// classifiers below.
StabilityClass classify_linear(const Jacobian2& j, double tol = kClassifyTol);

/// Pest-free equilibrium: saddle below u0, stable node above, attracting
/// saddle node in the band around u0 (positive quadratic normal-form
/// coefficient y2^2(k y2^2+1)/m^2).
StabilityClass classify_pest_free(const NormalizedParams& p, double tol = kClassifyTol);

/// Coexistence equilibrium: unstable focus below u0/2, stable focus between
/// u0/2 and u0, center-type stable focus in the band around u0/2 (negative
/// first focus quantity). Throws NotApplicableError when u >= u0.
StabilityClass classify_coexistence(const NormalizedParams& p, double tol = kClassifyTol);

/// Weighted-divergence certificate that the no-release system has no
/// periodic orbit in the open first quadrant. With the weight B = 1/(xy) the
/// divergence of (B*dx, B*dy) reduces to the constant c; the certificate
/// cross-checks that value by central finite differences of the weighted
/// field at random interior points.
struct NoCycleCertificate {
    double divergence_constant = 0.0; // symbolic value, equals c
    double max_abs_deviation = 0.0;   // worst |numeric - constant| over samples
    int samples = 0;
    bool pass = false;
};

/// Throws NotApplicableError when u != 0: with release the divergence
/// argument breaks down (a periodic orbit does appear near u0/2).
NoCycleCertificate dulac_certificate(const OriginalParams& p, int sample_count,
                                     std::uint64_t seed = 20260808u);

} // namespace nemadyn
