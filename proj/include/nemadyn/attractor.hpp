#pragma once

#include <optional>
#include <vector>

#include "nemadyn/equilibria.hpp"
#include "nemadyn/integrate.hpp"

namespace nemadyn {

/// Terminal-behavior classification of a trajectory.
struct AttractorReport {
    enum class Kind { Equilibrium, LimitCycle, Undecided };

    Kind kind = Kind::Undecided;
    int equilibrium_index = -1; // into the candidate list passed in
    double period = 0.0;
    double amplitude_x = 0.0;
    double amplitude_y = 0.0;
    // evidence
    double terminal_residual = 0.0; // distance from the final state to the nearest candidate
    double peak_variation = 0.0;    // relative spread of the last five x peak amplitudes
};

/// Classify the tail of a trajectory: convergence to one of the candidate
/// equilibria (terminal distance < 1e-4 with a non-increasing trend over the
/// last quarter), a limit cycle (the last five peak-to-peak x amplitudes
/// agree to 1e-3 relative), or undecided. Needs at least 50 dense samples.
AttractorReport detect_attractor(const Trajectory& traj,
                                 const std::vector<Equilibrium>& candidates);

struct PeriodEstimate {
    double mean = 0.0;
    double spread = 0.0; // max - min over the spacings used
    int crossings = 0;
};

/// Measure the period of the small stable cycle near the coexistence point:
/// integrate from (x3 + perturbation, y3), discard the first half of the
/// horizon, and average the spacing of upward crossings of the section
/// y = y3. Crossings only count while the orbit keeps swinging at least
/// 1e-3 around the section, so orbits that spiral into the focus run out of
/// qualifying crossings. Fewer than 8 of them raises InsufficientDataError.
PeriodEstimate limit_cycle_period(const NormalizedParams& p, double perturbation,
                                  const IntegratorConfig& cfg = {});

/// Zero-derivative curves of the normalized system over a y range.
/// dx/dt vanishes on the y axis and on the horizontal line y = y3;
/// dy/dt vanishes on x = (m y - u)/y^2, clipped to x >= 0.
struct Nullclines {
    std::vector<State> pest_axis;      // x = 0
    std::vector<State> pest_level;     // y = y3
    std::vector<State> nematode_curve; // x = (m y - u)/y^2
    double y3 = 0.0;
};

Nullclines nullclines(const NormalizedParams& p, double y_min, double y_max, int samples);

/// x of the nematode nullcline at a given y > 0.
double nematode_nullcline_x(const NormalizedParams& p, double y);

/// One phase-portrait trajectory; `failed` entries carry the partial
/// trajectory and the failure message.
struct BatchEntry {
    Trajectory trajectory;
    bool failed = false;
    std::string error;
};

/// Independent integrations from each start, in input order. Per-trajectory
/// integration failures are recorded in the corresponding entry instead of
/// aborting the batch.
std::vector<BatchEntry> phase_portrait_batch(const NormalizedParams& p,
                                             const std::vector<State>& starts,
                                             const IntegratorConfig& cfg = {});

} // namespace nemadyn
