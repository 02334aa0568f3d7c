#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nemadyn/attractor.hpp"
#include "nemadyn/equilibria.hpp"

namespace nemadyn {

/// Qualitative regime of the released system, indexed by u against the two
/// thresholds u0/2 and u0 (with the usual tolerance bands at the
/// boundaries).
enum class RegimeLabel {
    BelowHopf,     // u < u0/2: both equilibria unstable, pests persist
    AtHopf,        // u = u0/2: stable periodic orbits appear
    Controlled,    // u0/2 < u < u0: stable coexistence at reduced pest density
    AtElimination, // u = u0: saddle-node collision of the two equilibria
    Eliminating,   // u > u0: pest-free state globally attracting
};

RegimeLabel regime_of(double u, const Thresholds& th, double tol = kClassifyTol);

struct SweepRow {
    double u = 0.0;
    Equilibrium pest_free;
    std::optional<Equilibrium> coexistence;
    RegimeLabel regime = RegimeLabel::BelowHopf;
    std::optional<AttractorReport> sim_check;
};

struct SweepTable {
    double k = 0.0;
    double m = 0.0;
    std::vector<SweepRow> rows; // sorted by u
};

struct SweepOptions {
    bool simulate = false;       // run a detect_attractor spot check per row
    State start{0.3, 0.3};       // spot-check initial condition
    IntegratorConfig cfg{};
};

/// Classify the equilibria of the normalized system for each release rate.
/// Rows come back sorted by u regardless of input order.
SweepTable sweep_u(double k, double m, std::vector<double> u_values,
                   const SweepOptions& opts = {});

/// Whether a row's simulation spot check is consistent with its regime
/// label: eliminating rows must converge to the pest-free point, controlled
/// rows to the coexistence point, and rows at or below the oscillation
/// threshold must not settle on any equilibrium (convergence there is
/// algebraic at best, so Undecided within a finite horizon is consistent).
bool simulation_matches_regime(const SweepRow& row);

/// Release-rate recommendations in original units.
struct ReleasePlan {
    double u_eliminate = 0.0;  // guaranteed pest elimination at or above this rate
    double u_control = 0.0;    // stable coexistence at reduced density; u_eliminate/2
    double y3_original = 0.0;  // pest-free nematode level in original units
    double u_eliminate_published_form = 0.0; // value of the widely quoted closed form
    std::vector<std::string> notes;
};

/// Compute the dimensional thresholds from the original-coordinate root of
/// r/(1+k*y) = c*y and cross-validate them against the
/// nondimensionalize -> thresholds -> inverse-map route (mismatch beyond
/// 1e-10 relative raises InternalConsistencyError and indicates a library
/// bug). The u field of p is ignored.
ReleasePlan release_plan(const OriginalParams& p);

} // namespace nemadyn
