#pragma once

#include <variant>
#include <vector>

#include "nemadyn/model.hpp"

namespace nemadyn {

/// Adaptive-integrator settings. Defaults are sized so that the standard
/// analysis runs finish in seconds at well below the tolerances asserted
/// elsewhere in the library.
struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double max_step = 1.0;
    double t_end = 500.0;
    double dense_output_dt = 0.05;

    void validate() const;
};

using ParamsSnapshot = std::variant<OriginalParams, NormalizedParams>;

/// Dense-sampled solution curve. Times are strictly increasing starting at
/// zero; no emitted state dips below -10*abs_tol in either coordinate.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    UnitSystem units = UnitSystem::Normalized;
    ParamsSnapshot params = NormalizedParams{};

    std::size_t size() const { return times.size(); }
};

/// Integration aborted: step-size underflow under repeated rejection,
/// typically stiffness or blow-up. Carries whatever part of the trajectory
/// was produced before the failure.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, Trajectory partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const { return partial_; }

  private:
    Trajectory partial_;
};

/// Integrate the model from s0 (first quadrant) over [0, t_end] with an
/// embedded 5(4) pair and PI step control. Steps that would take a
/// coordinate below -abs_tol are rejected and retried smaller, so the
/// quadrant is preserved up to roundoff; y-axis starts (x = 0) keep x = 0
/// exactly because the x-derivative carries a factor of x through every
/// stage.
Trajectory integrate(const OriginalParams& p, const State& s0, const IntegratorConfig& cfg = {});
Trajectory integrate(const NormalizedParams& p, const State& s0, const IntegratorConfig& cfg = {});

/// Undo the nondimensionalizing rescaling sample by sample: t -> t/t_scale,
/// y -> y/y_scale, x unchanged. The input must be a normalized-unit
/// trajectory carrying normalized parameters; the result is tagged with the
/// dimensional parameters recovered through the scale map.
Trajectory dimensionalize_trajectory(const Trajectory& traj, const ScaleMap& sm);

} // namespace nemadyn
