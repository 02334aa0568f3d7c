#include "nemadyn/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nemadyn {

RegimeLabel regime_of(double u, const Thresholds& th, double tol) {
    if (!std::isfinite(u) || !(u > 0.0))
        throw InvalidInputError("regime labels are defined for u > 0");
    if (std::abs(u - th.u_hopf) <= tol * th.u_hopf) return RegimeLabel::AtHopf;
    if (std::abs(u - th.u0) <= tol * th.u0) return RegimeLabel::AtElimination;
    if (u < th.u_hopf) return RegimeLabel::BelowHopf;
    if (u < th.u0) return RegimeLabel::Controlled;
    return RegimeLabel::Eliminating;
}

SweepTable sweep_u(double k, double m, std::vector<double> u_values, const SweepOptions& opts) {
    NormalizedParams base{k, m, 0.0};
    base.validate();
    std::sort(u_values.begin(), u_values.end());

    const Thresholds th = thresholds(base);
    SweepTable table;
    table.k = k;
    table.m = m;
    table.rows.reserve(u_values.size());

    for (double u : u_values) {
        if (!std::isfinite(u) || !(u > 0.0))
            throw InvalidInputError("sweep values must be positive");
        const NormalizedParams p{k, m, u};
        const std::vector<Equilibrium> eqs = equilibria_with_release(p);

        SweepRow row;
        row.u = u;
        row.pest_free = eqs[0];
        if (eqs.size() > 1) row.coexistence = eqs[1];
        row.regime = regime_of(u, th);
        if (opts.simulate) {
            // a diverging spot check is itself a data point, not a sweep failure
            try {
                const Trajectory traj = integrate(p, opts.start, opts.cfg);
                row.sim_check = detect_attractor(traj, eqs);
            } catch (const IntegrationError&) {
                row.sim_check = AttractorReport{};
            } catch (const InsufficientDataError&) {
                row.sim_check = AttractorReport{};
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

bool simulation_matches_regime(const SweepRow& row) {
    if (!row.sim_check) return true;
    const AttractorReport& rep = *row.sim_check;
    const bool at_pest_free =
        rep.kind == AttractorReport::Kind::Equilibrium && rep.equilibrium_index == 0;
    const bool at_coexistence =
        rep.kind == AttractorReport::Kind::Equilibrium && rep.equilibrium_index == 1;

    switch (row.regime) {
        case RegimeLabel::Eliminating:
            return at_pest_free;
        case RegimeLabel::Controlled:
            return at_coexistence;
        case RegimeLabel::AtElimination:
            // algebraic approach to the saddle node: anything but settling on
            // a different point is consistent
            return !at_coexistence;
        case RegimeLabel::AtHopf:
        case RegimeLabel::BelowHopf:
            return rep.kind != AttractorReport::Kind::Equilibrium;
    }
    return false;
}

ReleasePlan release_plan(const OriginalParams& p) {
    p.validate();

    // Positive root of r/(1+k*y) = c*y 'in place', through the rescaled root
    // so the k -> 0 limit inherits the same series guard.
    const double y3o = (p.r / p.c) * y3_of(p.k * p.r / p.c);

    ReleasePlan plan;
    plan.y3_original = y3o;
    plan.u_eliminate = p.m * y3o;
    plan.u_control = plan.u_eliminate / 2.0;

    // Cross-validation: normalize, take u0 there, map the rate back with
    // u = u_bar * r^2 / c. The two routes are algebraically identical.
    const auto [np, sm] = nondimensionalize(p);
    const Thresholds th = thresholds(np);
    const double u_back = th.u0 * sm.t_scale / sm.y_scale;
    if (std::abs(u_back - plan.u_eliminate) > 1e-10 * plan.u_eliminate)
        throw InternalConsistencyError("dimensional threshold routes disagree");

    // The closed form often quoted for this threshold differs by the factor
    // c^2/r^4: it back-substitutes u = (c/r^2)*u_bar although u_bar = c*u/r^2
    // inverts to u = (r^2/c)*u_bar.
    plan.u_eliminate_published_form = plan.u_eliminate * (p.c * p.c) / (p.r * p.r * p.r * p.r);

    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "u_eliminate = m*y3 = %.17g from the original-unit root of r/(1+k*y) = c*y; "
                  "cross-validated against the rescaling route u = u_bar*r^2/c to 1e-10 "
                  "relative.",
                  plan.u_eliminate);
    plan.notes.emplace_back(buf);
    std::snprintf(buf, sizeof buf,
                  "the widely quoted closed form c^2*m/(2*k*r^4)*(sqrt(1+4*k*r/c)-1) evaluates "
                  "to %.17g here and differs from the self-consistent threshold by the factor "
                  "c^2/r^4 = %.17g: it uses the back-substitution u = (c/r^2)*u_bar, but "
                  "u_bar = c*u/r^2 inverts to u = (r^2/c)*u_bar. Both values are reported; "
                  "the plan uses the self-consistent one.",
                  plan.u_eliminate_published_form, (p.c * p.c) / (p.r * p.r * p.r * p.r));
    plan.notes.emplace_back(buf);
    return plan;
}

} // namespace nemadyn
