// Dormand-Prince 5(4) integration with PI step-size control and the standard
// order-4 continuous extension, after the DOPRI5 code of Hairer, Norsett and
// Wanner (Solving Ordinary Differential Equations I, 2nd ed., Springer 1993).

#include "nemadyn/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nemadyn {

namespace {

// Butcher tableau
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// difference between the 5th-order weights and the embedded 4th-order ones
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
// dense-output weights
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

// step controller
constexpr double kSafety = 0.9;
constexpr double kPiBeta = 0.04;
constexpr double kExpo = 0.2 - kPiBeta * 0.75;
constexpr double kMaxGrow = 5.0;
constexpr double kMaxShrink = 10.0;

struct Vec2 {
    double x, y;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

double min_step(double t) {
    return 100.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
}

template <class Field>
double initial_step(const Field& f, Vec2 y0, Vec2 f0, const IntegratorConfig& cfg) {
    const auto scaled_norm = [&cfg](Vec2 v, Vec2 ref) {
        const double sx = cfg.abs_tol + cfg.rel_tol * std::abs(ref.x);
        const double sy = cfg.abs_tol + cfg.rel_tol * std::abs(ref.y);
        return std::sqrt(((v.x / sx) * (v.x / sx) + (v.y / sy) * (v.y / sy)) / 2.0);
    };
    const double d0 = scaled_norm(y0, y0);
    const double d1 = scaled_norm(f0, y0);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, cfg.max_step);

    const Vec2 y1 = y0 + h0 * f0;
    const Vec2 f1 = f(y1);
    const double d2 = scaled_norm(f1 + (-1.0 * f0), y0) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, cfg.max_step, cfg.t_end});
}

template <class Params>
Trajectory run(const Params& p, const State& s0, const IntegratorConfig& cfg, UnitSystem units) {
    p.validate();
    s0.validate();
    cfg.validate();

    const auto f = [&p](Vec2 v) -> Vec2 {
        const Deriv d = vector_field_unchecked(p, State{v.x, v.y});
        return {d.dx, d.dy};
    };

    Trajectory traj;
    traj.units = units;
    traj.params = p;
    const std::size_t expected = static_cast<std::size_t>(cfg.t_end / cfg.dense_output_dt) + 2;
    traj.times.reserve(expected);
    traj.states.reserve(expected);

    const auto record = [&traj](double t, Vec2 v) {
        traj.times.push_back(t);
        traj.states.push_back(State{v.x, v.y});
    };

    double t = 0.0;
    Vec2 y{s0.x, s0.y};
    record(t, y);
    std::size_t next_sample = 1;

    Vec2 k1 = f(y);
    double h = initial_step(f, y, k1, cfg);
    double err_prev = 1e-4;

    while (t < cfg.t_end) {
        if (h > cfg.t_end - t) h = cfg.t_end - t;

        const Vec2 k2 = f(y + (h * kA21) * k1);
        const Vec2 k3 = f(y + (h * kA31) * k1 + (h * kA32) * k2);
        const Vec2 k4 = f(y + (h * kA41) * k1 + (h * kA42) * k2 + (h * kA43) * k3);
        const Vec2 k5 =
            f(y + (h * kA51) * k1 + (h * kA52) * k2 + (h * kA53) * k3 + (h * kA54) * k4);
        const Vec2 k6 = f(y + (h * kA61) * k1 + (h * kA62) * k2 + (h * kA63) * k3 +
                          (h * kA64) * k4 + (h * kA65) * k5);
        const Vec2 y1 =
            y + (h * kB1) * k1 + (h * kB3) * k3 + (h * kB4) * k4 + (h * kB5) * k5 + (h * kB6) * k6;
        const Vec2 k7 = f(y1);

        const Vec2 ev = (h * kE1) * k1 + (h * kE3) * k3 + (h * kE4) * k4 + (h * kE5) * k5 +
                        (h * kE6) * k6 + (h * kE7) * k7;
        const double sx = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y.x), std::abs(y1.x));
        const double sy = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y.y), std::abs(y1.y));
        double err = std::sqrt(((ev.x / sx) * (ev.x / sx) + (ev.y / sy) * (ev.y / sy)) / 2.0);
        if (!std::isfinite(err)) err = 1e10;

        if (y1.x < -cfg.abs_tol || y1.y < -cfg.abs_tol) {
            // quadrant violation: re-step smaller regardless of the error estimate
            h *= 0.5;
            if (h < min_step(t))
                throw IntegrationError("step size underflow while enforcing positivity",
                                       std::move(traj));
            continue;
        }

        if (err <= 1.0) {
            // accepted: dense output over (t, t+h]
            const Vec2 dy = y1 + (-1.0 * y);
            const Vec2 rc1 = y;
            const Vec2 rc2 = dy;
            const Vec2 rc3 = h * k1 + (-1.0 * dy);
            const Vec2 rc4 = dy + (-h) * k7 + (-1.0 * rc3);
            const Vec2 rc5 = h * (kD1 * k1 + kD3 * k3 + kD4 * k4 + kD5 * k5 + kD6 * k6 +
                                  kD7 * k7);
            const double t_new = t + h;
            while (true) {
                const double ts = static_cast<double>(next_sample) * cfg.dense_output_dt;
                if (ts > t_new + 1e-12 * std::max(1.0, t_new) || ts > cfg.t_end) break;
                const double th = std::clamp((ts - t) / h, 0.0, 1.0);
                const Vec2 v =
                    rc1 + th * (rc2 + (1.0 - th) * (rc3 + th * (rc4 + (1.0 - th) * rc5)));
                record(ts, v);
                ++next_sample;
            }
            t = t_new;
            y = y1;
            k1 = k7;

            double fac = std::pow(err, kExpo) / (std::pow(err_prev, kPiBeta) * kSafety);
            fac = std::clamp(fac, 1.0 / kMaxGrow, kMaxShrink);
            h = std::min(h / fac, cfg.max_step);
            err_prev = std::max(err, 1e-4);
        } else {
            h *= std::max(1.0 / kMaxShrink, kSafety * std::pow(err, -0.2));
        }
        if (h < min_step(t) && t < cfg.t_end)
            throw IntegrationError("step size underflow (stiffness or blow-up)",
                                   std::move(traj));
    }

    if (traj.times.empty() || traj.times.back() < cfg.t_end - 1e-9 * std::max(1.0, cfg.t_end))
        record(cfg.t_end, y);
    return traj;
}

} // namespace

void IntegratorConfig::validate() const {
    if (!std::isfinite(rel_tol) || !std::isfinite(abs_tol) || !(rel_tol > 0.0) ||
        !(abs_tol > 0.0))
        throw InvalidInputError("integrator tolerances must be positive");
    if (!std::isfinite(t_end) || !(t_end > 0.0))
        throw InvalidInputError("t_end must be positive");
    if (!std::isfinite(max_step) || !(max_step > 0.0))
        throw InvalidInputError("max_step must be positive");
    if (!std::isfinite(dense_output_dt) || !(dense_output_dt > 0.0))
        throw InvalidInputError("dense_output_dt must be positive");
}

Trajectory integrate(const OriginalParams& p, const State& s0, const IntegratorConfig& cfg) {
    return run(p, s0, cfg, UnitSystem::Original);
}

Trajectory integrate(const NormalizedParams& p, const State& s0, const IntegratorConfig& cfg) {
    return run(p, s0, cfg, UnitSystem::Normalized);
}

Trajectory dimensionalize_trajectory(const Trajectory& traj, const ScaleMap& sm) {
    if (traj.units != UnitSystem::Normalized)
        throw UnitMismatchError("dimensionalize_trajectory expects a normalized-unit trajectory");
    const auto* np = std::get_if<NormalizedParams>(&traj.params);
    if (np == nullptr)
        throw UnitMismatchError("trajectory does not carry normalized parameters");
    if (!(sm.y_scale > 0.0) || !(sm.t_scale > 0.0))
        throw InvalidInputError("scale map factors must be positive");

    Trajectory out;
    out.units = UnitSystem::Original;
    out.params = dimensionalize(*np, sm);
    out.times.reserve(traj.times.size());
    out.states.reserve(traj.states.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out.times.push_back(traj.times[i] / sm.t_scale);
        out.states.push_back(State{traj.states[i].x, traj.states[i].y / sm.y_scale});
    }
    return out;
}

} // namespace nemadyn
