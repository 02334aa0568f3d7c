#include "nemadyn/attractor.hpp"

#include <algorithm>
#include <cmath>

namespace nemadyn {

namespace {

constexpr double kEquilibriumRadius = 1e-4;
constexpr double kPeakVariationTol = 1e-3;
constexpr double kMinSectionSwing = 1e-3;

double dist(const State& a, const State& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Peak {
    double t;
    double value;
    std::size_t index;
};

// Local maxima of x with parabolic refinement of the peak value and time.
std::vector<Peak> x_peaks(const Trajectory& traj, std::size_t first) {
    std::vector<Peak> peaks;
    for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < traj.size(); ++i) {
        const double xm = traj.states[i - 1].x;
        const double x0 = traj.states[i].x;
        const double xp = traj.states[i + 1].x;
        if (!(x0 > xm && x0 >= xp)) continue;
        const double denom = xm - 2.0 * x0 + xp;
        double value = x0;
        double t = traj.times[i];
        if (denom < 0.0) {
            const double delta = 0.5 * (xm - xp) / denom;
            value = x0 - 0.25 * (xm - xp) * delta;
            t += delta * (traj.times[i + 1] - traj.times[i]);
        }
        peaks.push_back({t, value, i});
    }
    return peaks;
}

} // namespace

AttractorReport detect_attractor(const Trajectory& traj,
                                 const std::vector<Equilibrium>& candidates) {
    const std::size_t n = traj.size();
    if (n < 50) throw InsufficientDataError("attractor detection needs at least 50 samples");

    AttractorReport rep;

    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].units != traj.units)
            throw UnitMismatchError("candidate equilibrium and trajectory use different units");
        const double d = dist(traj.states[n - 1], candidates[i].location);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    rep.terminal_residual = candidates.empty() ? 0.0 : best_d;

    if (best >= 0 && best_d < kEquilibriumRadius) {
        // non-increasing trend of the distance over the last quarter
        const std::size_t q = (3 * n) / 4;
        const std::size_t half = q + (n - q) / 2;
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = q; i < half; ++i)
            m1 += dist(traj.states[i], candidates[best].location);
        for (std::size_t i = half; i < n; ++i)
            m2 += dist(traj.states[i], candidates[best].location);
        m1 /= static_cast<double>(half - q);
        m2 /= static_cast<double>(n - half);
        if (m2 <= m1 * (1.0 + 1e-9) + 1e-12) {
            rep.kind = AttractorReport::Kind::Equilibrium;
            rep.equilibrium_index = best;
            return rep;
        }
    }

    const std::vector<Peak> peaks = x_peaks(traj, n / 2);
    if (peaks.size() >= 6) {
        // peak-to-peak amplitude per cycle: peak value minus the trough that
        // follows it, for the last five cycles
        std::vector<double> amps, spacings;
        for (std::size_t j = peaks.size() - 5; j < peaks.size(); ++j) {
            double trough = peaks[j - 1].value;
            for (std::size_t i = peaks[j - 1].index; i <= peaks[j].index; ++i)
                trough = std::min(trough, traj.states[i].x);
            amps.push_back(peaks[j].value - trough);
            spacings.push_back(peaks[j].t - peaks[j - 1].t);
        }
        const double mean_amp = (amps[0] + amps[1] + amps[2] + amps[3] + amps[4]) / 5.0;
        const auto [lo, hi] = std::minmax_element(amps.begin(), amps.end());
        rep.peak_variation = mean_amp > 0.0 ? (*hi - *lo) / mean_amp : 0.0;
        if (mean_amp > kMinSectionSwing && rep.peak_variation < kPeakVariationTol) {
            rep.kind = AttractorReport::Kind::LimitCycle;
            double mean_sp = 0.0;
            for (double s : spacings) mean_sp += s;
            rep.period = mean_sp / static_cast<double>(spacings.size());
            rep.amplitude_x = mean_amp;
            double ylo = traj.states[peaks[peaks.size() - 5].index].y, yhi = ylo;
            for (std::size_t i = peaks[peaks.size() - 5].index; i < n; ++i) {
                ylo = std::min(ylo, traj.states[i].y);
                yhi = std::max(yhi, traj.states[i].y);
            }
            rep.amplitude_y = yhi - ylo;
            return rep;
        }
    }

    rep.kind = AttractorReport::Kind::Undecided;
    return rep;
}

PeriodEstimate limit_cycle_period(const NormalizedParams& p, double perturbation,
                                  const IntegratorConfig& cfg) {
    p.validate();
    if (!std::isfinite(perturbation) || perturbation == 0.0)
        throw InvalidInputError("perturbation must be nonzero and finite");

    const std::vector<Equilibrium> eqs = equilibria_with_release(p);
    const auto coex = std::find_if(eqs.begin(), eqs.end(), [](const Equilibrium& e) {
        return e.kind == EquilibriumKind::Coexistence;
    });
    if (coex == eqs.end())
        throw NotApplicableError("no coexistence equilibrium at this release rate");

    const double y3 = coex->location.y;
    const State s0{coex->location.x + perturbation, y3};
    const Trajectory traj = integrate(p, s0, cfg);

    // measurement window: second half of the horizon
    std::size_t first = 0;
    while (first < traj.size() && traj.times[first] < cfg.t_end / 2.0) ++first;

    std::vector<double> crossings;
    double swing_lo = 0.0; // most negative y - y3 since the last counted crossing
    for (std::size_t i = first + 1; i < traj.size(); ++i) {
        swing_lo = std::min(swing_lo, traj.states[i - 1].y - y3);
        const double a = traj.states[i - 1].y;
        const double b = traj.states[i].y;
        if (a < y3 && b >= y3) {
            if (swing_lo <= -kMinSectionSwing) {
                const double frac = (y3 - a) / (b - a);
                crossings.push_back(traj.times[i - 1] +
                                    frac * (traj.times[i] - traj.times[i - 1]));
                swing_lo = 0.0;
            }
        }
    }

    if (crossings.size() < 8)
        throw InsufficientDataError("fewer than 8 qualifying section crossings; "
                                    "no sustained cycle detected");

    const std::size_t used = std::min<std::size_t>(crossings.size(), 16);
    const std::size_t start = crossings.size() - used;
    PeriodEstimate est;
    est.crossings = static_cast<int>(crossings.size());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    for (std::size_t i = start + 1; i < crossings.size(); ++i) {
        const double sp = crossings[i] - crossings[i - 1];
        sum += sp;
        lo = std::min(lo, sp);
        hi = std::max(hi, sp);
    }
    est.mean = sum / static_cast<double>(used - 1);
    est.spread = hi - lo;
    return est;
}

double nematode_nullcline_x(const NormalizedParams& p, double y) {
    p.validate();
    if (!(y > 0.0)) throw InvalidInputError("nullcline evaluation needs y > 0");
    return (p.m * y - p.u) / (y * y);
}

Nullclines nullclines(const NormalizedParams& p, double y_min, double y_max, int samples) {
    p.validate();
    if (!std::isfinite(y_min) || !std::isfinite(y_max) || !(y_min > 0.0) || !(y_max > y_min))
        throw InvalidInputError("nullclines need 0 < y_min < y_max");
    if (samples < 2) throw InvalidInputError("nullclines need at least 2 samples");

    Nullclines nc;
    nc.y3 = y3_of(p.k);
    nc.pest_axis = {State{0.0, y_min}, State{0.0, y_max}};

    const double y2 = p.u / p.m; // curve enters the quadrant at y = u/m
    if (p.u > 0.0 && y2 >= y_min && y2 <= y_max) nc.nematode_curve.push_back(State{0.0, y2});
    double x_max = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double y =
            y_min + (y_max - y_min) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double x = nematode_nullcline_x(p, y);
        if (x >= 0.0) {
            nc.nematode_curve.push_back(State{x, y});
            x_max = std::max(x_max, x);
        }
    }
    const double level_reach = std::max(1.05 * x_max, 0.1);
    nc.pest_level = {State{0.0, nc.y3}, State{level_reach, nc.y3}};
    return nc;
}

std::vector<BatchEntry> phase_portrait_batch(const NormalizedParams& p,
                                             const std::vector<State>& starts,
                                             const IntegratorConfig& cfg) {
    std::vector<BatchEntry> out;
    out.reserve(starts.size());
    for (const State& s0 : starts) {
        try {
            out.push_back({integrate(p, s0, cfg), false, {}});
        } catch (const IntegrationError& e) {
            out.push_back({e.partial(), true, e.what()});
        }
    }
    return out;
}

} // namespace nemadyn
