#include "nemadyn/bifurcation.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace nemadyn {

namespace {

struct Extrapolated {
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
};

// Iterated Richardson extrapolation of a central-difference quotient with an
// even error expansion in h. Step sizes shrink geometrically; the returned
// error is the smallest inter-column change seen in the Neville tableau.
Extrapolated richardson(const std::function<double(double)>& quotient, double h0,
                        int levels = 6, double shrink = 1.6) {
    const double f2 = shrink * shrink;
    std::vector<std::vector<double>> tab;
    Extrapolated best;
    double h = h0;
    for (int i = 0; i < levels; ++i) {
        std::vector<double> row{quotient(h)};
        double fac = f2;
        for (int j = 1; j <= i; ++j) {
            row.push_back((row[j - 1] * fac - tab[i - 1][j - 1]) / (fac - 1.0));
            fac *= f2;
        }
        if (i == 0) best.value = row[0];
        for (int j = 1; j <= i; ++j) {
            const double err = std::max(std::abs(row[j] - row[j - 1]),
                                        std::abs(row[j] - tab[i - 1][j - 1]));
            if (err < best.error) {
                best.error = err;
                best.value = row[j];
            }
        }
        tab.push_back(std::move(row));
        h /= shrink;
    }
    return best;
}

double checked(const Extrapolated& e, const char* label) {
    if (e.error > 1e-5 * std::max(1.0, std::abs(e.value)))
        throw NumericalInstabilityError(std::string("difference quotient for ") + label +
                                        " did not converge");
    return e.value;
}

// Geometry of the critical point shared by both alpha1 routes.
struct HopfFrame {
    double y3, x3, u_critical;
    double alpha, beta;
    double shear, scale; // frame matrix ((1,0),(shear,scale)) mapping frame -> (X,Y)
    NormalizedParams at_critical;
};

HopfFrame hopf_frame(const NormalizedParams& p) {
    p.validate();
    const Thresholds th = thresholds(p);
    HopfFrame fr;
    fr.y3 = th.y3;
    fr.u_critical = th.u_hopf;
    fr.x3 = (p.m * th.y3 - th.u_hopf) / (th.y3 * th.y3);
    fr.at_critical = {p.k, p.m, th.u_hopf};

    const Jacobian2 j = jacobian(fr.at_critical, State{fr.x3, fr.y3});
    fr.alpha = j.trace() / 2.0;
    fr.beta = std::sqrt(j.det() - fr.alpha * fr.alpha);
    const double denom = fr.x3 * (p.k * fr.y3 * fr.y3 + 1.0);
    fr.shear = -fr.alpha / denom;
    fr.scale = fr.beta / denom;
    return fr;
}

} // namespace

HopfReport hopf_analysis(const NormalizedParams& p) {
    const HopfFrame fr = hopf_frame(p);
    const double k = p.k;

    HopfReport rep;
    rep.u_critical = fr.u_critical;
    rep.alpha = fr.alpha;
    rep.beta = fr.beta;
    rep.alpha_prime = -1.0 / fr.y3;
    rep.omega = std::sqrt(fr.x3 * (k * fr.y3 * fr.y3 + 1.0));

    const double kappa = std::sqrt(1.0 + 4.0 * k) - 1.0;
    const double m_factor = fr.scale; // beta / (x3*(k*y3^2+1))
    rep.alpha1 = (fr.x3 * fr.y3 * m_factor / (4.0 * fr.beta)) *
                 (kappa * kappa / ((kappa + 2.0) * (2.0 * kappa + 2.0)) - 1.0);
    rep.l1 = -rep.alpha1 / rep.alpha_prime;
    rep.predicted_period = 2.0 * std::numbers::pi / fr.beta;
    rep.verdict =
        "alpha1 < 0 and l1 < 0: a family of orbitally asymptotically stable periodic "
        "orbits exists for release rates just below u_critical, where the coexistence "
        "focus is unstable. Under the usual sign convention l1 < 0 is termed "
        "supercritical; sources orienting by the parameter side of the orbits label the "
        "same configuration subcritical.";
    return rep;
}

namespace detail {

NormalFramePartials normal_frame_partials(const NormalizedParams& p) {
    const HopfFrame fr = hopf_frame(p);

    // Frame coordinates (a,b): (X,Y) = (a, shear*a + scale*b) around the
    // critical point. Subtracting the rotation leaves the nonlinear parts.
    const auto deriv_at = [&fr](double a, double b) {
        const double X = a;
        const double Y = fr.shear * a + fr.scale * b;
        return vector_field_unchecked(fr.at_critical, State{fr.x3 + X, fr.y3 + Y});
    };
    const auto f = [&](double a, double b) {
        return deriv_at(a, b).dx - (fr.alpha * a - fr.beta * b);
    };
    const auto g = [&](double a, double b) {
        const Deriv d = deriv_at(a, b);
        return (-fr.shear / fr.scale) * d.dx + d.dy / fr.scale - (fr.beta * a + fr.alpha * b);
    };

    using Fn = std::function<double(double, double)>;
    const auto d2_aa = [](const Fn& w, double h) {
        return (w(h, 0) - 2.0 * w(0, 0) + w(-h, 0)) / (h * h);
    };
    const auto d2_bb = [](const Fn& w, double h) {
        return (w(0, h) - 2.0 * w(0, 0) + w(0, -h)) / (h * h);
    };
    const auto d2_ab = [](const Fn& w, double h) {
        return (w(h, h) - w(h, -h) - w(-h, h) + w(-h, -h)) / (4.0 * h * h);
    };
    const auto d3_aaa = [](const Fn& w, double h) {
        return (w(2 * h, 0) - 2.0 * w(h, 0) + 2.0 * w(-h, 0) - w(-2 * h, 0)) / (2.0 * h * h * h);
    };
    const auto d3_bbb = [](const Fn& w, double h) {
        return (w(0, 2 * h) - 2.0 * w(0, h) + 2.0 * w(0, -h) - w(0, -2 * h)) / (2.0 * h * h * h);
    };
    const auto d3_abb = [](const Fn& w, double h) {
        return (w(h, h) - 2.0 * w(h, 0) + w(h, -h) - w(-h, h) + 2.0 * w(-h, 0) - w(-h, -h)) /
               (2.0 * h * h * h);
    };
    const auto d3_aab = [](const Fn& w, double h) {
        return (w(h, h) - 2.0 * w(0, h) + w(-h, h) - w(h, -h) + 2.0 * w(0, -h) - w(-h, -h)) /
               (2.0 * h * h * h);
    };

    // Base steps per derivative order: large enough to stay clear of the
    // roundoff floor (~eps/h^2 and ~eps/h^3), small enough that the
    // extrapolation removes the truncation terms.
    const double h2 = 1e-2;
    const double h3 = 5e-2;

    NormalFramePartials out;
    out.beta = fr.beta;
    out.eta_to_y = fr.scale;
    out.fxx = checked(richardson([&](double h) { return d2_aa(f, h); }, h2), "Fxx");
    out.fyy = checked(richardson([&](double h) { return d2_bb(f, h); }, h2), "Fyy");
    out.fxy = checked(richardson([&](double h) { return d2_ab(f, h); }, h2), "Fxy");
    out.gxx = checked(richardson([&](double h) { return d2_aa(g, h); }, h2), "Gxx");
    out.gyy = checked(richardson([&](double h) { return d2_bb(g, h); }, h2), "Gyy");
    out.gxy = checked(richardson([&](double h) { return d2_ab(g, h); }, h2), "Gxy");
    out.fxxx = checked(richardson([&](double h) { return d3_aaa(f, h); }, h3), "Fxxx");
    out.fxyy = checked(richardson([&](double h) { return d3_abb(f, h); }, h3), "Fxyy");
    out.gxxy = checked(richardson([&](double h) { return d3_aab(g, h); }, h3), "Gxxy");
    out.gyyy = checked(richardson([&](double h) { return d3_bbb(g, h); }, h3), "Gyyy");
    return out;
}

} // namespace detail

double first_lyapunov_numeric(const NormalizedParams& p) {
    const detail::NormalFramePartials d = detail::normal_frame_partials(p);
    return (d.fxxx + d.fxyy + d.gxxy + d.gyyy) / 16.0 +
           (d.fxy * (d.fxx + d.fyy) - d.gxy * (d.gxx + d.gyy) - d.fxx * d.gxx +
            d.fyy * d.gyy) /
               (16.0 * d.beta);
}

SaddleNodeReport saddle_node_normal_form(const NormalizedParams& p) {
    p.validate();
    const Thresholds th = thresholds(p);
    if (std::abs(p.u - th.u0) > 1e-9 * th.u0)
        throw NotApplicableError("saddle-node normal form is defined at u = u0 only");

    const double y2 = p.u / p.m;
    SaddleNodeReport rep;
    rep.u_critical = th.u0;
    rep.quadratic_coefficient = y2 * y2 * (p.k * y2 * y2 + 1.0) / (p.m * p.m);
    rep.verdict =
        "attracting saddle node: the center-manifold flow has a positive quadratic "
        "coefficient after the time reversal that normalizes the hyperbolic direction, "
        "so nearby first-quadrant orbits are drawn in.";
    return rep;
}

} // namespace nemadyn
