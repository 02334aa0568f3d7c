#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace nemadyn::cli {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double report_clamp(double v, double eps) {
    if (v < 0.0 && v > -eps) return 0.0;
    if (v == 0.0) return 0.0; // normalize -0
    return v;
}

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Saddle: return "saddle";
        case StabilityClass::StableNode: return "stable node";
        case StabilityClass::UnstableNode: return "unstable node";
        case StabilityClass::StableFocus: return "stable focus";
        case StabilityClass::UnstableFocus: return "unstable focus";
        case StabilityClass::CenterTypeStableFocus: return "center-type stable focus";
        case StabilityClass::AttractingSaddleNode: return "attracting saddle node";
        case StabilityClass::DegenerateOther: return "degenerate";
    }
    return "?";
}

const char* to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::Origin: return "origin";
        case EquilibriumKind::PestFree: return "pest-free";
        case EquilibriumKind::Coexistence: return "coexistence";
    }
    return "?";
}

const char* to_string(RegimeLabel r) {
    switch (r) {
        case RegimeLabel::BelowHopf: return "below-hopf";
        case RegimeLabel::AtHopf: return "at-hopf";
        case RegimeLabel::Controlled: return "controlled";
        case RegimeLabel::AtElimination: return "at-elimination";
        case RegimeLabel::Eliminating: return "eliminating";
    }
    return "?";
}

const char* to_string(UnitSystem u) {
    return u == UnitSystem::Original ? "original" : "normalized";
}

const char* to_string(AttractorReport::Kind k) {
    switch (k) {
        case AttractorReport::Kind::Equilibrium: return "equilibrium";
        case AttractorReport::Kind::LimitCycle: return "limit-cycle";
        case AttractorReport::Kind::Undecided: return "undecided";
    }
    return "?";
}

json equilibrium_json(const Equilibrium& e, const ScaleMap* sm) {
    json j;
    j["kind"] = to_string(e.kind);
    j["class"] = to_string(e.cls);
    j["x"] = report_clamp(e.location.x);
    j["y"] = report_clamp(e.location.y);
    j["eigenvalues"] = json::array({json::array({e.lambda1.real(), e.lambda1.imag()}),
                                    json::array({e.lambda2.real(), e.lambda2.imag()})});
    j["units"] = to_string(e.units);
    if (sm != nullptr && e.units == UnitSystem::Normalized) {
        j["x_original"] = report_clamp(e.location.x);
        j["y_original"] = report_clamp(e.location.y / sm->y_scale);
    }
    return j;
}

json thresholds_json(const Thresholds& th) {
    return json{{"y3", th.y3}, {"u0", th.u0}, {"u_hopf", th.u_hopf}};
}

json hopf_json(const HopfReport& rep) {
    json j;
    j["u_critical"] = rep.u_critical;
    j["alpha"] = rep.alpha;
    j["beta"] = rep.beta;
    j["alpha_prime"] = rep.alpha_prime;
    j["alpha1"] = rep.alpha1;
    j["l1"] = rep.l1;
    j["omega"] = rep.omega;
    j["predicted_period"] = rep.predicted_period;
    j["verdict"] = rep.verdict;
    return j;
}

json saddle_node_json(const SaddleNodeReport& rep) {
    return json{{"u_critical", rep.u_critical},
                {"quadratic_coefficient", rep.quadratic_coefficient},
                {"verdict", rep.verdict}};
}

json certificate_json(const NoCycleCertificate& cert) {
    return json{{"divergence_constant", cert.divergence_constant},
                {"max_abs_deviation", cert.max_abs_deviation},
                {"samples", cert.samples},
                {"pass", cert.pass}};
}

json plan_json(const OriginalParams& p, const ReleasePlan& plan) {
    json j;
    j["input"] = json{{"r", p.r}, {"k", p.k}, {"c", p.c}, {"m", p.m}};
    j["y3_original"] = plan.y3_original;
    j["u_eliminate"] = plan.u_eliminate;
    j["u_control"] = plan.u_control;
    j["u_eliminate_published_form"] = plan.u_eliminate_published_form;
    j["notes"] = plan.notes;
    return j;
}

json sweep_json(const SweepTable& table) {
    json rows = json::array();
    for (const SweepRow& row : table.rows) {
        json r;
        r["u"] = row.u;
        r["regime"] = to_string(row.regime);
        r["pest_free"] = equilibrium_json(row.pest_free, nullptr);
        if (row.coexistence) r["coexistence"] = equilibrium_json(*row.coexistence, nullptr);
        if (row.sim_check) {
            r["sim_attractor"] = to_string(row.sim_check->kind);
            r["sim_matches"] = simulation_matches_regime(row);
        }
        rows.push_back(std::move(r));
    }
    return json{{"k", table.k}, {"m", table.m}, {"rows", rows}};
}

std::string sweep_csv(const SweepTable& table) {
    bool with_sim = false;
    for (const SweepRow& row : table.rows)
        if (row.sim_check) with_sim = true;

    std::ostringstream os;
    os << "u,regime,pest_free_y,pest_free_class,coexistence_exists,coexistence_x,"
          "coexistence_y,coexistence_class";
    if (with_sim) os << ",sim_attractor,sim_matches";
    os << "\n";
    for (const SweepRow& row : table.rows) {
        os << fmt17(row.u) << ',' << to_string(row.regime) << ','
           << fmt17(report_clamp(row.pest_free.location.y)) << ','
           << to_string(row.pest_free.cls) << ',';
        if (row.coexistence) {
            os << "1," << fmt17(report_clamp(row.coexistence->location.x)) << ','
               << fmt17(report_clamp(row.coexistence->location.y)) << ','
               << to_string(row.coexistence->cls);
        } else {
            os << "0,,,";
        }
        if (with_sim) {
            if (row.sim_check)
                os << ',' << to_string(row.sim_check->kind) << ','
                   << (simulation_matches_regime(row) ? "1" : "0");
            else
                os << ",,";
        }
        os << "\n";
    }
    return os.str();
}

std::string trajectory_csv(const Trajectory& traj, double clamp_eps) {
    std::ostringstream os;
    os << "t,x,y\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << fmt17(traj.times[i]) << ',' << fmt17(report_clamp(traj.states[i].x, clamp_eps))
           << ',' << fmt17(report_clamp(traj.states[i].y, clamp_eps)) << "\n";
    }
    return os.str();
}

std::string render_svg(const SvgScene& scene, int width, int height) {
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    bool first = true;
    const auto grow = [&](double x, double y) {
        if (first) {
            xlo = xhi = x;
            ylo = yhi = y;
            first = false;
        } else {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    };
    for (const auto& p : scene.paths)
        for (const auto& [x, y] : p.pts) grow(x, y);
    for (const auto& d : scene.dots) grow(d.x, d.y);
    if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
    if (yhi - ylo < 1e-12) yhi = ylo + 1.0;
    const double padx = 0.05 * (xhi - xlo), pady = 0.05 * (yhi - ylo);
    xlo -= padx;
    xhi += padx;
    ylo -= pady;
    yhi += pady;

    const double margin = 48.0;
    const double sx = (width - 2 * margin) / (xhi - xlo);
    const double sy = (height - 2 * margin) / (yhi - ylo);
    const auto px = [&](double x) { return margin + (x - xlo) * sx; };
    const auto py = [&](double y) { return height - margin - (y - ylo) * sy; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes with 5 ticks per side
    char buf[64];
    os << "<g stroke=\"#444\" stroke-width=\"1\" font-size=\"11\" font-family=\"sans-serif\">\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
       << "\" y2=\"" << height - margin << "\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
       << height - margin << "\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xlo + (xhi - xlo) * i / 4.0;
        const double yv = ylo + (yhi - ylo) * i / 4.0;
        std::snprintf(buf, sizeof buf, "%.3g", xv);
        os << "<line x1=\"" << px(xv) << "\" y1=\"" << height - margin << "\" x2=\"" << px(xv)
           << "\" y2=\"" << height - margin + 4 << "\"/>"
           << "<text x=\"" << px(xv) << "\" y=\"" << height - margin + 16
           << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#444\">" << buf << "</text>\n";
        std::snprintf(buf, sizeof buf, "%.3g", yv);
        os << "<line x1=\"" << margin - 4 << "\" y1=\"" << py(yv) << "\" x2=\"" << margin
           << "\" y2=\"" << py(yv) << "\"/>"
           << "<text x=\"" << margin - 6 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#444\">" << buf << "</text>\n";
    }
    os << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 32
       << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#444\">" << scene.x_label
       << "</text>\n";
    os << "<text x=\"" << margin << "\" y=\"" << margin - 8
       << "\" text-anchor=\"start\" stroke=\"none\" fill=\"#444\">" << scene.y_label
       << "</text>\n";
    os << "</g>\n";

    for (const auto& p : scene.paths) {
        if (p.pts.size() < 2) continue;
        os << "<polyline fill=\"none\" stroke=\"" << p.color << "\" stroke-width=\"" << p.width
           << "\" points=\"";
        for (const auto& [x, y] : p.pts) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
            os << buf;
        }
        os << "\"/>\n";
    }
    for (const auto& d : scene.dots) {
        os << "<circle cx=\"" << px(d.x) << "\" cy=\"" << py(d.y) << "\" r=\"" << d.radius
           << "\" fill=\"" << d.color << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

json make_manifest(const std::string& command, const json& parameters, const json& tolerances,
                   bool partial) {
    char stamp[32] = "unknown";
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    if (gmtime_r(&now, &tm_utc) != nullptr)
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

    json j;
    j["command"] = command;
    j["version"] = NEMADYN_VERSION;
    j["parameters"] = parameters;
    j["tolerances"] = tolerances;
    j["timestamp"] = stamp;
    if (partial) j["partial"] = true;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << content;
}

std::filesystem::path resolve_output(const std::filesystem::path& path) {
    if (path.is_absolute()) return path;
    const char* base = std::getenv("NEMADYN_OUTPUT_DIR");
    if (base == nullptr || *base == '\0') return path;
    return std::filesystem::path(base) / path;
}

} // namespace nemadyn::cli
