#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nemadyn/attractor.hpp"
#include "nemadyn/bifurcation.hpp"
#include "nemadyn/equilibria.hpp"
#include "nemadyn/integrate.hpp"
#include "nemadyn/model.hpp"
#include "nemadyn/planner.hpp"
#include "report.hpp"

namespace {

using namespace nemadyn;
using nemadyn::cli::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnitFlags {
    bool original = false;
    bool normalized = false;
    double r = 0, k = 0, c = 0, m = 0, u = 0;
    CLI::Option* o_r = nullptr;
    CLI::Option* o_k = nullptr;
    CLI::Option* o_c = nullptr;
    CLI::Option* o_m = nullptr;

    void add_to(CLI::App* cmd) {
        cmd->add_flag("--original", original, "parameters are in original units (r,k,c,m,u)");
        cmd->add_flag("--normalized", normalized, "parameters are in rescaled units (k,m,u)");
        o_r = cmd->add_option("-r", r, "pest birth rate (original units)");
        o_k = cmd->add_option("-k", k, "inhibition level");
        o_c = cmd->add_option("-c", c, "predation/conversion rate (original units)");
        o_m = cmd->add_option("-m", m, "nematode death rate");
        cmd->add_option("-u", u, "nematode release rate (default 0)");
    }
};

struct Resolved {
    NormalizedParams np;
    std::optional<OriginalParams> op;
    std::optional<ScaleMap> sm;
};

Resolved resolve(const UnitFlags& uf) {
    if (uf.original == uf.normalized)
        throw UsageError("specify exactly one of --original or --normalized");
    if (uf.original) {
        if (!uf.o_r->count() || !uf.o_k->count() || !uf.o_c->count() || !uf.o_m->count())
            throw UsageError("--original requires -r, -k, -c and -m");
        OriginalParams op{uf.r, uf.k, uf.c, uf.m, uf.u};
        auto [np, sm] = nondimensionalize(op);
        return {np, op, sm};
    }
    if (!uf.o_k->count() || !uf.o_m->count())
        throw UsageError("--normalized requires -k and -m");
    return {NormalizedParams{uf.k, uf.m, uf.u}, std::nullopt, std::nullopt};
}

json input_json(const Resolved& rp) {
    json in;
    if (rp.op) {
        in["units"] = "original";
        in["r"] = rp.op->r;
        in["k"] = rp.op->k;
        in["c"] = rp.op->c;
        in["m"] = rp.op->m;
        in["u"] = rp.op->u;
        in["normalized_image"] = json{{"k", rp.np.k}, {"m", rp.np.m}, {"u", rp.np.u}};
        in["scale_map"] = json{{"y_scale", rp.sm->y_scale}, {"t_scale", rp.sm->t_scale}};
    } else {
        in["units"] = "normalized";
        in["k"] = rp.np.k;
        in["m"] = rp.np.m;
        in["u"] = rp.np.u;
    }
    return in;
}

void emit(const std::optional<std::string>& out, const std::string& data,
          const json& manifest) {
    if (!out) {
        std::cout << data;
        return;
    }
    const fs::path path = cli::resolve_output(*out);
    cli::write_file(path, data);
    cli::write_file(fs::path(path.string() + ".manifest.json"), manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const UnitFlags& uf, double tol, const std::optional<std::string>& out) {
    const Resolved rp = resolve(uf);
    rp.np.validate();
    const Thresholds th = thresholds(rp.np);
    const ScaleMap* sm = rp.sm ? &*rp.sm : nullptr;

    json j;
    j["input"] = input_json(rp);
    j["thresholds"] = cli::thresholds_json(th);

    const std::vector<Equilibrium> eqs =
        rp.np.u == 0.0 ? equilibria_no_release(rp.np) : equilibria_with_release(rp.np);
    json arr = json::array();
    for (const Equilibrium& e : eqs) arr.push_back(cli::equilibrium_json(e, sm));
    j["equilibria"] = arr;

    if (rp.np.u > 0.0) j["regime"] = cli::to_string(regime_of(rp.np.u, th, tol));
    j["hopf"] = cli::hopf_json(hopf_analysis(rp.np));
    if (rp.np.u > 0.0 && std::abs(rp.np.u - th.u0) <= 1e-9 * th.u0)
        j["saddle_node"] = cli::saddle_node_json(saddle_node_normal_form(rp.np));
    if (rp.np.u == 0.0) {
        const OriginalParams base =
            rp.op ? *rp.op : OriginalParams{1.0, rp.np.k, 1.0, rp.np.m, 0.0};
        j["no_cycle_certificate"] = cli::certificate_json(dulac_certificate(base, 200));
    }

    const json manifest = cli::make_manifest(
        "analyze", j["input"], json{{"classify_tol", tol}});
    emit(out, j.dump(2) + "\n", manifest);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

void add_integrator_flags(CLI::App* cmd, IntegratorConfig& cfg) {
    cmd->add_option("--t-end", cfg.t_end, "integration horizon");
    cmd->add_option("--rel-tol", cfg.rel_tol, "relative local error tolerance");
    cmd->add_option("--abs-tol", cfg.abs_tol, "absolute local error tolerance");
    cmd->add_option("--max-step", cfg.max_step, "maximum step size");
    cmd->add_option("--sample-dt", cfg.dense_output_dt, "dense output sampling interval");
}

json integrator_json(const IntegratorConfig& cfg) {
    return json{{"rel_tol", cfg.rel_tol},
                {"abs_tol", cfg.abs_tol},
                {"max_step", cfg.max_step},
                {"t_end", cfg.t_end},
                {"dense_output_dt", cfg.dense_output_dt}};
}

cli::SvgScene portrait_scene(const NormalizedParams& np,
                             const std::vector<const Trajectory*>& trajs,
                             const std::vector<Equilibrium>& eqs) {
    cli::SvgScene scene;
    static const char* kTrajColors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#17becf",
                                        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};
    double y_hi = 1.0;
    for (const Trajectory* t : trajs)
        for (const State& s : t->states) y_hi = std::max(y_hi, s.y);

    const Nullclines nc = nullclines(np, 1e-3, 1.05 * y_hi, 200);
    const auto to_pts = [](const std::vector<State>& ss) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(ss.size());
        for (const State& s : ss) pts.emplace_back(s.x, s.y);
        return pts;
    };
    scene.paths.push_back({to_pts(nc.pest_axis), "#bbbbbb", 1.0});
    scene.paths.push_back({to_pts(nc.pest_level), "#bbbbbb", 1.0});
    scene.paths.push_back({to_pts(nc.nematode_curve), "#999999", 1.0});

    for (std::size_t i = 0; i < trajs.size(); ++i)
        scene.paths.push_back(
            {to_pts(trajs[i]->states), kTrajColors[i % std::size(kTrajColors)], 1.2});
    for (const Equilibrium& e : eqs)
        scene.dots.push_back({e.location.x, e.location.y, "#d62728", 3.5});
    return scene;
}

int cmd_simulate(const UnitFlags& uf, double x0, double y0, const IntegratorConfig& cfg,
                 const std::optional<std::string>& out,
                 const std::optional<std::string>& svg) {
    const Resolved rp = resolve(uf);
    const State s0{x0, y0};
    s0.validate();

    Trajectory traj;
    bool partial = false;
    std::string failure;
    try {
        traj = rp.op ? integrate(*rp.op, s0, cfg) : integrate(rp.np, s0, cfg);
    } catch (const IntegrationError& e) {
        traj = e.partial();
        partial = true;
        failure = e.what();
    }

    json params = input_json(rp);
    params["x0"] = x0;
    params["y0"] = y0;
    const json manifest =
        cli::make_manifest("simulate", params, integrator_json(cfg), partial);
    emit(out, cli::trajectory_csv(traj, 10.0 * cfg.abs_tol), manifest);

    if (svg) {
        cli::SvgScene scene;
        if (!rp.op) {
            const std::vector<Equilibrium> eqs = rp.np.u == 0.0
                                                     ? equilibria_no_release(rp.np)
                                                     : equilibria_with_release(rp.np);
            scene = portrait_scene(rp.np, {&traj}, eqs);
        } else {
            std::vector<std::pair<double, double>> pts;
            for (const State& s : traj.states) pts.emplace_back(s.x, s.y);
            scene.paths.push_back({std::move(pts), "#1f77b4", 1.2});
        }
        cli::write_file(cli::resolve_output(*svg), cli::render_svg(scene));
    }

    if (partial) {
        std::cerr << "integration failed: " << failure << " (partial trajectory written)\n";
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

std::vector<double> parse_u_range(const std::string& range) {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || !(step > 0) ||
        !(lo > 0) || hi < lo)
        throw UsageError("malformed --u-range, expected lo:hi:step with lo>0, step>0, hi>=lo");
    std::vector<double> values;
    const auto count = static_cast<std::size_t>((hi - lo) / step + 1e-9) + 1;
    values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) values.push_back(lo + static_cast<double>(i) * step);
    return values;
}

int cmd_sweep(double k, double m, bool have_km, std::vector<double> u_values,
              const std::string& u_range, bool check, bool as_json,
              const std::optional<std::string>& out, const IntegratorConfig& cfg) {
    if (!have_km) throw UsageError("sweep requires -k and -m (normalized units)");
    if (!u_range.empty()) {
        const std::vector<double> more = parse_u_range(u_range);
        u_values.insert(u_values.end(), more.begin(), more.end());
    }
    if (u_values.empty()) throw UsageError("sweep requires -u values or --u-range");

    SweepOptions opts;
    opts.simulate = check;
    opts.cfg = cfg;
    const SweepTable table = sweep_u(k, m, std::move(u_values), opts);

    const json manifest = cli::make_manifest(
        "sweep", json{{"k", k}, {"m", m}, {"check", check}},
        json{{"classify_tol", kClassifyTol}});
    if (as_json)
        emit(out, cli::sweep_json(table).dump(2) + "\n", manifest);
    else
        emit(out, cli::sweep_csv(table), manifest);
    return 0;
}

// ---------------------------------------------------------------------------
// portrait

std::vector<State> parse_starts(const std::vector<std::string>& raw, const std::string& box,
                                int grid_n) {
    std::vector<State> starts;
    for (const std::string& s : raw) {
        double x = 0, y = 0;
        if (std::sscanf(s.c_str(), "%lf,%lf", &x, &y) != 2)
            throw UsageError("malformed --start, expected x,y");
        starts.push_back({x, y});
    }
    if (!box.empty()) {
        double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
        if (std::sscanf(box.c_str(), "%lf:%lf:%lf:%lf", &xlo, &xhi, &ylo, &yhi) != 4 ||
            xhi < xlo || yhi < ylo)
            throw UsageError("malformed --grid-box, expected xmin:xmax:ymin:ymax");
        if (grid_n < 1) throw UsageError("--grid-n must be at least 1");
        for (int i = 0; i < grid_n; ++i) {
            for (int j = 0; j < grid_n; ++j) {
                const double fx = grid_n == 1 ? 0.5 : static_cast<double>(i) / (grid_n - 1);
                const double fy = grid_n == 1 ? 0.5 : static_cast<double>(j) / (grid_n - 1);
                starts.push_back({xlo + fx * (xhi - xlo), ylo + fy * (yhi - ylo)});
            }
        }
    }
    return starts;
}

int cmd_portrait(double k, double m, double u, bool have_km,
                 const std::vector<std::string>& raw_starts, const std::string& box,
                 int grid_n, const IntegratorConfig& cfg, const std::string& out_dir,
                 const std::optional<std::string>& svg) {
    if (!have_km) throw UsageError("portrait requires -k and -m (normalized units)");
    const std::vector<State> starts = parse_starts(raw_starts, box, grid_n);
    if (starts.empty()) throw UsageError("portrait requires --start points or a --grid-box");
    for (const State& s : starts) s.validate();

    const NormalizedParams np{k, m, u};
    const std::vector<Equilibrium> eqs =
        u == 0.0 ? equilibria_no_release(np) : equilibria_with_release(np);
    const std::vector<BatchEntry> entries = phase_portrait_batch(np, starts, cfg);

    const fs::path dir = cli::resolve_output(out_dir);
    std::ostringstream index;
    index << "index,file,x0,y0,status,attractor,period\n";
    bool any_failed = false;
    std::vector<const Trajectory*> trajs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "traj_%03zu.csv", i);
        cli::write_file(dir / name, cli::trajectory_csv(entries[i].trajectory,
                                                        10.0 * cfg.abs_tol));
        trajs.push_back(&entries[i].trajectory);

        std::string attractor = "failed";
        std::string period;
        if (!entries[i].failed) {
            try {
                const AttractorReport rep = detect_attractor(entries[i].trajectory, eqs);
                attractor = cli::to_string(rep.kind);
                if (rep.kind == AttractorReport::Kind::Equilibrium)
                    attractor = std::string("equilibrium:") +
                                cli::to_string(eqs[rep.equilibrium_index].kind);
                if (rep.kind == AttractorReport::Kind::LimitCycle)
                    period = cli::fmt17(rep.period);
            } catch (const InsufficientDataError&) {
                attractor = "short";
            }
        } else {
            any_failed = true;
        }
        index << i << ',' << name << ',' << cli::fmt17(starts[i].x) << ','
              << cli::fmt17(starts[i].y) << ',' << (entries[i].failed ? "failed" : "ok") << ','
              << attractor << ',' << period << "\n";
    }
    cli::write_file(dir / "index.csv", index.str());

    json params{{"k", k}, {"m", m}, {"u", u}, {"trajectories", starts.size()}};
    cli::write_file(dir / "portrait.manifest.json",
                    cli::make_manifest("portrait", params, integrator_json(cfg), any_failed)
                            .dump(2) +
                        "\n");
    if (svg)
        cli::write_file(cli::resolve_output(*svg),
                        cli::render_svg(portrait_scene(np, trajs, eqs)));
    return any_failed ? 3 : 0;
}

// ---------------------------------------------------------------------------
// plan

int cmd_plan(double r, double k, double c, double m, bool have_all,
             const std::optional<std::string>& out) {
    if (!have_all) throw UsageError("plan requires -r, -k, -c and -m (original units)");
    const OriginalParams p{r, k, c, m, 0.0};
    const ReleasePlan plan = release_plan(p);
    const json manifest = cli::make_manifest(
        "plan", json{{"r", r}, {"k", k}, {"c", c}, {"m", m}},
        json{{"cross_validation_tol", 1e-10}});
    emit(out, cli::plan_json(p, plan).dump(2) + "\n", manifest);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pest-nematode release model: equilibria, bifurcation analysis, "
                 "simulation and release planning"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "equilibria, stability and thresholds");
    UnitFlags an_uf;
    an_uf.add_to(analyze);
    double an_tol = kClassifyTol;
    analyze->add_option("--tol", an_tol, "relative tolerance for threshold comparisons");
    std::optional<std::string> an_out;
    analyze->add_option("-o,--out", an_out, "write the JSON report to a file");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate one trajectory, CSV output");
    UnitFlags si_uf;
    si_uf.add_to(simulate);
    double si_x0 = 0, si_y0 = 0;
    simulate->add_option("--x0", si_x0, "initial pest density")->required();
    simulate->add_option("--y0", si_y0, "initial nematode density")->required();
    IntegratorConfig si_cfg;
    add_integrator_flags(simulate, si_cfg);
    std::optional<std::string> si_out, si_svg;
    simulate->add_option("-o,--out", si_out, "write CSV to a file");
    simulate->add_option("--svg", si_svg, "also render the phase plane to an SVG file");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "classify equilibria across release rates");
    double sw_k = 0, sw_m = 0;
    auto* sw_ko = sweep->add_option("-k", sw_k, "inhibition level (normalized)");
    auto* sw_mo = sweep->add_option("-m", sw_m, "death rate (normalized)");
    std::vector<double> sw_u;
    sweep->add_option("-u", sw_u, "release rates, comma separated")->delimiter(',');
    std::string sw_range;
    sweep->add_option("--u-range", sw_range, "release rate range lo:hi:step");
    bool sw_check = false;
    sweep->add_flag("--check", sw_check, "simulation spot check per row");
    bool sw_json = false;
    sweep->add_flag("--json", sw_json, "JSON output instead of CSV");
    std::optional<std::string> sw_out;
    sweep->add_option("-o,--out", sw_out, "write output to a file");
    IntegratorConfig sw_cfg;
    add_integrator_flags(sweep, sw_cfg);

    // portrait
    auto* portrait = app.add_subcommand("portrait", "batch of trajectories (normalized units)");
    double po_k = 0, po_m = 0, po_u = 0;
    auto* po_ko = portrait->add_option("-k", po_k, "inhibition level (normalized)");
    auto* po_mo = portrait->add_option("-m", po_m, "death rate (normalized)");
    portrait->add_option("-u", po_u, "release rate (normalized, default 0)");
    std::vector<std::string> po_starts;
    portrait->add_option("--start", po_starts, "initial condition x,y (repeatable)");
    std::string po_box;
    portrait->add_option("--grid-box", po_box, "lattice bounds xmin:xmax:ymin:ymax");
    int po_gridn = 0;
    portrait->add_option("--grid-n", po_gridn, "lattice points per side");
    IntegratorConfig po_cfg;
    add_integrator_flags(portrait, po_cfg);
    std::string po_out = "portrait";
    portrait->add_option("-o,--out", po_out, "output directory");
    std::optional<std::string> po_svg;
    portrait->add_option("--svg", po_svg, "render the batch to an SVG file");

    // plan
    auto* plan = app.add_subcommand("plan", "release-rate recommendations (original units)");
    double pl_r = 0, pl_k = 0, pl_c = 0, pl_m = 0;
    auto* pl_ro = plan->add_option("-r", pl_r, "pest birth rate");
    auto* pl_ko = plan->add_option("-k", pl_k, "inhibition level");
    auto* pl_co = plan->add_option("-c", pl_c, "predation/conversion rate");
    auto* pl_mo = plan->add_option("-m", pl_m, "nematode death rate");
    std::optional<std::string> pl_out;
    plan->add_option("-o,--out", pl_out, "write the JSON plan to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(an_uf, an_tol, an_out);
        if (simulate->parsed()) return cmd_simulate(si_uf, si_x0, si_y0, si_cfg, si_out, si_svg);
        if (sweep->parsed())
            return cmd_sweep(sw_k, sw_m, sw_ko->count() && sw_mo->count(), sw_u, sw_range,
                             sw_check, sw_json, sw_out, sw_cfg);
        if (portrait->parsed())
            return cmd_portrait(po_k, po_m, po_u, po_ko->count() && po_mo->count(), po_starts,
                                po_box, po_gridn, po_cfg, po_out, po_svg);
        if (plan->parsed())
            return cmd_plan(pl_r, pl_k, pl_c, pl_m,
                            pl_ro->count() && pl_ko->count() && pl_co->count() &&
                                pl_mo->count(),
                            pl_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const UnitMismatchError& e) {
        std::cerr << "unit mismatch: " << e.what() << "\n";
        return 2;
    } catch (const NotApplicableError& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return 2;
    } catch (const InternalConsistencyError& e) {
        std::cerr << "internal cross-validation failure: " << e.what() << "\n";
        return 4;
    } catch (const IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        return 3;
    } catch (const InsufficientDataError& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return 3;
    } catch (const NumericalInstabilityError& e) {
        std::cerr << "numerical instability: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
