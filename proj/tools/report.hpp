#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nemadyn/attractor.hpp"
#include "nemadyn/bifurcation.hpp"
#include "nemadyn/equilibria.hpp"
#include "nemadyn/integrate.hpp"
#include "nemadyn/planner.hpp"

namespace nemadyn::cli {

using json = nlohmann::json;

// 17 significant digits: enough for exact double round-trips.
std::string fmt17(double v);

// Reporting boundary for densities: tiny negatives from roundoff print as 0.
double report_clamp(double v, double eps = 1e-9);

const char* to_string(StabilityClass c);
const char* to_string(EquilibriumKind k);
const char* to_string(RegimeLabel r);
const char* to_string(UnitSystem u);
const char* to_string(AttractorReport::Kind k);

json equilibrium_json(const Equilibrium& e, const ScaleMap* sm);
json thresholds_json(const Thresholds& th);
json hopf_json(const HopfReport& rep);
json saddle_node_json(const SaddleNodeReport& rep);
json certificate_json(const NoCycleCertificate& cert);
json plan_json(const OriginalParams& p, const ReleasePlan& plan);
json sweep_json(const SweepTable& table);

std::string sweep_csv(const SweepTable& table);
std::string trajectory_csv(const Trajectory& traj, double clamp_eps = 1e-9);

struct SvgScene {
    struct Path {
        std::vector<std::pair<double, double>> pts;
        std::string color;
        double width = 1.0;
    };
    struct Dot {
        double x = 0, y = 0;
        std::string color;
        double radius = 3.0;
    };
    std::vector<Path> paths;
    std::vector<Dot> dots;
    std::string x_label = "x";
    std::string y_label = "y";
};

std::string render_svg(const SvgScene& scene, int width = 640, int height = 480);

// Run manifest written next to every file artifact. The timestamp is the
// only field that varies between identical runs, which is why it lives here
// and never inside the data files.
json make_manifest(const std::string& command, const json& parameters, const json& tolerances,
                   bool partial = false);

void write_file(const std::filesystem::path& path, const std::string& content);

// Resolve an output path against NEMADYN_OUTPUT_DIR when it is relative.
std::filesystem::path resolve_output(const std::filesystem::path& path);

} // namespace nemadyn::cli
