// suav: self-powered solar UAV analysis toolkit.
//
// Subcommands map onto the library modules: solar-speed and
// accel-frontier are the closed-form energy-budget tools, pv-curve the
// diode cell model, simulate the closed-loop tracking runs, gain-map and
// ouq-bounds the bounded-uncertainty machinery.
//
// Exit codes: 0 success / self-powered, 1 usage or parse error,
// 2 self-powered condition failed, 3 simulation diverged, 4 infeasible
// constraint set.

#include <CLI11.hpp>

#include "suav/csv.hpp"
#include "suav/errors.hpp"
#include "suav/scenario.hpp"
#include "suav/solar_speed.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using suav::csv::format_float;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotSelfPowered = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitInfeasible = 4;

struct GlobalOptions {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir = ".";
    std::string format = "csv";
};

struct ManifestWriter {
    suav::scenario::RunManifest manifest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    fs::path out_dir;

    void add(const fs::path &file) { manifest.output_files.push_back(file.string()); }

    void finish() {
        if (manifest.output_files.empty()) return;
        manifest.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        suav::csv::write_file((out_dir / "manifest.txt").string(),
                              suav::scenario::format_manifest(manifest));
    }
};

fs::path prepare_out_dir(const GlobalOptions &global) {
    fs::path dir(global.out_dir);
    fs::create_directories(dir);
    return dir;
}

// --- solar-speed ------------------------------------------------------------

struct SolarSpeedArgs {
    std::string shape;
    double length = 0.0, b = 0.0, a = 0.0, height_d = 0.0;
    double eta = 0.0;
    double cd_max = 0.0, cd_actual = 0.0;
    double apv = 0.0;
    double rho = 1.2;
    double irradiance = 1000.0;
    bool table = false;
    double ratio_min = 0.1, ratio_max = 10.0;
    int samples = 50;
    std::vector<double> eta_list;
    std::string out_file = "speed_table.csv";
};

int run_solar_speed(const SolarSpeedArgs &args, const GlobalOptions &global) {
    using namespace suav::solar_speed;

    const bool cuboid = args.shape == "cuboid";
    const double cd_max = args.cd_max > 0.0 ? args.cd_max : (cuboid ? 2.0 : 1.0);
    const double cd_actual = args.cd_actual > 0.0 ? args.cd_actual : cd_max;

    if (args.table) {
        const auto rows =
            speed_table(cuboid ? HullShape::Cuboid : HullShape::Ellipsoid,
                        args.eta_list.empty() ? std::vector<double>{args.eta} : args.eta_list,
                        args.ratio_min, args.ratio_max, args.samples, cd_max, args.rho,
                        args.irradiance);
        ManifestWriter manifest{{}, std::chrono::steady_clock::now(), prepare_out_dir(global)};
        manifest.manifest.seed = global.seed;
        const fs::path out = manifest.out_dir / args.out_file;
        suav::csv::write_file(out.string(), suav::csv::speed_table_csv(rows));
        manifest.add(out);
        manifest.finish();
        std::cout << "rows=" << rows.size() << " written to " << out.string() << "\n";
        return kExitOk;
    }

    SpeedQuery query;
    query.efficiency = args.eta;
    query.air_density = args.rho;
    query.irradiance_w_per_m2 = args.irradiance;
    if (args.apv > 0.0) query.pv_area_m2 = args.apv;

    double speed = 0.0;
    if (cuboid) {
        if (!(args.a > 0.0)) throw suav::ConfigError("--shape cuboid requires --a (width, m)");
        query.geometry = HullGeometry::cuboid(args.a, args.b, args.length, cd_max, cd_actual);
        speed = cuboid_speed(query);
    } else {
        if (!(args.height_d > 0.0))
            throw suav::ConfigError("--shape ellipsoid requires --D (height, m)");
        query.geometry =
            HullGeometry::ellipsoid(args.height_d, args.b, args.length, cd_max, cd_actual);
        speed = ellipsoid_speed(query);
    }
    std::cout << "v_solar_mps=" << format_float(speed) << "\n";
    return kExitOk;
}

// --- simulate ---------------------------------------------------------------

int run_simulate(const std::string &scenario_path, const GlobalOptions &global) {
    std::string raw;
    const suav::scenario::Scenario scenario = suav::scenario::load_scenario(scenario_path, &raw);

    ManifestWriter manifest{{}, std::chrono::steady_clock::now(), prepare_out_dir(global)};
    manifest.manifest.scenario_hash = suav::scenario::fnv1a_hex(raw);
    manifest.manifest.seed = global.seed;

    suav::control::SimResult result;
    try {
        result = suav::control::simulate_closed_loop(scenario.control);
    } catch (const suav::DivergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    }

    const fs::path series_path = manifest.out_dir / scenario.output.series_csv;
    suav::csv::write_file(series_path.string(), suav::csv::sim_result_csv(result));
    manifest.add(series_path);

    std::ostringstream metrics;
    if (result.metrics_x) metrics << suav::control::format_metrics("x", *result.metrics_x);
    if (result.metrics_z) metrics << suav::control::format_metrics("z", *result.metrics_z);
    if (result.metrics_theta)
        metrics << suav::control::format_metrics("theta", *result.metrics_theta);
    const fs::path metrics_path = manifest.out_dir / scenario.output.metrics_txt;
    suav::csv::write_file(metrics_path.string(), metrics.str());
    manifest.add(metrics_path);
    std::cout << metrics.str();

    const suav::control::DutyCycleReport report =
        suav::control::duty_cycle_report(result, scenario.duty_cycles);
    std::ostringstream duty;
    for (const auto &seg : report.segments) {
        duty << "duty_cycle " << format_float(seg.t_start) << ".." << format_float(seg.t_end)
             << ": max_pnon=" << format_float(seg.max_pnon)
             << " mean_pnon=" << format_float(seg.mean_pnon)
             << " self_powered=" << (seg.self_powered ? "yes" : "no") << "\n";
    }
    const fs::path duty_path = manifest.out_dir / scenario.output.duty_report_txt;
    suav::csv::write_file(duty_path.string(), duty.str());
    manifest.add(duty_path);
    std::cout << duty.str();
    manifest.finish();

    return report.all_self_powered() ? kExitOk : kExitNotSelfPowered;
}

// --- gain-map ---------------------------------------------------------------

struct GainMapArgs {
    std::string scenario_path;
    std::optional<double> kp_min, kp_max, kd_min, kd_max;
    std::optional<int> kp_count, kd_count;
    std::string out_file = "gain_map.csv";
    bool feasible = false;
    std::optional<double> max_pnon, max_overshoot, min_velocity, max_peak_time;
};

int run_gain_map(const GainMapArgs &args, const GlobalOptions &global) {
    std::string raw;
    const suav::scenario::Scenario scenario =
        suav::scenario::load_scenario(args.scenario_path, &raw);
    const auto &section = scenario.ouq_section;

    suav::ouq::BoundedInput kp_range{"kp", args.kp_min.value_or(section.kp_min),
                                     args.kp_max.value_or(section.kp_max), 2};
    suav::ouq::BoundedInput kd_range{"kd", args.kd_min.value_or(section.kd_min),
                                     args.kd_max.value_or(section.kd_max), 2};
    const int kp_count = args.kp_count.value_or(section.kp_count);
    const int kd_count = args.kd_count.value_or(section.kd_count);

    const suav::ouq::GainMap map =
        suav::ouq::gain_region_map(scenario.control, kp_range, kd_range, kp_count, kd_count);

    std::optional<suav::ouq::FeasibleRegion> region;
    if (args.feasible) {
        suav::ouq::FeasibilityConstraints constraints;
        constraints.max_pnon = args.max_pnon ? args.max_pnon : std::optional<double>(1.0);
        constraints.max_overshoot = args.max_overshoot;
        constraints.min_velocity = args.min_velocity;
        constraints.max_peak_time = args.max_peak_time;
        region = suav::ouq::feasible_region(map, constraints);
        std::cout << "feasible_cells=" << region->feasible_count << " kp=["
                  << format_float(region->kp_min) << "," << format_float(region->kp_max)
                  << "] kd=[" << format_float(region->kd_min) << ","
                  << format_float(region->kd_max) << "]\n";
    }

    ManifestWriter manifest{{}, std::chrono::steady_clock::now(), prepare_out_dir(global)};
    manifest.manifest.scenario_hash = suav::scenario::fnv1a_hex(raw);
    manifest.manifest.seed = global.seed;
    const fs::path out = manifest.out_dir / args.out_file;
    suav::csv::write_file(out.string(), suav::csv::gain_map_csv(map, region));
    manifest.add(out);
    manifest.finish();
    std::cout << "cells=" << map.cells.size() << " written to " << out.string() << "\n";
    return kExitOk;
}

// --- ouq-bounds -------------------------------------------------------------

int run_ouq_bounds(const std::string &scenario_path, const GlobalOptions &global,
                   const std::string &out_file) {
    std::string raw;
    const suav::scenario::Scenario scenario = suav::scenario::load_scenario(scenario_path, &raw);
    if (!scenario.ouq_section.present)
        throw suav::ConfigError("scenario has no [ouq] section");
    if (scenario.ouq_section.inputs.empty())
        throw suav::ConfigError("the [ouq] section declares no inputs");

    suav::ouq::AdmissibleSet admissible;
    admissible.inputs = scenario.ouq_section.inputs;
    admissible.mean_constraint = scenario.ouq_section.mean_constraint;
    admissible.response = suav::scenario::build_ouq_response(scenario);

    suav::ouq::SearchBudget budget;
    budget.starts = scenario.ouq_section.starts;
    budget.iterations = scenario.ouq_section.iterations;
    budget.seed = global.seed_given ? global.seed : scenario.ouq_section.seed;

    const suav::ouq::BoundEstimate upper = suav::ouq::ouq_upper_bound(admissible, budget);
    const suav::ouq::BoundEstimate lower = suav::ouq::ouq_lower_bound(admissible, budget);

    std::ostringstream report;
    report << "seed=" << budget.seed << "\n";
    report << "starts=" << budget.starts << " iterations=" << budget.iterations << "\n";
    report << "upper_bound=" << format_float(upper.value)
           << " feasible=" << (upper.feasible ? "yes" : "no")
           << " evaluations=" << upper.response_evaluations << "\n";
    report << "lower_bound=" << format_float(lower.value)
           << " feasible=" << (lower.feasible ? "yes" : "no")
           << " evaluations=" << lower.response_evaluations << "\n";
    const auto describe = [&](const char *name, const suav::ouq::BoundEstimate &bound) {
        report << name << "_witness:\n";
        for (std::size_t j = 0; j < bound.witness.marginals.size(); ++j) {
            report << "  " << admissible.inputs[j].name << ":";
            for (const auto &atom : bound.witness.marginals[j])
                report << " (" << format_float(atom.location) << ", "
                       << format_float(atom.weight) << ")";
            report << "\n";
        }
    };
    describe("upper", upper);
    describe("lower", lower);

    std::cout << report.str();
    ManifestWriter manifest{{}, std::chrono::steady_clock::now(), prepare_out_dir(global)};
    manifest.manifest.scenario_hash = suav::scenario::fnv1a_hex(raw);
    manifest.manifest.seed = budget.seed;
    const fs::path out = manifest.out_dir / out_file;
    suav::csv::write_file(out.string(), report.str());
    manifest.add(out);
    manifest.finish();

    return (upper.feasible && lower.feasible) ? kExitOk : kExitInfeasible;
}

// --- pv-curve ---------------------------------------------------------------

struct PvCurveArgs {
    suav::powertrain::PvCellParams cell;
    double v_max = 0.80;
    int samples = 200;
    std::string out_file = "pv_curve.csv";
};

int run_pv_curve(const PvCurveArgs &args, const GlobalOptions &global) {
    const auto curve = suav::powertrain::pv_iv_curve(args.cell, args.v_max, args.samples);
    const auto mpp = suav::powertrain::pv_max_power_point(args.cell, args.v_max, args.samples);
    ManifestWriter manifest{{}, std::chrono::steady_clock::now(), prepare_out_dir(global)};
    manifest.manifest.seed = global.seed;
    const fs::path out = manifest.out_dir / args.out_file;
    suav::csv::write_file(out.string(), suav::csv::pv_curve_csv(curve));
    manifest.add(out);
    manifest.finish();
    std::cout << "mpp_w=" << format_float(mpp.power_w) << " at_v=" << format_float(mpp.voltage_v)
              << "\n";
    std::cout << "rows=" << curve.size() << " written to " << out.string() << "\n";
    return kExitOk;
}

// --- accel-frontier ---------------------------------------------------------

struct FrontierArgs {
    double mass = 11.3;
    double cd = 1.0;
    double area = 4.9087385212340519;
    double rho = 1.2;
    double pg = 0.0;
    double eta = 0.0;
    double apv = 0.0;
    double irradiance = 1000.0;
    double v_min = 0.0;
    int samples = 100;
    std::string out_file = "accel_frontier.csv";
};

int run_frontier(const FrontierArgs &args, const GlobalOptions &global) {
    using namespace suav::solar_speed;
    const double pg = args.pg > 0.0 ? args.pg : args.irradiance * args.eta * args.apv;
    if (!(pg > 0.0))
        throw suav::ConfigError("supply either --pg or --eta with --apv");
    const DragSpec drag{args.cd, args.area, args.rho};
    const double v_solar = frontier_speed(args.mass, drag, pg);
    const double v_min = args.v_min > 0.0 ? args.v_min : v_solar / 100.0;
    if (v_min >= v_solar) throw suav::ConfigError("--v-min must lie below the solar-powered speed");

    std::vector<std::pair<double, double>> rows;
    rows.reserve(static_cast<std::size_t>(args.samples));
    for (int k = 0; k < args.samples; ++k) {
        const double v =
            v_min + (v_solar - v_min) * static_cast<double>(k) / (args.samples - 1);
        rows.emplace_back(v, accel_frontier(v, args.mass, drag, pg));
    }
    ManifestWriter manifest{{}, std::chrono::steady_clock::now(), prepare_out_dir(global)};
    manifest.manifest.seed = global.seed;
    const fs::path out = manifest.out_dir / args.out_file;
    suav::csv::write_file(out.string(), suav::csv::frontier_csv(rows));
    manifest.add(out);
    manifest.finish();
    std::cout << "v_solar_mps=" << format_float(v_solar) << "\n";
    std::cout << "rows=" << rows.size() << " written to " << out.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"suav: self-powered solar UAV analysis toolkit"};
    app.set_version_flag("--version", suav::scenario::kToolVersion);
    app.require_subcommand(1);

    GlobalOptions global;
    auto *seed_opt = app.add_option("--seed", global.seed, "Random seed for search commands");
    app.add_option("--out-dir", global.out_dir, "Directory for output files");
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"csv"}));

    // solar-speed
    SolarSpeedArgs speed_args;
    auto *speed_cmd = app.add_subcommand("solar-speed", "Closed-form solar-powered speed");
    speed_cmd->add_option("--shape", speed_args.shape, "Hull shape")
        ->required()
        ->check(CLI::IsMember({"cuboid", "ellipsoid"}));
    speed_cmd->add_option("--L", speed_args.length, "Hull length, m")->required();
    speed_cmd->add_option("--b", speed_args.b, "Hull width, m")->required();
    speed_cmd->add_option("--a", speed_args.a, "Cuboid width a, m");
    speed_cmd->add_option("--D", speed_args.height_d, "Ellipsoid height D, m");
    speed_cmd->add_option("--eta", speed_args.eta, "Overall PV system efficiency, (0,1)")
        ->required()
        ->check(CLI::Range(1e-9, 0.999999));
    speed_cmd->add_option("--cd-max", speed_args.cd_max, "Reference drag coefficient");
    speed_cmd->add_option("--cd-actual", speed_args.cd_actual, "Actual drag coefficient");
    speed_cmd->add_option("--apv", speed_args.apv, "PV area for partial coverage, m^2");
    speed_cmd->add_option("--rho", speed_args.rho, "Air density, kg/m^3");
    speed_cmd->add_option("--irradiance", speed_args.irradiance, "Irradiance, W/m^2");
    speed_cmd->add_flag("--table", speed_args.table, "Emit a ratio x efficiency table");
    speed_cmd->add_option("--ratio-min", speed_args.ratio_min, "Table ratio lower end");
    speed_cmd->add_option("--ratio-max", speed_args.ratio_max, "Table ratio upper end");
    speed_cmd->add_option("--samples", speed_args.samples, "Table samples per efficiency");
    speed_cmd->add_option("--eta-list", speed_args.eta_list, "Table efficiencies")
        ->delimiter(',');
    speed_cmd->add_option("--out", speed_args.out_file, "Table output file name");

    // simulate
    std::string simulate_scenario;
    auto *simulate_cmd = app.add_subcommand("simulate", "Closed-loop tracking simulation");
    simulate_cmd->add_option("scenario", simulate_scenario, "Scenario file")->required();

    // gain-map
    GainMapArgs map_args;
    auto *map_cmd = app.add_subcommand("gain-map", "Sweep force-channel gains over a grid");
    map_cmd->add_option("scenario", map_args.scenario_path, "Scenario template")->required();
    map_cmd->add_option("--kp-min", map_args.kp_min, "Grid kp lower end");
    map_cmd->add_option("--kp-max", map_args.kp_max, "Grid kp upper end");
    map_cmd->add_option("--kp-count", map_args.kp_count, "Grid kp samples");
    map_cmd->add_option("--kd-min", map_args.kd_min, "Grid kd lower end");
    map_cmd->add_option("--kd-max", map_args.kd_max, "Grid kd upper end");
    map_cmd->add_option("--kd-count", map_args.kd_count, "Grid kd samples");
    map_cmd->add_option("--out", map_args.out_file, "Map output file name");
    map_cmd->add_flag("--feasible", map_args.feasible, "Append a feasibility mask column");
    map_cmd->add_option("--max-pnon", map_args.max_pnon, "Feasibility: max P_non");
    map_cmd->add_option("--max-overshoot", map_args.max_overshoot, "Feasibility: max overshoot");
    map_cmd->add_option("--min-velocity", map_args.min_velocity, "Feasibility: min peak speed");
    map_cmd->add_option("--max-peak-time", map_args.max_peak_time, "Feasibility: max peak time");

    // ouq-bounds
    std::string ouq_scenario;
    std::string ouq_out = "ouq_bounds.txt";
    auto *ouq_cmd = app.add_subcommand("ouq-bounds", "Optimal bounds on the failure probability");
    ouq_cmd->add_option("scenario", ouq_scenario, "Scenario file with an [ouq] section")
        ->required();
    ouq_cmd->add_option("--out", ouq_out, "Report output file name");

    // pv-curve
    PvCurveArgs pv_args;
    auto *pv_cmd = app.add_subcommand("pv-curve", "Single-diode cell I-V and P-V curve");
    pv_cmd->add_option("--isc", pv_args.cell.short_circuit_current, "Short-circuit current, A");
    pv_cmd->add_option("--i0", pv_args.cell.dark_saturation_current, "Dark saturation current, A");
    pv_cmd->add_option("--rs", pv_args.cell.series_resistance, "Series resistance, ohm");
    pv_cmd->add_option("--rsh", pv_args.cell.shunt_resistance, "Shunt resistance, ohm");
    pv_cmd->add_option("--ideality", pv_args.cell.ideality, "Diode ideality factor");
    pv_cmd->add_option("--temperature", pv_args.cell.junction_temperature,
                       "Junction temperature, K");
    pv_cmd->add_option("--v-max", pv_args.v_max, "Curve voltage span, V");
    pv_cmd->add_option("--samples", pv_args.samples, "Curve samples");
    pv_cmd->add_option("--out", pv_args.out_file, "Curve output file name");

    // accel-frontier
    FrontierArgs frontier_args;
    auto *frontier_cmd =
        app.add_subcommand("accel-frontier", "Self-powered acceleration-velocity frontier");
    frontier_cmd->add_option("--mass", frontier_args.mass, "Vehicle mass, kg");
    frontier_cmd->add_option("--cd", frontier_args.cd, "Drag coefficient");
    frontier_cmd->add_option("--area", frontier_args.area, "Frontal area, m^2");
    frontier_cmd->add_option("--rho", frontier_args.rho, "Air density, kg/m^3");
    frontier_cmd->add_option("--pg", frontier_args.pg, "Generated PV power, W");
    frontier_cmd->add_option("--eta", frontier_args.eta, "PV efficiency (with --apv)");
    frontier_cmd->add_option("--apv", frontier_args.apv, "PV area, m^2 (with --eta)");
    frontier_cmd->add_option("--irradiance", frontier_args.irradiance, "Irradiance, W/m^2");
    frontier_cmd->add_option("--v-min", frontier_args.v_min, "Lowest sampled speed, m/s");
    frontier_cmd->add_option("--samples", frontier_args.samples, "Frontier samples");
    frontier_cmd->add_option("--out", frontier_args.out_file, "Frontier output file name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }
    global.seed_given = seed_opt->count() > 0;

    try {
        if (speed_cmd->parsed()) return run_solar_speed(speed_args, global);
        if (simulate_cmd->parsed()) return run_simulate(simulate_scenario, global);
        if (map_cmd->parsed()) return run_gain_map(map_args, global);
        if (ouq_cmd->parsed()) return run_ouq_bounds(ouq_scenario, global, ouq_out);
        if (pv_cmd->parsed()) return run_pv_curve(pv_args, global);
        if (frontier_cmd->parsed()) return run_frontier(frontier_args, global);
    } catch (const suav::ParseError &e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const suav::DivergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
