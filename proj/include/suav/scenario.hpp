#pragma once

#include "suav/control.hpp"
#include "suav/ouq.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace suav::scenario {

inline constexpr const char *kToolVersion = "0.1.0";

// Parsed scenario file. Sections: [vehicle], [pv], [control],
// [simulation], [ouq], [output]. Every key is optional (defaults are the
// reference vehicle); unknown sections or keys are rejected with their
// line number. Physical quantities carry explicit units in the key names.
struct Scenario {
    control::ControlScenario control;
    std::vector<std::pair<double, double>> duty_cycles; // defaults to the whole horizon

    struct OuqSection {
        bool present = false;
        std::string response = "input";
        std::vector<ouq::BoundedInput> inputs;
        double mean_constraint = 1.0;
        int starts = 32;
        int iterations = 40;
        std::uint64_t seed = 0;
        // Gain-map grid for the sweep commands.
        double kp_min = 0.0, kp_max = 1000.0;
        double kd_min = 0.0, kd_max = 1000.0;
        int kp_count = 41, kd_count = 41;
    } ouq_section;

    struct OutputSection {
        std::string series_csv = "series.csv";
        std::string metrics_txt = "metrics.txt";
        std::string duty_report_txt = "duty_report.txt";
    } output;
};

// Parse scenario text; throws ParseError with line/column on syntax or
// schema violations.
Scenario parse_scenario(const std::string &text);

// Load and parse a scenario file; also returns the raw bytes for hashing.
Scenario load_scenario(const std::string &path, std::string *raw_bytes = nullptr);

// Response function for the scenario's [ouq] section.
//   input        - value of the single input (analytic problems)
//   sim_pnon_max - max P_non of the closed loop with the named inputs
//                  overriding scenario quantities (force_kp, force_ki,
//                  force_kd, pitch_kp, pitch_ki, pitch_kd, drag_coeff,
//                  pv_efficiency, irradiance_wpm2)
ouq::ResponseFunction build_ouq_response(const Scenario &scenario);

// FNV-1a 64-bit hash, hex-encoded; used as the scenario fingerprint.
std::string fnv1a_hex(const std::string &bytes);

struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string scenario_hash = "none";
    std::uint64_t seed = 0;
    double wall_clock_s = 0.0;
    std::vector<std::string> output_files;
};

std::string format_manifest(const RunManifest &manifest);

} // namespace suav::scenario
