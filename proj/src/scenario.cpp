#include "suav/scenario.hpp"

#include "suav/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace suav::scenario {

namespace {

struct KeyValue {
    std::string key;
    std::string value;
    int line;
    int column;
};

std::string trim(const std::string &s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const KeyValue &kv) {
    const std::string v = trim(kv.value);
    char *end = nullptr;
    const double result = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(result))
        throw ParseError("key '" + kv.key + "': expected a number, got '" + kv.value + "' (line " +
                             std::to_string(kv.line) + ")",
                         kv.line, kv.column);
    return result;
}

long parse_integer(const KeyValue &kv) {
    const double v = parse_number(kv);
    if (v != std::floor(v))
        throw ParseError("key '" + kv.key + "': expected an integer (line " +
                             std::to_string(kv.line) + ")",
                         kv.line, kv.column);
    return static_cast<long>(v);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(trim(current));
    return parts;
}

double parse_double_token(const std::string &token, const KeyValue &kv) {
    char *end = nullptr;
    const double result = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || !std::isfinite(result))
        throw ParseError("key '" + kv.key + "': bad number '" + token + "' (line " +
                             std::to_string(kv.line) + ")",
                         kv.line, kv.column);
    return result;
}

// "step 1.5" | "ramp 5" | "piecewise 0:0,10:5,30:5"
control::ReferenceSignal parse_reference(const KeyValue &kv) {
    std::istringstream in(trim(kv.value));
    std::string kind;
    in >> kind;
    std::string rest;
    std::getline(in, rest);
    rest = trim(rest);

    if (kind == "step") return control::ReferenceSignal::step(parse_double_token(rest, kv));
    if (kind == "ramp") return control::ReferenceSignal::ramp(parse_double_token(rest, kv));
    if (kind == "piecewise") {
        std::vector<std::pair<double, double>> breakpoints;
        for (const std::string &pair : split(rest, ',')) {
            const auto parts = split(pair, ':');
            if (parts.size() != 2)
                throw ParseError("key '" + kv.key + "': piecewise points are t:value (line " +
                                     std::to_string(kv.line) + ")",
                                 kv.line, kv.column);
            breakpoints.emplace_back(parse_double_token(parts[0], kv),
                                     parse_double_token(parts[1], kv));
        }
        try {
            return control::ReferenceSignal::piecewise(std::move(breakpoints));
        } catch (const ConfigError &e) {
            throw ParseError(std::string(e.what()) + " (line " + std::to_string(kv.line) + ")",
                             kv.line, kv.column);
        }
    }
    throw ParseError("key '" + kv.key + "': unknown reference kind '" + kind +
                         "' (expected step, ramp, or piecewise; line " + std::to_string(kv.line) +
                         ")",
                     kv.line, kv.column);
}

// "0:10,12:30"
std::vector<std::pair<double, double>> parse_segments(const KeyValue &kv) {
    std::vector<std::pair<double, double>> segments;
    for (const std::string &pair : split(trim(kv.value), ',')) {
        const auto parts = split(pair, ':');
        if (parts.size() != 2)
            throw ParseError("key '" + kv.key + "': segments are start:end (line " +
                                 std::to_string(kv.line) + ")",
                             kv.line, kv.column);
        segments.emplace_back(parse_double_token(parts[0], kv),
                              parse_double_token(parts[1], kv));
    }
    return segments;
}

// "name lower upper atoms"
ouq::BoundedInput parse_bounded_input(const KeyValue &kv) {
    std::istringstream in(trim(kv.value));
    ouq::BoundedInput input;
    long atoms = 0;
    if (!(in >> input.name >> input.lower >> input.upper >> atoms) || !in.eof())
        throw ParseError("key 'input': expected 'name lower upper support_points' (line " +
                             std::to_string(kv.line) + ")",
                         kv.line, kv.column);
    input.support_points = static_cast<int>(atoms);
    input.validate();
    return input;
}

[[noreturn]] void unknown_key(const std::string &section, const KeyValue &kv) {
    throw ParseError("unknown key '" + kv.key + "' in section [" + section + "] (line " +
                         std::to_string(kv.line) + ", column " + std::to_string(kv.column) + ")",
                     kv.line, kv.column);
}

void apply_vehicle(Scenario &s, const KeyValue &kv, bool &buoyancy_explicit) {
    auto &v = s.control.vehicle;
    if (kv.key == "mass_kg") v.mass_kg = parse_number(kv);
    else if (kv.key == "inertia_pitch_kgm2") {
        const double i = parse_number(kv);
        v.inertia = Mat3::diagonal(i, i, i);
    } else if (kv.key == "buoyancy_n") {
        if (trim(kv.value) == "neutral") {
            buoyancy_explicit = false;
        } else {
            v.buoyancy_n = parse_number(kv);
            buoyancy_explicit = true;
        }
    } else if (kv.key == "gravity_mps2") v.gravity = parse_number(kv);
    else if (kv.key == "drag_coeff_x") v.drag_coeff.x = parse_number(kv);
    else if (kv.key == "drag_coeff_z") v.drag_coeff.z = parse_number(kv);
    else if (kv.key == "frontal_area_x_m2") v.frontal_area.x = parse_number(kv);
    else if (kv.key == "frontal_area_z_m2") v.frontal_area.z = parse_number(kv);
    else if (kv.key == "air_density_kgpm3") v.air_density = parse_number(kv);
    else if (kv.key == "rot_damping_nms") {
        const double d = parse_number(kv);
        v.rot_damping = {d, d, d};
    }
    else if (kv.key == "velocity_cap_mps") v.velocity_cap = parse_number(kv);
    else unknown_key("vehicle", kv);
}

void apply_pv(Scenario &s, const KeyValue &kv) {
    auto &a = s.control.array;
    if (kv.key == "efficiency") a.overall_efficiency = parse_number(kv);
    else if (kv.key == "area_m2") a.total_area_m2 = parse_number(kv);
    else if (kv.key == "irradiance_wpm2") a.irradiance_w_per_m2 = parse_number(kv);
    else if (kv.key == "cell_isc_a") a.cell.short_circuit_current = parse_number(kv);
    else if (kv.key == "cell_i0_a") a.cell.dark_saturation_current = parse_number(kv);
    else if (kv.key == "cell_rs_ohm") a.cell.series_resistance = parse_number(kv);
    else if (kv.key == "cell_rsh_ohm") a.cell.shunt_resistance = parse_number(kv);
    else if (kv.key == "cell_ideality") a.cell.ideality = parse_number(kv);
    else if (kv.key == "cell_temperature_k") a.cell.junction_temperature = parse_number(kv);
    else unknown_key("pv", kv);
}

void apply_control(Scenario &s, const KeyValue &kv) {
    auto &c = s.control;
    if (kv.key == "force_kp") c.gains_force.kp = parse_number(kv);
    else if (kv.key == "force_ki") c.gains_force.ki = parse_number(kv);
    else if (kv.key == "force_kd") c.gains_force.kd = parse_number(kv);
    else if (kv.key == "pitch_kp") c.gains_pitch.kp = parse_number(kv);
    else if (kv.key == "pitch_ki") c.gains_pitch.ki = parse_number(kv);
    else if (kv.key == "pitch_kd") c.gains_pitch.kd = parse_number(kv);
    else if (kv.key == "x_ref") c.x_reference = parse_reference(kv);
    else if (kv.key == "z_ref") c.z_reference = parse_reference(kv);
    else if (kv.key == "theta_ref") c.theta_reference = parse_reference(kv);
    else if (kv.key == "force_limit_n") c.force_limit_n = parse_number(kv);
    else if (kv.key == "moment_limit_nm") c.moment_limit_nm = parse_number(kv);
    else if (kv.key == "actuator_lag_s") c.actuator_lag_s = parse_number(kv);
    else if (kv.key == "signed_power") c.signed_power = parse_integer(kv) != 0;
    else unknown_key("control", kv);
}

void apply_simulation(Scenario &s, const KeyValue &kv) {
    if (kv.key == "horizon_s") s.control.horizon_s = parse_number(kv);
    else if (kv.key == "dt_s") s.control.dt_s = parse_number(kv);
    else if (kv.key == "duty_cycles_s") s.duty_cycles = parse_segments(kv);
    else unknown_key("simulation", kv);
}

void apply_ouq(Scenario &s, const KeyValue &kv) {
    auto &o = s.ouq_section;
    o.present = true;
    if (kv.key == "response") o.response = trim(kv.value);
    else if (kv.key == "input") o.inputs.push_back(parse_bounded_input(kv));
    else if (kv.key == "mean_constraint") o.mean_constraint = parse_number(kv);
    else if (kv.key == "starts") o.starts = static_cast<int>(parse_integer(kv));
    else if (kv.key == "iterations") o.iterations = static_cast<int>(parse_integer(kv));
    else if (kv.key == "seed") o.seed = static_cast<std::uint64_t>(parse_integer(kv));
    else if (kv.key == "kp_min") o.kp_min = parse_number(kv);
    else if (kv.key == "kp_max") o.kp_max = parse_number(kv);
    else if (kv.key == "kp_count") o.kp_count = static_cast<int>(parse_integer(kv));
    else if (kv.key == "kd_min") o.kd_min = parse_number(kv);
    else if (kv.key == "kd_max") o.kd_max = parse_number(kv);
    else if (kv.key == "kd_count") o.kd_count = static_cast<int>(parse_integer(kv));
    else unknown_key("ouq", kv);
}

void apply_output(Scenario &s, const KeyValue &kv) {
    if (kv.key == "series_csv") s.output.series_csv = trim(kv.value);
    else if (kv.key == "metrics_txt") s.output.metrics_txt = trim(kv.value);
    else if (kv.key == "duty_report_txt") s.output.duty_report_txt = trim(kv.value);
    else unknown_key("output", kv);
}

} // namespace

Scenario parse_scenario(const std::string &text) {
    Scenario scenario;
    bool buoyancy_explicit = false;

    std::istringstream in(text);
    std::string raw_line;
    std::string section;
    int line_number = 0;
    while (std::getline(in, raw_line)) {
        ++line_number;
        std::string line = raw_line;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("unterminated section header (line " +
                                     std::to_string(line_number) + ")",
                                 line_number, 1);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "vehicle" && section != "pv" && section != "control" &&
                section != "simulation" && section != "ouq" && section != "output")
                throw ParseError("unknown section [" + section + "] (line " +
                                     std::to_string(line_number) + ")",
                                 line_number, 1);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value' (line " + std::to_string(line_number) + ")",
                             line_number, 1);
        KeyValue kv;
        kv.key = trim(line.substr(0, eq));
        kv.value = trim(line.substr(eq + 1));
        kv.line = line_number;
        kv.column = static_cast<int>(raw_line.find(kv.key)) + 1;
        if (section.empty())
            throw ParseError("key '" + kv.key + "' before any [section] (line " +
                                 std::to_string(line_number) + ")",
                             line_number, kv.column);

        if (section == "vehicle") apply_vehicle(scenario, kv, buoyancy_explicit);
        else if (section == "pv") apply_pv(scenario, kv);
        else if (section == "control") apply_control(scenario, kv);
        else if (section == "simulation") apply_simulation(scenario, kv);
        else if (section == "ouq") apply_ouq(scenario, kv);
        else apply_output(scenario, kv);
    }

    if (!buoyancy_explicit)
        scenario.control.vehicle.buoyancy_n =
            scenario.control.vehicle.mass_kg * scenario.control.vehicle.gravity;
    if (scenario.duty_cycles.empty())
        scenario.duty_cycles = {{0.0, scenario.control.horizon_s}};
    return scenario;
}

Scenario load_scenario(const std::string &path, std::string *raw_bytes) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    const std::string text = buffer.str();
    if (raw_bytes) *raw_bytes = text;
    return parse_scenario(text);
}

ouq::ResponseFunction build_ouq_response(const Scenario &scenario) {
    const auto &section = scenario.ouq_section;
    if (section.response == "input") {
        if (section.inputs.size() != 1)
            throw ConfigError("response 'input' needs exactly one [ouq] input");
        return [](const std::vector<double> &x) { return x.front(); };
    }
    if (section.response == "sim_pnon_max") {
        const control::ControlScenario base = scenario.control;
        std::vector<std::string> names;
        names.reserve(section.inputs.size());
        for (const auto &input : section.inputs) names.push_back(input.name);
        for (const auto &name : names) {
            if (name != "force_kp" && name != "force_ki" && name != "force_kd" &&
                name != "pitch_kp" && name != "pitch_ki" && name != "pitch_kd" &&
                name != "drag_coeff" && name != "pv_efficiency" && name != "irradiance_wpm2")
                throw ConfigError("unknown sim_pnon_max input '" + name + "'");
        }
        return [base, names](const std::vector<double> &x) {
            control::ControlScenario s = base;
            for (std::size_t i = 0; i < names.size(); ++i) {
                const double v = x[i];
                if (names[i] == "force_kp") s.gains_force.kp = v;
                else if (names[i] == "force_ki") s.gains_force.ki = v;
                else if (names[i] == "force_kd") s.gains_force.kd = v;
                else if (names[i] == "pitch_kp") s.gains_pitch.kp = v;
                else if (names[i] == "pitch_ki") s.gains_pitch.ki = v;
                else if (names[i] == "pitch_kd") s.gains_pitch.kd = v;
                else if (names[i] == "drag_coeff") s.vehicle.drag_coeff = {v, v, v};
                else if (names[i] == "pv_efficiency") s.array.overall_efficiency = v;
                else if (names[i] == "irradiance_wpm2") s.array.irradiance_w_per_m2 = v;
            }
            const control::SimResult res = control::simulate_closed_loop(s);
            double worst = 0.0;
            for (double p : res.pnon) worst = std::max(worst, p);
            return worst;
        };
    }
    throw ConfigError("unknown ouq response '" + section.response +
                      "' (expected input or sim_pnon_max)");
}

std::string fnv1a_hex(const std::string &bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

std::string format_manifest(const RunManifest &manifest) {
    std::ostringstream out;
    out << "tool_version=" << manifest.tool_version << "\n";
    out << "scenario_hash=" << manifest.scenario_hash << "\n";
    out << "seed=" << manifest.seed << "\n";
    out << "wall_clock_s=" << manifest.wall_clock_s << "\n";
    for (const auto &file : manifest.output_files) out << "output=" << file << "\n";
    return out.str();
}

} // namespace suav::scenario
