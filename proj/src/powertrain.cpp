#include "suav/powertrain.hpp"

#include "suav/errors.hpp"

#include <algorithm>
#include <cmath>

namespace suav::powertrain {

namespace {

constexpr double kElectronCharge = 1.602e-19; // C
constexpr double kBoltzmann = 1.381e-23;      // J/K

} // namespace

void MotorParams::validate() const {
    if (!(torque_constant > 0.0)) throw ConfigError("motor torque constant must be positive");
    if (!(voltage_constant > 0.0)) throw ConfigError("motor voltage constant must be positive");
    if (!(resistance > 0.0)) throw ConfigError("motor resistance must be positive");
}

bool MotorParams::constants_consistent(double rel_tol) const {
    return std::abs(torque_constant - voltage_constant) <= rel_tol * torque_constant;
}

void PvCellParams::validate() const {
    if (!(short_circuit_current > 0.0)) throw ConfigError("I_SC must be positive");
    if (!(dark_saturation_current > 0.0)) throw ConfigError("I_0 must be positive");
    if (series_resistance < 0.0) throw ConfigError("R_s must be non-negative");
    if (!(shunt_resistance > 0.0)) throw ConfigError("R_SH must be positive");
    if (!(junction_temperature > 0.0)) throw ConfigError("junction temperature must be positive");
    if (ideality < 1.0 || ideality > 2.0) throw ConfigError("ideality factor must be in [1, 2]");
}

void PvArrayConfig::validate() const {
    cell.validate();
    if (series_count < 1 || parallel_count < 1)
        throw ConfigError("cell counts must be positive");
    if (total_area_m2 < 0.0) throw ConfigError("PV area must be non-negative");
    if (!(overall_efficiency > 0.0 && overall_efficiency < 1.0))
        throw ConfigError("overall efficiency must be in (0, 1)");
    if (irradiance_w_per_m2 < 0.0) throw ConfigError("irradiance must be non-negative");
}

double motor_speed_derivative(double omega, double armature_current, const MotorParams &params) {
    if (!(params.rotor_inertia > 0.0)) throw ConfigError("rotor inertia must be positive");
    return (params.torque_constant * armature_current - params.prop_damping * omega) /
           params.rotor_inertia;
}

double torque_from_voltage(double supply_voltage, double omega, const MotorParams &params) {
    return params.torque_constant * (supply_voltage - params.voltage_constant * omega) /
           params.resistance;
}

double motor_power(double torque, double omega, const MotorParams &params) {
    const double current = torque / params.torque_constant;
    return (params.resistance * current + params.voltage_constant * omega) * current;
}

double motor_power_with_pv(double torque, double omega, double mode, double pv_current,
                           const MotorParams &params) {
    if (mode != 1.0 && mode != -1.0)
        throw DomainError("motor mode must be +1 (drive) or -1 (regenerative)");
    if (pv_current < 0.0) throw DomainError("PV current must be non-negative");
    const double current = torque / params.torque_constant;
    return (params.resistance * current + params.voltage_constant * omega) *
           (mode * current - pv_current);
}

double duty_cycle_power(double duty, double supply_voltage, double armature_current) {
    if (!(duty >= 0.0 && duty <= 1.0)) throw DomainError("duty cycle must be in [0, 1]");
    return duty * supply_voltage * armature_current;
}

PvOperatingPoint pv_current(double voltage, const PvCellParams &cell) {
    if (voltage < 0.0) throw DomainError("PV terminal voltage must be non-negative");
    cell.validate();

    const double thermal_slope =
        kElectronCharge / (cell.ideality * kBoltzmann * cell.junction_temperature);
    const auto residual = [&](double i) {
        const double v_internal = voltage + i * cell.series_resistance;
        const double diode = cell.dark_saturation_current * std::expm1(thermal_slope * v_internal);
        const double shunt = v_internal / cell.shunt_resistance;
        return cell.short_circuit_current - diode - shunt - i;
    };

    double lo = 0.0;
    double hi = cell.short_circuit_current * 1.001;
    if (residual(lo) <= 0.0) return {0.0, true}; // at or beyond open circuit

    // The residual is strictly decreasing in i, so the bracket [lo, hi]
    // always contains exactly one root.
    constexpr double kTolAmps = 1e-9;
    constexpr int kMaxIterations = 200;
    for (int it = 0; it < kMaxIterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < kTolAmps) return {mid, false};
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    throw NumericError("pv_current bisection failed to converge", residual(0.5 * (lo + hi)));
}

std::vector<PvCurvePoint> pv_iv_curve(const PvCellParams &cell, double v_max, int samples) {
    if (samples < 2) throw ConfigError("pv_iv_curve needs at least 2 samples");
    if (!(v_max > 0.0)) throw ConfigError("pv_iv_curve needs positive v_max");
    std::vector<PvCurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double v = v_max * static_cast<double>(k) / (samples - 1);
        const double i = pv_current(v, cell).current_a;
        curve.push_back({v, i, v * i});
    }
    return curve;
}

PvCurvePoint pv_max_power_point(const PvCellParams &cell, double v_max, int samples) {
    const auto curve = pv_iv_curve(cell, v_max, samples);
    return *std::max_element(curve.begin(), curve.end(),
                             [](const auto &a, const auto &b) { return a.power_w < b.power_w; });
}

double generated_power(const PvArrayConfig &array) {
    array.validate();
    return array.irradiance_w_per_m2 * array.overall_efficiency * array.total_area_m2;
}

double nondimensional_power(double consumed_w, double generated_w) {
    if (!(generated_w > 0.0))
        throw DomainError("nondimensional power undefined without solar input (P_g <= 0)");
    return consumed_w / generated_w;
}

PowerSample make_power_sample(double consumed_w, double generated_w) {
    return {consumed_w, generated_w, nondimensional_power(consumed_w, generated_w)};
}

} // namespace suav::powertrain
