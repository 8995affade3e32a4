#pragma once

#include <vector>

namespace suav::powertrain {

struct MotorParams {
    double torque_constant = 0.05;  // K_t, N*m/A
    double voltage_constant = 0.05; // K_e, V*s/rad
    double resistance = 0.5;        // R_a, ohm
    double inductance = 0.0;        // L_a, H; documented but neglected in power terms
    double rotor_inertia = 1e-4;    // J_m, kg*m^2
    double prop_damping = 1e-4;     // b_p, N*m*s/rad
    double supply_voltage = 12.0;   // v_a, V

    void validate() const;

    // A DC motor has K_t == K_e in consistent SI units; a mismatch is
    // legal configuration but worth surfacing.
    [[nodiscard]] bool constants_consistent(double rel_tol = 1e-6) const;
};

struct PvCellParams {
    double short_circuit_current = 5.95; // I_SC, A
    double dark_saturation_current = 1.13e-9; // I_0, A
    double series_resistance = 0.002;    // R_s, ohm
    double shunt_resistance = 10.0;      // R_SH, ohm
    double ideality = 1.3;               // n_i, in [1, 2]
    double junction_temperature = 298.15; // T_c, K

    void validate() const;
};

// The default-constructed PvCellParams above reproduce the reference
// cell: short-circuit current and ideality taken from its data sheet
// values, dark current and series resistance fitted by
// tools/fit_pv_cell.py so the curve passes the 0.58 V / 5.93 A operating
// point (within 2%) with a maximum power near 3.42 W (within 5%).

struct PvArrayConfig {
    PvCellParams cell;
    int series_count = 1;
    int parallel_count = 1;
    double total_area_m2 = 1.0;    // A_PV, >= 0 (zero means no panels)
    double overall_efficiency = 0.1; // eta, in (0, 1)
    double irradiance_w_per_m2 = 1000.0;

    void validate() const;
};

struct PowerSample {
    double consumed_w = 0.0;      // P_c
    double generated_w = 0.0;     // P_g
    double nondimensional = 0.0;  // P_non = P_c / P_g
};

// Bundle one power bookkeeping step; throws DomainError when P_g <= 0.
PowerSample make_power_sample(double consumed_w, double generated_w);

// Motor shaft acceleration: (K_t I_a - b_p w) / J_m.
double motor_speed_derivative(double omega, double armature_current, const MotorParams &params);

// Torque available at supply voltage v against back-EMF:
// K_t (v_a - K_e w) / R_a. Negative when back-EMF exceeds supply.
double torque_from_voltage(double supply_voltage, double omega, const MotorParams &params);

// Electrical power drawn from the source to produce torque T at speed w
// (copper loss plus back-EMF work).
double motor_power(double torque, double omega, const MotorParams &params);

// Battery-side power with a PV contribution: mode +1 drives, -1
// regenerates; negative results indicate generation. Throws DomainError
// for modes outside {-1, +1} or negative pv_current.
double motor_power_with_pv(double torque, double omega, double mode, double pv_current,
                           const MotorParams &params);

// PWM power: duty * v_a * I_a, duty in [0, 1].
double duty_cycle_power(double duty, double supply_voltage, double armature_current);

struct PvOperatingPoint {
    double current_a = 0.0;
    bool open_circuit = false;
};

// Load current of the single-diode cell at terminal voltage v, from the
// implicit relation I = I_SC - I_d(I) - I_SH(I), solved by bracketed
// bisection on [0, 1.001 * I_SC] to 1e-9 A. Voltages at or beyond open
// circuit return zero with the open_circuit flag set.
PvOperatingPoint pv_current(double voltage, const PvCellParams &cell);

struct PvCurvePoint {
    double voltage_v;
    double current_a;
    double power_w;
};

// Sampled I-V and P-V curve on [0, v_max] with `samples` points.
std::vector<PvCurvePoint> pv_iv_curve(const PvCellParams &cell, double v_max, int samples);

// Voltage and power at the sampled maximum power point of the curve.
PvCurvePoint pv_max_power_point(const PvCellParams &cell, double v_max, int samples);

// Bulk PV supply model: irradiance * eta * A_PV. All self-powered
// analyses use this; the diode model is the detailed alternative.
double generated_power(const PvArrayConfig &array);

// P_non = P_c / P_g; the self-powered predicate is P_non <= 1. Throws
// DomainError when P_g <= 0.
double nondimensional_power(double consumed_w, double generated_w);

} // namespace suav::powertrain
