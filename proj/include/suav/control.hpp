#pragma once

#include "suav/dynamics.hpp"
#include "suav/powertrain.hpp"

#include <optional>
#include <string>
#include <vector>

namespace suav::control {

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;

    void validate() const;
};

// One PID channel. Integral accumulates trapezoidally; the derivative is
// a backward difference on the error; the integral is frozen while the
// output is saturated.
class Pid {
  public:
    Pid() = default;
    Pid(PidGains gains, double output_limit) : gains_(gains), limit_(output_limit) {}

    double step(double error, double dt);
    void reset();

    [[nodiscard]] double integral() const { return integral_; }

  private:
    PidGains gains_;
    double limit_ = 0.0; // symmetric clamp, <= 0 disables
    double integral_ = 0.0;
    double prev_error_ = 0.0;
    bool has_prev_ = false;
};

enum class ReferenceKind { Step, Ramp, PiecewiseLinear };

struct ReferenceSignal {
    ReferenceKind kind = ReferenceKind::Step;
    double amplitude = 0.0; // step height or ramp slope
    std::vector<std::pair<double, double>> breakpoints; // (t, value), strictly increasing t

    void validate() const;

    static ReferenceSignal step(double amplitude);
    static ReferenceSignal ramp(double slope);
    static ReferenceSignal piecewise(std::vector<std::pair<double, double>> breakpoints);
};

// Reference value at time t >= 0. Steps switch on for t > 0; piecewise
// profiles hold their first value before the first breakpoint and the
// last value after the final one.
double reference_value(const ReferenceSignal &signal, double t);

struct ControlScenario {
    dynamics::VehicleParams vehicle;
    powertrain::PvArrayConfig array;
    PidGains gains_force;
    PidGains gains_pitch;
    ReferenceSignal x_reference;
    ReferenceSignal z_reference;
    ReferenceSignal theta_reference;
    double horizon_s = 10.0;
    double dt_s = 1e-3;
    double force_limit_n = 100.0;
    double moment_limit_nm = 50.0;
    // When false (default), P_c is the positive part of the mechanical
    // power: regeneration is not credited back. When true the signed
    // value is kept for energy-recovery studies.
    bool signed_power = false;
    // First-order lag between the commanded and applied wrench (motor
    // spin-up). Zero applies commands instantaneously.
    double actuator_lag_s = 0.0;
    dynamics::LongitudinalState initial_state;

    void validate() const;
};

struct PerformanceMetrics {
    std::optional<double> rise_time_s;     // first 10% -> 90% crossing interval
    std::optional<double> settling_time_s; // last entry into the +-2% band
    std::optional<double> overshoot;       // (peak - final) / final, fraction
    std::optional<double> peak_time_s;     // time of first peak above final
    std::optional<double> steady_state_error;
};

struct SimResult {
    std::vector<double> t, x, z, theta, u, w, q;
    std::vector<double> fx, fz, moment; // commanded wrench, inertial plane
    std::vector<double> pc, pg, pnon;
    std::optional<PerformanceMetrics> metrics_x, metrics_z, metrics_theta;

    [[nodiscard]] std::size_t size() const { return t.size(); }
};

// Closed-loop simulation of the vertical-plane model with the
// two-channel feedback structure: the position errors drive a PID pair
// that commands a planar thrust vector held fixed in the inertial frame
// over each sample (thrust vectoring), and the pitch error drives a
// pure moment. The wrench is clamped per channel before it is applied.
SimResult simulate_closed_loop(const ControlScenario &scenario);

// Step-response metrics for one recorded channel against its reference.
// Step-type metrics are only populated for step references.
PerformanceMetrics performance_metrics(const std::vector<double> &t,
                                       const std::vector<double> &series,
                                       const ReferenceSignal &reference);

struct DutyCycleSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double max_pnon = 0.0;
    double mean_pnon = 0.0;
    bool self_powered = false;
};

struct DutyCycleReport {
    std::vector<DutyCycleSegment> segments;
    [[nodiscard]] bool all_self_powered() const;
};

// Per-segment P_non statistics and the self-powered verdict (max <= 1).
// Throws ConfigError for empty or out-of-horizon segments.
DutyCycleReport duty_cycle_report(const SimResult &result,
                                  const std::vector<std::pair<double, double>> &segments);

struct MotorAllocation {
    double omega_1 = 0.0;
    double omega_2 = 0.0;
    bool feasible = false;
};

// Diagnostic two-motor longitudinal allocation: recover the propeller
// speeds realizing force F = k w1^2 + k w2^2 and moment M = k l (w1^2 -
// w2^2). Infeasible when either squared speed would be negative.
MotorAllocation allocate_two_motor(double force, double moment, double lift_constant,
                                   double arm_length);

// Human-readable metrics block used by the CLI summary output.
std::string format_metrics(const std::string &channel, const PerformanceMetrics &m);

} // namespace suav::control
