#include "suav/control.hpp"

#include "suav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace suav::control {

namespace {

double clamp_sym(double v, double limit) {
    if (limit <= 0.0) return v;
    return std::clamp(v, -limit, limit);
}

} // namespace

void PidGains::validate() const {
    if (!(kp >= 0.0 && ki >= 0.0 && kd >= 0.0) || !std::isfinite(kp) || !std::isfinite(ki) ||
        !std::isfinite(kd))
        throw ConfigError("PID gains must be finite and non-negative");
}

double Pid::step(double error, double dt) {
    if (!(dt > 0.0)) throw DomainError("PID step needs dt > 0");
    const double derivative = has_prev_ ? (error - prev_error_) / dt : 0.0;
    const double integral_candidate = integral_ + 0.5 * (error + prev_error_) * dt;

    double output = gains_.kp * error + gains_.ki * integral_candidate + gains_.kd * derivative;
    if (limit_ > 0.0 && std::abs(output) > limit_) {
        // Anti-windup: keep the previous integral while saturated.
        output = clamp_sym(gains_.kp * error + gains_.ki * integral_ + gains_.kd * derivative,
                           limit_);
    } else {
        integral_ = integral_candidate;
    }
    prev_error_ = error;
    has_prev_ = true;
    return output;
}

void Pid::reset() {
    integral_ = 0.0;
    prev_error_ = 0.0;
    has_prev_ = false;
}

void ReferenceSignal::validate() const {
    if (kind == ReferenceKind::PiecewiseLinear) {
        if (breakpoints.empty()) throw ConfigError("piecewise reference needs breakpoints");
        for (std::size_t i = 1; i < breakpoints.size(); ++i)
            if (!(breakpoints[i].first > breakpoints[i - 1].first))
                throw ConfigError("piecewise breakpoints must be strictly increasing in t");
    }
    if (!std::isfinite(amplitude)) throw ConfigError("reference amplitude must be finite");
}

ReferenceSignal ReferenceSignal::step(double amplitude) {
    ReferenceSignal s;
    s.kind = ReferenceKind::Step;
    s.amplitude = amplitude;
    return s;
}

ReferenceSignal ReferenceSignal::ramp(double slope) {
    ReferenceSignal s;
    s.kind = ReferenceKind::Ramp;
    s.amplitude = slope;
    return s;
}

ReferenceSignal ReferenceSignal::piecewise(std::vector<std::pair<double, double>> breakpoints) {
    ReferenceSignal s;
    s.kind = ReferenceKind::PiecewiseLinear;
    s.breakpoints = std::move(breakpoints);
    s.validate();
    return s;
}

double reference_value(const ReferenceSignal &signal, double t) {
    switch (signal.kind) {
    case ReferenceKind::Step:
        return t > 0.0 ? signal.amplitude : 0.0;
    case ReferenceKind::Ramp:
        return signal.amplitude * t;
    case ReferenceKind::PiecewiseLinear: {
        const auto &bp = signal.breakpoints;
        if (t <= bp.front().first) return bp.front().second;
        if (t >= bp.back().first) return bp.back().second;
        for (std::size_t i = 1; i < bp.size(); ++i) {
            if (t <= bp[i].first) {
                const double span = bp[i].first - bp[i - 1].first;
                const double frac = (t - bp[i - 1].first) / span;
                return bp[i - 1].second + frac * (bp[i].second - bp[i - 1].second);
            }
        }
        return bp.back().second;
    }
    }
    return 0.0;
}

void ControlScenario::validate() const {
    vehicle.validate();
    array.validate();
    gains_force.validate();
    gains_pitch.validate();
    x_reference.validate();
    z_reference.validate();
    theta_reference.validate();
    if (!(horizon_s > 0.0)) throw ConfigError("horizon must be positive");
    if (!(dt_s > 0.0)) throw ConfigError("dt must be positive");
    if (!(force_limit_n > 0.0)) throw ConfigError("force limit must be positive");
    if (!(moment_limit_nm > 0.0)) throw ConfigError("moment limit must be positive");
    if (actuator_lag_s < 0.0) throw ConfigError("actuator lag must be non-negative");
}

SimResult simulate_closed_loop(const ControlScenario &scenario) {
    scenario.validate();
    const double dt = scenario.dt_s;
    const long steps = std::lround(scenario.horizon_s / dt);

    Pid pid_x(scenario.gains_force, scenario.force_limit_n);
    Pid pid_z(scenario.gains_force, scenario.force_limit_n);
    Pid pid_theta(scenario.gains_pitch, scenario.moment_limit_nm);

    const double pg = powertrain::generated_power(scenario.array);

    SimResult res;
    const auto n = static_cast<std::size_t>(steps + 1);
    for (auto *col : {&res.t, &res.x, &res.z, &res.theta, &res.u, &res.w, &res.q, &res.fx, &res.fz,
                      &res.moment, &res.pc, &res.pg, &res.pnon})
        col->reserve(n);

    dynamics::LongitudinalState state = scenario.initial_state;
    // Actuator state for the optional spin-up lag; starts unloaded.
    const double lag_decay =
        scenario.actuator_lag_s > 0.0 ? std::exp(-dt / scenario.actuator_lag_s) : 0.0;
    double fx = 0.0, fz = 0.0, moment = 0.0;
    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;

        const double fx_cmd = pid_x.step(reference_value(scenario.x_reference, t) - state.x, dt);
        const double fz_cmd = pid_z.step(reference_value(scenario.z_reference, t) - state.z, dt);
        const double moment_cmd =
            pid_theta.step(reference_value(scenario.theta_reference, t) - state.theta, dt);
        // The applied wrench relaxes toward the clamped command; with no
        // lag it is the command itself.
        fx = fx_cmd + (fx - fx_cmd) * lag_decay;
        fz = fz_cmd + (fz - fz_cmd) * lag_decay;
        moment = moment_cmd + (moment - moment_cmd) * lag_decay;

        // Instantaneous mechanical power in the inertial frame.
        const double ct = std::cos(state.theta), st = std::sin(state.theta);
        const double x_dot = state.u * ct + state.w * st;
        const double z_dot = -state.u * st + state.w * ct;
        const double mech = fx * x_dot + fz * z_dot + moment * state.q;
        const powertrain::PowerSample power =
            powertrain::make_power_sample(scenario.signed_power ? mech : std::max(0.0, mech), pg);

        res.t.push_back(t);
        res.x.push_back(state.x);
        res.z.push_back(state.z);
        res.theta.push_back(state.theta);
        res.u.push_back(state.u);
        res.w.push_back(state.w);
        res.q.push_back(state.q);
        res.fx.push_back(fx);
        res.fz.push_back(fz);
        res.moment.push_back(moment);
        res.pc.push_back(power.consumed_w);
        res.pg.push_back(power.generated_w);
        res.pnon.push_back(power.nondimensional);

        if (k == steps) break;

        // The commanded thrust vector stays fixed in the inertial frame
        // over the sample; its body components follow the stage pitch.
        const auto rhs = [&](double, const dynamics::LongitudinalState &s) {
            const double c = std::cos(s.theta), sn = std::sin(s.theta);
            const dynamics::PlanarForce body_force{c * fx - sn * fz, sn * fx + c * fz};
            return dynamics::longitudinal_derivative(s, body_force, moment, scenario.vehicle);
        };
        state = dynamics::rk4_step(state, t, dt, scenario.vehicle, rhs, k);
    }

    res.metrics_x = performance_metrics(res.t, res.x, scenario.x_reference);
    res.metrics_z = performance_metrics(res.t, res.z, scenario.z_reference);
    res.metrics_theta = performance_metrics(res.t, res.theta, scenario.theta_reference);
    return res;
}

PerformanceMetrics performance_metrics(const std::vector<double> &t,
                                       const std::vector<double> &series,
                                       const ReferenceSignal &reference) {
    if (t.empty() || t.size() != series.size())
        throw ConfigError("performance_metrics needs matching non-empty series");

    PerformanceMetrics m;
    // Final value: mean of the trailing 5% of samples, robust to ripple.
    const std::size_t tail = std::max<std::size_t>(1, series.size() / 20);
    const double final_value =
        std::accumulate(series.end() - static_cast<long>(tail), series.end(), 0.0) /
        static_cast<double>(tail);

    const double ref_final = reference_value(reference, t.back());
    m.steady_state_error = std::abs(ref_final - final_value);

    // Rise/settling/overshoot/peak are step-response notions.
    if (reference.kind != ReferenceKind::Step || reference.amplitude == 0.0) return m;

    const double scale = std::abs(final_value) > 1e-12 ? std::abs(final_value)
                                                       : std::abs(reference.amplitude);

    std::optional<double> t10, t90;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double frac = series[i] / final_value;
        if (!t10 && std::abs(final_value) > 1e-12 && frac >= 0.1) t10 = t[i];
        if (!t90 && std::abs(final_value) > 1e-12 && frac >= 0.9) t90 = t[i];
        if (t90) break;
    }
    if (t10 && t90) m.rise_time_s = *t90 - *t10;

    // Settling: last excursion outside the +-2% band around the final
    // value. Marked absent when the response is still outside the band
    // near the end of the horizon.
    const double band = 0.02 * scale;
    std::size_t last_outside = 0;
    bool ever_outside = false;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (std::abs(series[i] - final_value) > band) {
            last_outside = i;
            ever_outside = true;
        }
    }
    if (!ever_outside) {
        m.settling_time_s = t.front();
    } else if (last_outside + 1 < series.size() &&
               t[last_outside + 1] < t.back() - 0.02 * (t.back() - t.front())) {
        m.settling_time_s = t[last_outside + 1];
    }

    // Peak/overshoot relative to the final value, in the direction of the
    // step. A maximum inside the tail window used for the final-value
    // estimate means the response is still rising, not overshooting.
    const double dir = final_value >= 0.0 ? 1.0 : -1.0;
    std::size_t peak_index = 0;
    double peak = series[0] * dir;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] * dir > peak) {
            peak = series[i] * dir;
            peak_index = i;
        }
    }
    const double over = (peak - final_value * dir) / scale;
    if (over <= 1e-6 || peak_index + tail >= series.size()) {
        m.overshoot = 0.0;
    } else {
        m.overshoot = over;
        m.peak_time_s = t[peak_index];
    }
    return m;
}

bool DutyCycleReport::all_self_powered() const {
    return std::all_of(segments.begin(), segments.end(),
                       [](const DutyCycleSegment &s) { return s.self_powered; });
}

DutyCycleReport duty_cycle_report(const SimResult &result,
                                  const std::vector<std::pair<double, double>> &segments) {
    if (result.size() == 0) throw ConfigError("duty_cycle_report needs a non-empty result");
    DutyCycleReport report;
    for (const auto &[t0, t1] : segments) {
        if (!(t1 > t0)) throw ConfigError("duty-cycle segment must have t_end > t_start");
        if (t0 < result.t.front() - 1e-12 || t1 > result.t.back() + 1e-12)
            throw ConfigError("duty-cycle segment outside the simulated horizon");

        DutyCycleSegment seg;
        seg.t_start = t0;
        seg.t_end = t1;
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < result.size(); ++i) {
            if (result.t[i] < t0 || result.t[i] > t1) continue;
            seg.max_pnon = std::max(seg.max_pnon, result.pnon[i]);
            sum += result.pnon[i];
            ++count;
        }
        if (count == 0) throw ConfigError("duty-cycle segment contains no samples");
        seg.mean_pnon = sum / static_cast<double>(count);
        seg.self_powered = seg.max_pnon <= 1.0;
        report.segments.push_back(seg);
    }
    return report;
}

MotorAllocation allocate_two_motor(double force, double moment, double lift_constant,
                                   double arm_length) {
    if (!(lift_constant > 0.0) || !(arm_length > 0.0))
        throw ConfigError("allocation needs positive lift constant and arm length");
    const double sq1 = 0.5 * (force / lift_constant + moment / (lift_constant * arm_length));
    const double sq2 = 0.5 * (force / lift_constant - moment / (lift_constant * arm_length));
    MotorAllocation alloc;
    if (sq1 < 0.0 || sq2 < 0.0) return alloc;
    alloc.omega_1 = std::sqrt(sq1);
    alloc.omega_2 = std::sqrt(sq2);
    alloc.feasible = true;
    return alloc;
}

std::string format_metrics(const std::string &channel, const PerformanceMetrics &m) {
    std::ostringstream out;
    const auto line = [&](const char *name, const std::optional<double> &v, const char *unit) {
        out << "  " << name << ": ";
        if (v)
            out << *v << unit;
        else
            out << "n/a";
        out << "\n";
    };
    out << "channel " << channel << ":\n";
    line("rise_time", m.rise_time_s, " s");
    line("settling_time", m.settling_time_s, " s");
    line("overshoot", m.overshoot, "");
    line("peak_time", m.peak_time_s, " s");
    line("steady_state_error", m.steady_state_error, "");
    return out.str();
}

} // namespace suav::control
