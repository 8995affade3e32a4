#include "suav/dynamics.hpp"

#include "suav/errors.hpp"

#include <cmath>
#include <string>

namespace suav::dynamics {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Per-axis quadratic drag opposing the given velocity component.
double axis_drag(double v, double cd, double area, double rho) {
    return -sign(v) * 0.5 * cd * rho * area * v * v;
}

} // namespace

void VehicleParams::validate() const {
    if (!(mass_kg > 0.0)) throw ConfigError("vehicle mass must be positive");
    if (!(air_density > 0.0)) throw ConfigError("air density must be positive");
    if (buoyancy_n < 0.0) throw ConfigError("buoyancy must be non-negative");
    const Mat3 sym_gap = inertia - inertia.transpose();
    for (double v : sym_gap.m)
        if (std::abs(v) > 1e-9) throw ConfigError("inertia matrix must be symmetric");
    // Positive definiteness via leading principal minors.
    const double m1 = inertia(0, 0);
    const double m2 = inertia(0, 0) * inertia(1, 1) - inertia(0, 1) * inertia(1, 0);
    if (!(m1 > 0.0 && m2 > 0.0 && inertia.det() > 0.0))
        throw ConfigError("inertia matrix must be positive definite");
}

bool VehicleParams::neutrally_buoyant() const {
    const double weight = mass_kg * gravity;
    return std::abs(buoyancy_n - weight) < 1e-9 * weight;
}

void PropellerConfig::validate() const {
    if (!(lift_constant > 0.0)) throw ConfigError("propeller lift constant must be positive");
    if (arm_length < 0.0) throw ConfigError("propeller arm length must be non-negative");
    const Vec3 ca{std::cos(tilt_angles.x), std::cos(tilt_angles.y), std::cos(tilt_angles.z)};
    const Vec3 cb{std::cos(arm_direction_angles.x), std::cos(arm_direction_angles.y),
                  std::cos(arm_direction_angles.z)};
    if (std::abs(ca.norm() - 1.0) > 1e-9)
        throw ConfigError("tilt direction cosines must have unit norm");
    if (std::abs(cb.norm() - 1.0) > 1e-9)
        throw ConfigError("arm direction cosines must have unit norm");
}

Wrench thrust_wrench(const std::vector<PropellerConfig> &propellers,
                     const std::vector<double> &speeds) {
    if (propellers.size() != speeds.size())
        throw ConfigError("thrust_wrench: " + std::to_string(propellers.size()) +
                          " propellers but " + std::to_string(speeds.size()) + " speeds");

    Wrench w;
    for (std::size_t i = 0; i < propellers.size(); ++i) {
        const auto &prop = propellers[i];
        const double f = prop.lift_constant * speeds[i] * speeds[i];
        const double torque = prop.torque_coefficient * speeds[i] * speeds[i] * prop.spin_sign;

        const double cax = std::cos(prop.tilt_angles.x);
        const double cay = std::cos(prop.tilt_angles.y);
        const double caz = std::cos(prop.tilt_angles.z);
        const double cbx = std::cos(prop.arm_direction_angles.x);
        const double cby = std::cos(prop.arm_direction_angles.y);
        const double cbz = std::cos(prop.arm_direction_angles.z);
        const double l = prop.arm_length;

        w.force_body += Vec3{f * cax, f * cay, f * caz};
        w.moment_body += Vec3{
            f * cay * l * cbz + f * caz * l * cby + torque * cax,
            f * cax * l * cbz + f * caz * l * cbx + torque * cay,
            f * cax * l * cby + f * cay * l * cbx + torque * caz,
        };
    }
    return w;
}

Wrench aero_wrench(const VehicleState &state, const VehicleParams &params) {
    const Vec3 v = state.v_body;
    Wrench w;
    w.force_body = {
        axis_drag(v.x, params.drag_coeff.x, params.frontal_area.x, params.air_density),
        axis_drag(v.y, params.drag_coeff.y, params.frontal_area.y, params.air_density),
        axis_drag(v.z, params.drag_coeff.z, params.frontal_area.z, params.air_density),
    };
    w.moment_body = {-params.rot_damping.x * state.omega.p,
                     -params.rot_damping.y * state.omega.q,
                     -params.rot_damping.z * state.omega.r};
    return w;
}

VehicleStateDerivative state_derivative(const VehicleState &state, const Wrench &wrench,
                                        const VehicleParams &params) {
    const Mat3 h_ib = frames::rotation_body_from_inertial(state.angles);
    const Mat3 omega_tilde = frames::skew(state.omega);
    const Vec3 omega_v{state.omega.p, state.omega.q, state.omega.r};

    // Gravity minus buoyancy along inertial z (down). Buoyancy acts at the
    // centre of volume, assumed coincident with the CG, so it contributes
    // no moment.
    const Vec3 g_eff{0.0, 0.0, params.gravity - params.buoyancy_n / params.mass_kg};

    VehicleStateDerivative d;
    d.v_dot = wrench.force_body / params.mass_kg + h_ib * g_eff - omega_tilde * state.v_body;

    const Vec3 gyro = omega_v.cross(params.inertia * omega_v);
    const Vec3 omega_dot = params.inertia.inverse() * (wrench.moment_body - gyro);
    d.omega_dot = {omega_dot.x, omega_dot.y, omega_dot.z};

    d.r_dot = h_ib.transpose() * state.v_body;
    d.angle_rates = frames::euler_rates_from_body_rates(state.angles, state.omega);
    return d;
}

LongitudinalState longitudinal_derivative(const LongitudinalState &state, const PlanarForce &force,
                                          double moment, const VehicleParams &params) {
    const double m = params.mass_kg;
    const double g = params.gravity;
    const double b_over_m = params.buoyancy_n / m;
    const double ct = std::cos(state.theta), st = std::sin(state.theta);

    const double fx = force.fx + axis_drag(state.u, params.drag_coeff.x, params.frontal_area.x,
                                           params.air_density);
    const double fz = force.fz + axis_drag(state.w, params.drag_coeff.z, params.frontal_area.z,
                                           params.air_density);
    const double my = moment - params.rot_damping.y * state.q;

    LongitudinalState d;
    d.x = state.u * ct + state.w * st;
    d.z = -state.u * st + state.w * ct;
    d.theta = state.q;
    d.u = fx / m - g * st + b_over_m * st - state.q * state.w;
    d.w = fz / m + g * ct - b_over_m * ct + state.q * state.u;
    d.q = my / params.inertia(1, 1);
    return d;
}

double mechanical_power(const Vec3 &force_inertial, const Vec3 &velocity_inertial,
                        const Vec3 &moment_inertial, const Vec3 &omega_inertial) {
    if (!force_inertial.finite() || !velocity_inertial.finite() || !moment_inertial.finite() ||
        !omega_inertial.finite())
        throw DomainError("mechanical_power: non-finite input");
    return force_inertial.dot(velocity_inertial) + moment_inertial.dot(omega_inertial);
}

void check_divergence(const LongitudinalState &s, const VehicleParams &params, long step_index) {
    const bool finite = std::isfinite(s.x) && std::isfinite(s.z) && std::isfinite(s.theta) &&
                        std::isfinite(s.u) && std::isfinite(s.w) && std::isfinite(s.q);
    if (!finite || std::abs(s.u) > params.velocity_cap || std::abs(s.w) > params.velocity_cap)
        throw DivergenceError("state diverged at step " + std::to_string(step_index), step_index);
}

void check_divergence(const VehicleState &s, const VehicleParams &params, long step_index) {
    const bool finite = s.r_inertial.finite() && s.v_body.finite() &&
                        std::isfinite(s.angles.psi) && std::isfinite(s.angles.theta) &&
                        std::isfinite(s.angles.phi) && std::isfinite(s.omega.p) &&
                        std::isfinite(s.omega.q) && std::isfinite(s.omega.r);
    if (!finite || std::abs(s.v_body.x) > params.velocity_cap ||
        std::abs(s.v_body.y) > params.velocity_cap || std::abs(s.v_body.z) > params.velocity_cap)
        throw DivergenceError("state diverged at step " + std::to_string(step_index), step_index);
}

} // namespace suav::dynamics
