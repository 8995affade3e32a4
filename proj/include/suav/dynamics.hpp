#pragma once

#include "suav/frames.hpp"
#include "suav/math.hpp"

#include <vector>

namespace suav::dynamics {

// Full pose/twist of the rigid body. The inertial frame has z pointing
// down (gravity is +z), matching the sign pattern of the vertical-plane
// equations this model reduces to.
struct VehicleState {
    Vec3 r_inertial;            // position, m
    frames::EulerAngles angles; // yaw/pitch/roll, rad
    Vec3 v_body;                // translational velocity (u, v, w), m/s
    frames::BodyRates omega;    // angular velocity (p, q, r), rad/s
};

struct VehicleStateDerivative {
    Vec3 r_dot;
    frames::EulerRates angle_rates;
    Vec3 v_dot;
    frames::BodyRates omega_dot;
};

struct VehicleParams {
    double mass_kg = 11.3; // total mass including added mass
    Mat3 inertia = Mat3::diagonal(2.76, 2.76, 2.76);
    double buoyancy_n = 11.3 * 9.81;
    double gravity = 9.81;
    Vec3 drag_coeff{1.0, 1.0, 1.0};    // per body axis, dimensionless
    Vec3 frontal_area{1.0, 1.0, 1.0};  // per body axis, m^2
    double air_density = 1.2;          // kg/m^3
    Vec3 rot_damping{0.0, 0.0, 0.0};   // linear rotational damping, N*m*s/rad
    double velocity_cap = 100.0;       // divergence guard on |v| components, m/s

    // Throws ConfigError on non-physical values.
    void validate() const;

    [[nodiscard]] bool neutrally_buoyant() const;
};

// One propeller of a multirotor: thrust f = k * w^2 directed along the
// alpha direction-angle triple, mounted at arm length l along the beta
// direction-angle triple. The cosines of each triple must form a unit
// vector.
struct PropellerConfig {
    double lift_constant = 1.0;       // N*s^2/rad^2
    double arm_length = 0.0;          // m
    Vec3 arm_direction_angles;        // beta, rad
    Vec3 tilt_angles;                 // alpha, rad
    double torque_coefficient = 0.0;  // N*m*s^2/rad^2
    double spin_sign = 1.0;           // +1 or -1

    void validate() const;
};

struct Wrench {
    Vec3 force_body;  // N
    Vec3 moment_body; // N*m

    Wrench operator+(const Wrench &o) const {
        return {force_body + o.force_body, moment_body + o.moment_body};
    }
};

// Vertical-plane (x-z) reduction of the rigid body.
struct LongitudinalState {
    double x = 0.0;     // inertial x, m
    double z = 0.0;     // inertial z, m
    double theta = 0.0; // pitch, rad
    double u = 0.0;     // body x velocity, m/s
    double w = 0.0;     // body z velocity, m/s
    double q = 0.0;     // pitch rate, rad/s
};

struct PlanarForce {
    double fx = 0.0; // body x, N
    double fz = 0.0; // body z, N
};

// Net thrust force and moment in the body frame from per-propeller speeds
// (rad/s, non-negative). Throws ConfigError on mismatched list lengths.
Wrench thrust_wrench(const std::vector<PropellerConfig> &propellers,
                     const std::vector<double> &speeds);

// Quadratic per-axis drag opposing the body velocity, plus the optional
// linear rotational damping. No other aerodynamic moments are modelled.
Wrench aero_wrench(const VehicleState &state, const VehicleParams &params);

// Rigid-body equations of motion. The wrench excludes gravity and
// buoyancy, which are applied internally along inertial z.
VehicleStateDerivative state_derivative(const VehicleState &state, const Wrench &wrench,
                                        const VehicleParams &params);

// Vertical-plane equations of motion. force/moment are applied inputs in
// the body frame; per-axis drag and rotational damping are added
// internally from params.
LongitudinalState longitudinal_derivative(const LongitudinalState &state, const PlanarForce &force,
                                          double moment, const VehicleParams &params);

// Instantaneous mechanical power F.v + M.w, all in the inertial frame.
// May be negative (regeneration opportunity).
double mechanical_power(const Vec3 &force_inertial, const Vec3 &velocity_inertial,
                        const Vec3 &moment_inertial, const Vec3 &omega_inertial);

// --- fixed-step RK4 -------------------------------------------------------

// Vector-space operations the integrator needs, defined for both state
// representations.
inline LongitudinalState axpy(const LongitudinalState &s, double a, const LongitudinalState &d) {
    return {s.x + a * d.x, s.z + a * d.z, s.theta + a * d.theta,
            s.u + a * d.u, s.w + a * d.w, s.q + a * d.q};
}

inline VehicleState axpy(const VehicleState &s, double a, const VehicleStateDerivative &d) {
    VehicleState r = s;
    r.r_inertial += a * d.r_dot;
    r.angles.psi += a * d.angle_rates.psi_dot;
    r.angles.theta += a * d.angle_rates.theta_dot;
    r.angles.phi += a * d.angle_rates.phi_dot;
    r.v_body += a * d.v_dot;
    r.omega.p += a * d.omega_dot.p;
    r.omega.q += a * d.omega_dot.q;
    r.omega.r += a * d.omega_dot.r;
    return r;
}

void check_divergence(const LongitudinalState &s, const VehicleParams &params, long step_index);
void check_divergence(const VehicleState &s, const VehicleParams &params, long step_index);

// Classical 4th-order Runge-Kutta step. `rhs(t, state)` returns the state
// derivative; it is evaluated at the intermediate stage times. Throws
// DivergenceError (carrying step_index) if the result leaves the
// configured envelope.
template <typename State, typename Rhs>
State rk4_step(const State &state, double t, double dt, const VehicleParams &params, Rhs &&rhs,
               long step_index = 0) {
    const auto k1 = rhs(t, state);
    const auto k2 = rhs(t + dt / 2, axpy(state, dt / 2, k1));
    const auto k3 = rhs(t + dt / 2, axpy(state, dt / 2, k2));
    const auto k4 = rhs(t + dt, axpy(state, dt, k3));

    State next = axpy(state, dt / 6, k1);
    next = axpy(next, dt / 3, k2);
    next = axpy(next, dt / 3, k3);
    next = axpy(next, dt / 6, k4);
    check_divergence(next, params, step_index);
    return next;
}

} // namespace suav::dynamics
