#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "suav/dynamics.hpp"
#include "suav/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace suav;
using namespace suav::dynamics;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

VehicleParams reference_vehicle() {
    VehicleParams p;
    p.mass_kg = 11.3;
    p.inertia = Mat3::diagonal(2.76, 2.76, 2.76);
    p.buoyancy_n = 11.3 * 9.81;
    const double area = std::numbers::pi * 1.25 * 1.25;
    p.frontal_area = {area, area, area};
    p.drag_coeff = {1.0, 1.0, 1.0};
    return p;
}

PropellerConfig vertical_prop(double arm_sign) {
    PropellerConfig prop;
    prop.lift_constant = 0.5;
    prop.arm_length = 1.65;
    // Arm along +-x, thrust along -z.
    prop.arm_direction_angles = {arm_sign > 0 ? 0.0 : std::numbers::pi, kHalfPi, kHalfPi};
    prop.tilt_angles = {kHalfPi, kHalfPi, std::numbers::pi};
    prop.torque_coefficient = 0.0;
    return prop;
}

} // namespace

TEST_CASE("zero propeller speeds give a zero wrench") {
    const Wrench w = thrust_wrench({vertical_prop(1.0), vertical_prop(-1.0)}, {0.0, 0.0});
    CHECK(w.force_body.norm() == 0.0);
    CHECK(w.moment_body.norm() == 0.0);
}

TEST_CASE("single axial propeller produces pure force plus reaction torque") {
    PropellerConfig prop;
    prop.lift_constant = 0.5;
    prop.arm_length = 0.0;
    prop.arm_direction_angles = {0.0, kHalfPi, kHalfPi};
    prop.tilt_angles = {kHalfPi, kHalfPi, 0.0}; // thrust along +z
    prop.torque_coefficient = 0.02;
    prop.spin_sign = 1.0;

    const Wrench w = thrust_wrench({prop}, {10.0});
    CHECK(w.force_body.x == doctest::Approx(0.0));
    CHECK(w.force_body.y == doctest::Approx(0.0));
    CHECK(w.force_body.z == doctest::Approx(50.0));
    CHECK(w.moment_body.x == doctest::Approx(0.0));
    CHECK(w.moment_body.y == doctest::Approx(0.0));
    CHECK(w.moment_body.z == doctest::Approx(0.02 * 100.0));
}

TEST_CASE("opposed propellers on the longitudinal arm") {
    const std::vector<PropellerConfig> props{vertical_prop(1.0), vertical_prop(-1.0)};

    SUBCASE("equal speeds: arms cancel, force sums") {
        const Wrench w = thrust_wrench(props, {10.0, 10.0});
        // Hand-summed: f = 0.5 * 100 each, both along -z.
        CHECK(w.force_body.z == doctest::Approx(-100.0));
        CHECK(w.moment_body.norm() == doctest::Approx(0.0));
    }
    SUBCASE("unequal speeds: pitch moment k l (w2^2 - w1^2)") {
        const Wrench w = thrust_wrench(props, {12.0, 10.0});
        CHECK(w.force_body.z == doctest::Approx(-(0.5 * 144 + 0.5 * 100)));
        CHECK(w.moment_body.y == doctest::Approx(0.5 * 1.65 * (100.0 - 144.0)));
        CHECK(w.moment_body.x == doctest::Approx(0.0));
        CHECK(w.moment_body.z == doctest::Approx(0.0));
    }
}

TEST_CASE("mismatched propeller/speed lists are rejected") {
    CHECK_THROWS_AS(thrust_wrench({vertical_prop(1.0)}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("propeller direction cosines must be unit") {
    PropellerConfig bad = vertical_prop(1.0);
    bad.tilt_angles = {0.0, 0.0, 0.0}; // cosines (1,1,1)
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("aero wrench vanishes at rest") {
    VehicleState state;
    const Wrench w = aero_wrench(state, reference_vehicle());
    CHECK(w.force_body.norm() == 0.0);
    CHECK(w.moment_body.norm() == 0.0);
}

TEST_CASE("aero drag matches the quadratic formula") {
    VehicleParams p = reference_vehicle();
    p.drag_coeff = {2.0, 2.0, 2.0};
    p.frontal_area = {2.0, 2.0, 2.0};
    VehicleState state;
    state.v_body = {2.0, 0.0, 0.0};
    const Wrench w = aero_wrench(state, p);
    CHECK(w.force_body.x == doctest::Approx(-9.6));
    CHECK(w.force_body.y == 0.0);
    CHECK(w.force_body.z == 0.0);
}

TEST_CASE("drag is odd in the velocity and opposes it per axis") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> vel(-20.0, 20.0);
    const VehicleParams p = reference_vehicle();
    for (int trial = 0; trial < 200; ++trial) {
        VehicleState state;
        state.v_body = {vel(rng), vel(rng), vel(rng)};
        VehicleState mirrored;
        mirrored.v_body = -1.0 * state.v_body;
        const Wrench w = aero_wrench(state, p);
        const Wrench m = aero_wrench(mirrored, p);
        CHECK((w.force_body + m.force_body).norm() < 1e-12);
        CHECK(w.force_body.x * state.v_body.x <= 0.0);
        CHECK(w.force_body.y * state.v_body.y <= 0.0);
        CHECK(w.force_body.z * state.v_body.z <= 0.0);
    }
}

TEST_CASE("neutral hover is a fixed point of the 3D dynamics") {
    const VehicleParams p = reference_vehicle();
    REQUIRE(p.neutrally_buoyant());
    const VehicleState state;
    const VehicleStateDerivative d = state_derivative(state, {}, p);
    CHECK(d.v_dot.norm() < 1e-14);
    CHECK(d.r_dot.norm() < 1e-14);
    CHECK(std::abs(d.omega_dot.p) < 1e-14);
    CHECK(std::abs(d.omega_dot.q) < 1e-14);
    CHECK(std::abs(d.omega_dot.r) < 1e-14);
    CHECK(std::abs(d.angle_rates.phi_dot) < 1e-14);
}

TEST_CASE("pure moment about a principal axis from rest") {
    VehicleParams p = reference_vehicle();
    p.inertia = Mat3::diagonal(1.5, 2.5, 3.5);
    Wrench w;
    w.moment_body = {0.0, 5.0, 0.0};
    const VehicleStateDerivative d = state_derivative({}, w, p);
    CHECK(d.omega_dot.p == doctest::Approx(0.0));
    CHECK(d.omega_dot.q == doctest::Approx(5.0 / 2.5));
    CHECK(d.omega_dot.r == doctest::Approx(0.0));
}

TEST_CASE("gyroscopic acceleration matches the cross-product oracle") {
    VehicleParams p = reference_vehicle();
    p.inertia = Mat3::diagonal(1.0, 2.0, 3.0);
    VehicleState state;
    state.omega = {1.0, 2.0, 3.0};
    const VehicleStateDerivative d = state_derivative(state, {}, p);
    // -I^{-1} (w x I w), componentwise.
    const Vec3 w{1.0, 2.0, 3.0};
    const Vec3 iw{1.0 * 1.0, 2.0 * 2.0, 3.0 * 3.0};
    const Vec3 oracle = Vec3{-(w.y * iw.z - w.z * iw.y) / 1.0, -(w.z * iw.x - w.x * iw.z) / 2.0,
                             -(w.x * iw.y - w.y * iw.x) / 3.0};
    CHECK(d.omega_dot.p == doctest::Approx(oracle.x).epsilon(1e-12));
    CHECK(d.omega_dot.q == doctest::Approx(oracle.y).epsilon(1e-12));
    CHECK(d.omega_dot.r == doctest::Approx(oracle.z).epsilon(1e-12));
}

TEST_CASE("longitudinal equilibrium under neutral buoyancy") {
    const VehicleParams p = reference_vehicle();
    const LongitudinalState d = longitudinal_derivative({}, {}, 0.0, p);
    CHECK(d.x == 0.0);
    CHECK(d.z == 0.0);
    CHECK(d.theta == 0.0);
    CHECK(std::abs(d.u) < 1e-14);
    CHECK(std::abs(d.w) < 1e-14);
    CHECK(d.q == 0.0);
}

TEST_CASE("vertical force from rest accelerates at F/m") {
    const VehicleParams p = reference_vehicle();
    const LongitudinalState d = longitudinal_derivative({}, {0.0, 10.0}, 0.0, p);
    CHECK(d.w == doctest::Approx(10.0 / 11.3).epsilon(1e-12));
    CHECK(std::abs(d.u) < 1e-14);
}

TEST_CASE("kinematic projection at pitch 0.1") {
    const VehicleParams p = reference_vehicle();
    LongitudinalState s;
    s.theta = 0.1;
    s.u = 1.0;
    const LongitudinalState d = longitudinal_derivative(s, {}, 0.0, p);
    CHECK(d.x == doctest::Approx(std::cos(0.1)).epsilon(1e-14));
    CHECK(d.z == doctest::Approx(-std::sin(0.1)).epsilon(1e-14));
}

TEST_CASE("mechanical power dot products") {
    CHECK(mechanical_power({}, {}, {}, {}) == 0.0);
    CHECK(mechanical_power({10, 0, 0}, {2, 0, 0}, {}, {}) == doctest::Approx(20.0));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 f{val(rng), val(rng), val(rng)};
        const Vec3 v{val(rng), val(rng), val(rng)};
        const Vec3 m{val(rng), val(rng), val(rng)};
        const Vec3 w{val(rng), val(rng), val(rng)};
        const double oracle =
            f.x * v.x + f.y * v.y + f.z * v.z + m.x * w.x + m.y * w.y + m.z * w.z;
        CHECK(mechanical_power(f, v, m, w) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("equilibrium state is unchanged by an RK4 step") {
    const VehicleParams p = reference_vehicle();
    const LongitudinalState s;
    const auto rhs = [&](double, const LongitudinalState &state) {
        return longitudinal_derivative(state, {}, 0.0, p);
    };
    const LongitudinalState next = rk4_step(s, 0.0, 1e-2, p, rhs);
    CHECK(next.x == 0.0);
    CHECK(next.u == 0.0);
    CHECK(next.w == 0.0);
}

TEST_CASE("constant force F = m integrates to exactly v = 1 after 1 s") {
    VehicleParams p = reference_vehicle();
    p.drag_coeff = {0.0, 0.0, 0.0};
    LongitudinalState s;
    const auto rhs = [&](double, const LongitudinalState &state) {
        return longitudinal_derivative(state, {p.mass_kg, 0.0}, 0.0, p);
    };
    double t = 0.0;
    const double dt = 1e-2;
    for (long k = 0; k < 100; ++k, t += dt) s = rk4_step(s, t, dt, p, rhs, k);
    CHECK(s.u == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.x == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("RK4 shows fourth-order convergence on the drag decay problem") {
    const VehicleParams p = reference_vehicle();
    const auto rhs = [&](double, const LongitudinalState &state) {
        return longitudinal_derivative(state, {}, 0.0, p);
    };
    const auto run = [&](double dt) {
        LongitudinalState s;
        s.u = 5.0;
        double t = 0.0;
        const long steps = std::lround(1.0 / dt);
        for (long k = 0; k < steps; ++k, t += dt) s = rk4_step(s, t, dt, p, rhs, k);
        return s.u;
    };
    const double reference = run(1e-5);
    const double err_coarse = std::abs(run(1e-2) - reference);
    const double err_fine = std::abs(run(5e-3) - reference);
    const double ratio = err_coarse / err_fine;
    CHECK(ratio >= 15.0);
    const double order = std::log2(ratio);
    CHECK(order >= 3.7);
    CHECK(order <= 4.3);
}

TEST_CASE("divergence guard reports the step index") {
    VehicleParams p = reference_vehicle();
    p.velocity_cap = 50.0;
    const auto rhs = [&](double, const LongitudinalState &state) {
        return longitudinal_derivative(state, {1e6, 0.0}, 0.0, p);
    };
    try {
        (void)rk4_step(LongitudinalState{}, 0.0, 1.0, p, rhs, 17);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError &e) {
        CHECK(e.step_index == 17);
    }
}

TEST_CASE("free rotation conserves rotational kinetic energy over a step") {
    VehicleParams p = reference_vehicle();
    p.inertia = Mat3::diagonal(1.0, 2.0, 3.0);
    VehicleState s;
    s.omega = {1.0, 2.0, 3.0};
    const auto energy = [&](const VehicleState &state) {
        const Vec3 w{state.omega.p, state.omega.q, state.omega.r};
        return 0.5 * w.dot(p.inertia * w);
    };
    const auto rhs = [&](double, const VehicleState &state) {
        return state_derivative(state, {}, p);
    };
    const double before = energy(s);
    const VehicleState next = rk4_step(s, 0.0, 1e-3, p, rhs);
    CHECK(std::abs(energy(next) - before) / before < 1e-9);
}

TEST_CASE("planar 3D states reproduce the longitudinal derivatives") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> small(-2.0, 2.0);
    const VehicleParams p = reference_vehicle();
    for (int trial = 0; trial < 100; ++trial) {
        LongitudinalState s2;
        s2.x = small(rng);
        s2.z = small(rng);
        s2.theta = 0.4 * small(rng);
        s2.u = small(rng);
        s2.w = small(rng);
        s2.q = small(rng);
        const PlanarForce force{5.0 * small(rng), 5.0 * small(rng)};
        const double moment = 2.0 * small(rng);

        VehicleState s3;
        s3.r_inertial = {s2.x, 0.0, s2.z};
        s3.angles = {0.0, s2.theta, 0.0};
        s3.v_body = {s2.u, 0.0, s2.w};
        s3.omega = {0.0, s2.q, 0.0};

        Wrench w;
        w.force_body = {force.fx, 0.0, force.fz};
        w.moment_body = {0.0, moment, 0.0};
        const Wrench total = w + aero_wrench(s3, p);

        const LongitudinalState d2 = longitudinal_derivative(s2, force, moment, p);
        const VehicleStateDerivative d3 = state_derivative(s3, total, p);

        CHECK(d3.r_dot.x == doctest::Approx(d2.x).epsilon(1e-10));
        CHECK(d3.r_dot.z == doctest::Approx(d2.z).epsilon(1e-10));
        CHECK(std::abs(d3.r_dot.y) < 1e-10);
        CHECK(d3.v_dot.x == doctest::Approx(d2.u).epsilon(1e-10));
        CHECK(d3.v_dot.z == doctest::Approx(d2.w).epsilon(1e-10));
        CHECK(d3.omega_dot.q == doctest::Approx(d2.q).epsilon(1e-10));
        CHECK(d3.angle_rates.theta_dot == doctest::Approx(d2.theta).epsilon(1e-10));
    }
}

TEST_CASE("vehicle parameter validation") {
    VehicleParams p = reference_vehicle();
    p.mass_kg = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = reference_vehicle();
    p.inertia = Mat3::diagonal(-1.0, 1.0, 1.0);
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = reference_vehicle();
    CHECK_NOTHROW(p.validate());
    CHECK(p.neutrally_buoyant());
    p.buoyancy_n = 100.0;
    CHECK_FALSE(p.neutrally_buoyant());
}
