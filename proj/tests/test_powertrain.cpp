#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "suav/errors.hpp"
#include "suav/powertrain.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace suav;
using namespace suav::powertrain;

namespace {

MotorParams bench_motor() {
    MotorParams m;
    m.torque_constant = 0.05;
    m.voltage_constant = 0.05;
    m.resistance = 0.5;
    m.rotor_inertia = 1e-4;
    m.prop_damping = 1e-4;
    return m;
}

} // namespace

TEST_CASE("motor speed derivative") {
    const MotorParams m = bench_motor();
    SUBCASE("steady state current balances the damping") {
        const double omega = 300.0;
        const double current = m.prop_damping * omega / m.torque_constant;
        CHECK(motor_speed_derivative(omega, current, m) == doctest::Approx(0.0));
    }
    SUBCASE("unit current from rest") {
        CHECK(motor_speed_derivative(0.0, 1.0, m) == doctest::Approx(500.0));
    }
    SUBCASE("no damping, no current: coast") {
        MotorParams coast = m;
        coast.prop_damping = 0.0;
        CHECK(motor_speed_derivative(123.0, 0.0, coast) == 0.0);
    }
}

TEST_CASE("torque from voltage") {
    const MotorParams m = bench_motor();
    SUBCASE("back-EMF balance gives zero torque") {
        CHECK(torque_from_voltage(12.0, 12.0 / m.voltage_constant, m) == doctest::Approx(0.0));
    }
    SUBCASE("stall torque") {
        CHECK(torque_from_voltage(12.0, 0.0, m) == doctest::Approx(1.2));
    }
    SUBCASE("linear in supply voltage at stall") {
        CHECK(torque_from_voltage(24.0, 0.0, m) ==
              doctest::Approx(2.0 * torque_from_voltage(12.0, 0.0, m)));
    }
}

TEST_CASE("motor power") {
    const MotorParams m = bench_motor();
    CHECK(motor_power(0.0, 250.0, m) == 0.0);
    CHECK(motor_power(1.0, 100.0, m) == doctest::Approx(300.0));
    SUBCASE("at stall the power is the copper-loss floor") {
        const double torque = 0.7;
        const double current = torque / m.torque_constant;
        CHECK(motor_power(torque, 0.0, m) == doctest::Approx(m.resistance * current * current));
        CHECK(motor_power(torque, 0.0, m) >= 0.0);
    }
}

TEST_CASE("battery-side power with PV contribution") {
    const MotorParams m = bench_motor();
    SUBCASE("no PV current in drive mode reduces to motor_power") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> torque(-2.0, 2.0);
        std::uniform_real_distribution<double> speed(0.0, 500.0);
        for (int trial = 0; trial < 200; ++trial) {
            const double t = torque(rng), w = speed(rng);
            const double a = motor_power_with_pv(t, w, 1.0, 0.0, m);
            const double b = motor_power(t, w, m);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
        }
    }
    SUBCASE("regenerative mode with positive torque and speed generates") {
        CHECK(motor_power_with_pv(1.0, 100.0, -1.0, 0.0, m) == doctest::Approx(-300.0));
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> torque(0.1, 2.0);
        std::uniform_real_distribution<double> speed(1.0, 500.0);
        for (int trial = 0; trial < 100; ++trial)
            CHECK(motor_power_with_pv(torque(rng), speed(rng), -1.0, 0.0, m) < 0.0);
    }
    SUBCASE("PV current covering the armature current zeroes the battery draw") {
        const double torque = 0.8, omega = 120.0;
        const double current = torque / m.torque_constant;
        CHECK(motor_power_with_pv(torque, omega, 1.0, current, m) == doctest::Approx(0.0));
    }
    SUBCASE("modes outside +-1 are rejected") {
        CHECK_THROWS_AS(motor_power_with_pv(1.0, 1.0, 0.5, 0.0, m), DomainError);
        CHECK_THROWS_AS(motor_power_with_pv(1.0, 1.0, -1.0, -0.1, m), DomainError);
    }
}

TEST_CASE("motor constant consistency flag") {
    MotorParams m = bench_motor();
    CHECK(m.constants_consistent());
    m.voltage_constant = 0.06;
    CHECK_FALSE(m.constants_consistent());
}

TEST_CASE("duty cycle power") {
    CHECK(duty_cycle_power(0.0, 12.0, 5.0) == 0.0);
    CHECK(duty_cycle_power(1.0, 12.0, 5.0) == doctest::Approx(60.0));
    CHECK(duty_cycle_power(0.5, 12.0, 5.0) == doctest::Approx(30.0));
    CHECK_THROWS_AS(duty_cycle_power(1.5, 12.0, 5.0), DomainError);
    CHECK_THROWS_AS(duty_cycle_power(-0.1, 12.0, 5.0), DomainError);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> duty(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double p = duty_cycle_power(duty(rng), 12.0, 5.0);
        CHECK(p >= 0.0);
        CHECK(p <= 60.0);
    }
}

TEST_CASE("ideal short circuit recovers I_SC") {
    PvCellParams cell;
    cell.series_resistance = 0.0;
    cell.shunt_resistance = 1e12;
    const PvOperatingPoint op = pv_current(0.0, cell);
    CHECK_FALSE(op.open_circuit);
    CHECK(op.current_a == doctest::Approx(cell.short_circuit_current).epsilon(1e-6));
}

TEST_CASE("voltages beyond open circuit flag and return zero") {
    const PvCellParams cell; // calibrated defaults
    const PvOperatingPoint op = pv_current(5.0, cell);
    CHECK(op.open_circuit);
    CHECK(op.current_a == 0.0);
    CHECK_THROWS_AS(pv_current(-0.1, cell), DomainError);
}

TEST_CASE("calibrated cell reproduces the reference operating point") {
    const PvCellParams cell;
    const double current = pv_current(0.58, cell).current_a;
    CHECK(std::abs(current - 5.93) / 5.93 < 0.02);
}

TEST_CASE("calibrated cell maximum power point is near 3.42 W") {
    const PvCellParams cell;
    const PvCurvePoint mpp = pv_max_power_point(cell, 0.80, 400);
    CHECK(std::abs(mpp.power_w - 3.42) / 3.42 < 0.05);
    CHECK(mpp.voltage_v > 0.0);
    CHECK(mpp.voltage_v < 0.80);
}

TEST_CASE("effective cell efficiency is consistent with the bulk model") {
    // 125 mm x 125 mm cell at 1 kW/m^2.
    const PvCellParams cell;
    const PvCurvePoint mpp = pv_max_power_point(cell, 0.80, 400);
    const double efficiency = mpp.power_w / (0.125 * 0.125 * 1000.0);
    CHECK(std::abs(efficiency - 0.219) < 0.01);
}

TEST_CASE("I(V) is monotone non-increasing on a 200-point grid") {
    const PvCellParams cell;
    const auto curve = pv_iv_curve(cell, 0.80, 200);
    REQUIRE(curve.size() == 200);
    CHECK(curve.front().current_a ==
          doctest::Approx(pv_current(0.0, cell).current_a));
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].current_a <= curve[i - 1].current_a + 1e-9);
    // Power vanishes at both endpoints of the span.
    CHECK(curve.front().power_w == 0.0);
    CHECK(curve.back().power_w == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("P(V) has a single interior maximum") {
    const PvCellParams cell;
    const auto curve = pv_iv_curve(cell, 0.78, 300);
    int sign_changes = 0;
    for (std::size_t i = 2; i < curve.size(); ++i) {
        const double d_prev = curve[i - 1].power_w - curve[i - 2].power_w;
        const double d_next = curve[i].power_w - curve[i - 1].power_w;
        if (d_prev > 0.0 && d_next <= 0.0) ++sign_changes;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("bulk generated power") {
    PvArrayConfig array;
    array.overall_efficiency = 0.10;
    array.total_area_m2 = std::numbers::pi * 1.25 * 1.25;
    CHECK(generated_power(array) == doctest::Approx(490.87).epsilon(1e-4));

    array.overall_efficiency = 0.20;
    array.total_area_m2 = 6.0;
    CHECK(generated_power(array) == doctest::Approx(1200.0));

    array.total_area_m2 = 0.0;
    CHECK(generated_power(array) == 0.0);
}

TEST_CASE("nondimensional power") {
    CHECK(nondimensional_power(490.87, 490.87) == 1.0);
    CHECK(nondimensional_power(0.0, 100.0) == 0.0);
    CHECK(nondimensional_power(245.435, 490.87) == doctest::Approx(0.5));
    CHECK_THROWS_AS(nondimensional_power(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(nondimensional_power(1.0, -5.0), DomainError);
}

TEST_CASE("power samples keep the ratio consistent") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> power(0.0, 2000.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double pc = power(rng), pg = power(rng) + 1.0;
        const PowerSample sample = make_power_sample(pc, pg);
        CHECK(std::abs(sample.nondimensional - sample.consumed_w / sample.generated_w) <= 1e-12);
    }
    CHECK_THROWS_AS(make_power_sample(1.0, 0.0), DomainError);
}

TEST_CASE("parameter validation") {
    PvCellParams cell;
    cell.ideality = 2.5;
    CHECK_THROWS_AS(cell.validate(), ConfigError);
    PvArrayConfig array;
    array.overall_efficiency = 1.5;
    CHECK_THROWS_AS(array.validate(), ConfigError);
    MotorParams motor;
    motor.resistance = 0.0;
    CHECK_THROWS_AS(motor.validate(), ConfigError);
}
