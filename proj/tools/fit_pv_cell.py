#!/usr/bin/env python3
"""Fit the single-diode constants shipped as PvCellParams defaults.

The reference cell is a 125 mm x 125 mm monocrystalline cell whose data
sheet gives a 0.58 V / 5.93 A operating point at about 3.42 W. With the
short-circuit current, ideality, temperature, and shunt resistance fixed
at their data-sheet/typical values, the shunt path alone caps I(0.58 V)
below 5.93 A, so no (I_0, R_s) pair hits both targets exactly. This
script balances the two relative errors against their tolerances (2% on
the operating-point current, 5% on the maximum power) and prints the
dark saturation current to ship.

Usage: python3 tools/fit_pv_cell.py
"""

import numpy as np
from scipy.optimize import brentq

Q_E = 1.602e-19  # C
K_B = 1.381e-23  # J/K

I_SC = 5.95      # A
N_IDEALITY = 1.3
T_JUNCTION = 298.15  # K
R_SHUNT = 10.0   # ohm
R_SERIES = 0.002  # ohm, typical contact resistance

OP_VOLTAGE, OP_CURRENT = 0.58, 5.93
MPP_TARGET = 3.42
OP_TOL, MPP_TOL = 0.02, 0.05

THERMAL_SLOPE = Q_E / (N_IDEALITY * K_B * T_JUNCTION)


def pv_current(voltage, i0):
    def residual(i):
        v_internal = voltage + i * R_SERIES
        diode = i0 * np.expm1(THERMAL_SLOPE * v_internal)
        return I_SC - diode - v_internal / R_SHUNT - i

    if residual(0.0) <= 0.0:
        return 0.0
    return brentq(residual, 0.0, I_SC * 1.001, xtol=1e-15)


def max_power(i0, v_max=0.80, samples=16001):
    voltages = np.linspace(0.0, v_max, samples)
    powers = voltages * np.array([pv_current(v, i0) for v in voltages])
    k = int(np.argmax(powers))
    return powers[k], voltages[k]


def normalized_error_gap(log_i0):
    i0 = np.exp(log_i0)
    op_err = abs(pv_current(OP_VOLTAGE, i0) - OP_CURRENT) / OP_CURRENT / OP_TOL
    mpp_err = abs(max_power(i0)[0] - MPP_TARGET) / MPP_TARGET / MPP_TOL
    return op_err - mpp_err


def main():
    log_i0 = brentq(normalized_error_gap, np.log(9e-10), np.log(1.4e-9), xtol=1e-12)
    i0 = np.exp(log_i0)
    shipped = 1.13e-9  # rounded value carried in the C++ defaults

    for label, value in (("balanced", i0), ("shipped", shipped)):
        op = pv_current(OP_VOLTAGE, value)
        mpp, v_mpp = max_power(value)
        print(f"{label}: I_0 = {value:.3e} A, R_s = {R_SERIES} ohm")
        print(f"  I({OP_VOLTAGE} V) = {op:.5f} A "
              f"({100 * (op - OP_CURRENT) / OP_CURRENT:+.3f}% vs +-{100 * OP_TOL:.0f}%)")
        print(f"  MPP = {mpp:.5f} W at {v_mpp:.4f} V "
              f"({100 * (mpp - MPP_TARGET) / MPP_TARGET:+.3f}% vs +-{100 * MPP_TOL:.0f}%)")


if __name__ == "__main__":
    main()
