#pragma once

#include "suav/control.hpp"
#include "suav/ouq.hpp"
#include "suav/powertrain.hpp"
#include "suav/solar_speed.hpp"

#include <optional>
#include <string>
#include <vector>

namespace suav::csv {

// All floating-point emission uses 17 significant digits so that parsing
// the text back recovers the exact double.
std::string format_float(double v);

// Header: t,x,z,theta,u,w,q,Fx,Fz,M,Pc,Pg,Pnon
std::string sim_result_csv(const control::SimResult &result);

// Header: kp,kd,pnon_max,overshoot,vmax,peak_time,diverged
// With a region, a trailing `feasible` column is added.
std::string gain_map_csv(const ouq::GainMap &map,
                         const std::optional<ouq::FeasibleRegion> &region = std::nullopt);

// Header: voltage_V,current_A,power_W
std::string pv_curve_csv(const std::vector<powertrain::PvCurvePoint> &curve);

// Header: ratio,eta,speed_mps
std::string speed_table_csv(const std::vector<solar_speed::SpeedTableRow> &rows);

// Header: v_mps,a_mps2
std::string frontier_csv(const std::vector<std::pair<double, double>> &rows);

void write_file(const std::string &path, const std::string &contents);

} // namespace suav::csv
