#include "suav/csv.hpp"

#include "suav/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace suav::csv {

std::string format_float(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string sim_result_csv(const control::SimResult &result) {
    std::ostringstream out;
    out << "t,x,z,theta,u,w,q,Fx,Fz,M,Pc,Pg,Pnon\n";
    for (std::size_t i = 0; i < result.size(); ++i) {
        out << format_float(result.t[i]) << ',' << format_float(result.x[i]) << ','
            << format_float(result.z[i]) << ',' << format_float(result.theta[i]) << ','
            << format_float(result.u[i]) << ',' << format_float(result.w[i]) << ','
            << format_float(result.q[i]) << ',' << format_float(result.fx[i]) << ','
            << format_float(result.fz[i]) << ',' << format_float(result.moment[i]) << ','
            << format_float(result.pc[i]) << ',' << format_float(result.pg[i]) << ','
            << format_float(result.pnon[i]) << '\n';
    }
    return out.str();
}

std::string gain_map_csv(const ouq::GainMap &map,
                         const std::optional<ouq::FeasibleRegion> &region) {
    std::ostringstream out;
    out << "kp,kd,pnon_max,overshoot,vmax,peak_time,diverged";
    if (region) out << ",feasible";
    out << '\n';
    for (std::size_t i = 0; i < map.cells.size(); ++i) {
        const auto &cell = map.cells[i];
        out << format_float(cell.kp) << ',' << format_float(cell.kd) << ','
            << format_float(cell.pnon_max) << ',' << format_float(cell.overshoot) << ','
            << format_float(cell.vmax) << ',' << format_float(cell.peak_time) << ','
            << (cell.diverged ? 1 : 0);
        if (region) out << ',' << (region->mask[i] ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

std::string pv_curve_csv(const std::vector<powertrain::PvCurvePoint> &curve) {
    std::ostringstream out;
    out << "voltage_V,current_A,power_W\n";
    for (const auto &point : curve)
        out << format_float(point.voltage_v) << ',' << format_float(point.current_a) << ','
            << format_float(point.power_w) << '\n';
    return out.str();
}

std::string speed_table_csv(const std::vector<solar_speed::SpeedTableRow> &rows) {
    std::ostringstream out;
    out << "ratio,eta,speed_mps\n";
    for (const auto &row : rows)
        out << format_float(row.ratio) << ',' << format_float(row.eta) << ','
            << format_float(row.speed_mps) << '\n';
    return out.str();
}

std::string frontier_csv(const std::vector<std::pair<double, double>> &rows) {
    std::ostringstream out;
    out << "v_mps,a_mps2\n";
    for (const auto &[v, a] : rows)
        out << format_float(v) << ',' << format_float(a) << '\n';
    return out.str();
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file: " + path);
    file << contents;
    if (!file) throw ConfigError("failed writing output file: " + path);
}

} // namespace suav::csv
