#include "suav/solar_speed.hpp"

#include "suav/errors.hpp"

#include <cmath>
#include <numbers>

namespace suav::solar_speed {

namespace {

double cbrt_pos(double v) { return std::cbrt(v); }

// Reference frontal area that normalizes the updated-ratio substitution:
// a*b for the cuboid plot, pi*b*D/4 for the ellipsoid plot.
double reference_area(const HullGeometry &g) {
    if (g.shape == HullShape::Cuboid) return g.a * g.b;
    return std::numbers::pi * g.b * g.height_d / 4.0;
}

} // namespace

void HullGeometry::validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !(length > 0.0) || !(height_d > 0.0))
        throw ConfigError("hull dimensions must be positive");
    if (!(cd_max > 0.001 && cd_max <= 5.0))
        throw ConfigError("cd_max outside the supported range (0.001, 5]");
    if (!(cd_actual > 0.0 && cd_actual <= cd_max))
        throw ConfigError("cd_actual must be in (0, cd_max]");
}

HullGeometry HullGeometry::cuboid(double a, double b, double length, double cd_max,
                                  double cd_actual) {
    HullGeometry g;
    g.shape = HullShape::Cuboid;
    g.a = a;
    g.b = b;
    g.length = length;
    g.cd_max = cd_max;
    g.cd_actual = cd_actual;
    g.validate();
    return g;
}

HullGeometry HullGeometry::ellipsoid(double height_d, double b, double length, double cd_max,
                                     double cd_actual) {
    HullGeometry g;
    g.shape = HullShape::Ellipsoid;
    g.height_d = height_d;
    g.b = b;
    g.length = length;
    g.cd_max = cd_max;
    g.cd_actual = cd_actual;
    g.validate();
    return g;
}

void SpeedQuery::validate() const {
    geometry.validate();
    if (!(efficiency > 0.0 && efficiency < 1.0))
        throw ConfigError("efficiency must be in (0, 1)");
    if (pv_area_m2 && !(*pv_area_m2 > 0.0)) throw ConfigError("PV area must be positive");
    if (!(air_density > 0.0)) throw ConfigError("air density must be positive");
    if (!(irradiance_w_per_m2 > 0.0)) throw ConfigError("irradiance must be positive");
}

double speed_from_ratio(HullShape, double ratio, double efficiency, double cd_max,
                        double air_density, double irradiance) {
    // v^3 = S * eta * ratio / (0.5 * rho * cd_max); the reference ratio
    // already carries the PV-area-over-frontal-area geometry for both
    // shapes.
    return cbrt_pos(irradiance * efficiency * ratio / (0.5 * air_density * cd_max));
}

double updated_ratio(const HullGeometry &geometry, double pv_area_m2) {
    if (!(pv_area_m2 > 0.0)) throw ConfigError("PV area must be positive");
    geometry.validate();
    return geometry.cd_max * pv_area_m2 / (geometry.cd_actual * reference_area(geometry));
}

double cuboid_speed(const SpeedQuery &query) {
    query.validate();
    const HullGeometry &g = query.geometry;
    if (g.shape != HullShape::Cuboid) throw ConfigError("cuboid_speed needs a cuboid geometry");
    const double ratio =
        query.pv_area_m2 ? updated_ratio(g, *query.pv_area_m2) : g.length / g.b;
    return speed_from_ratio(g.shape, ratio, query.efficiency, g.cd_max, query.air_density,
                            query.irradiance_w_per_m2);
}

double ellipsoid_speed(const SpeedQuery &query) {
    query.validate();
    const HullGeometry &g = query.geometry;
    if (g.shape != HullShape::Ellipsoid)
        throw ConfigError("ellipsoid_speed needs an ellipsoid geometry");
    const double ratio =
        query.pv_area_m2 ? updated_ratio(g, *query.pv_area_m2) : g.length / g.height_d;
    return speed_from_ratio(g.shape, ratio, query.efficiency, g.cd_max, query.air_density,
                            query.irradiance_w_per_m2);
}

std::vector<SpeedTableRow> speed_table(HullShape shape, const std::vector<double> &eta_list,
                                       double ratio_min, double ratio_max, int samples,
                                       double cd_max, double air_density, double irradiance) {
    if (samples < 2) throw ConfigError("speed_table needs at least 2 samples");
    if (!(ratio_min > 0.0) || !(ratio_max > ratio_min))
        throw ConfigError("speed_table needs a positive, increasing ratio range");
    std::vector<SpeedTableRow> rows;
    rows.reserve(eta_list.size() * static_cast<std::size_t>(samples));
    for (double eta : eta_list) {
        for (int k = 0; k < samples; ++k) {
            const double ratio =
                ratio_min + (ratio_max - ratio_min) * static_cast<double>(k) / (samples - 1);
            rows.push_back(
                {ratio, eta, speed_from_ratio(shape, ratio, eta, cd_max, air_density, irradiance)});
        }
    }
    return rows;
}

double accel_frontier(double v, double mass_kg, const DragSpec &drag, double generated_w) {
    if (!(v > 0.0))
        throw DomainError("acceleration frontier undefined at zero speed");
    if (!(mass_kg > 0.0)) throw ConfigError("mass must be positive");
    if (!(generated_w > 0.0)) throw DomainError("acceleration frontier needs P_g > 0");
    const double drag_power = 0.5 * drag.air_density * drag.cd * drag.area_m2 * v * v * v;
    return (generated_w - drag_power) / (mass_kg * v);
}

double frontier_speed(double mass_kg, const DragSpec &drag, double generated_w) {
    if (!(mass_kg > 0.0)) throw ConfigError("mass must be positive");
    if (!(generated_w > 0.0)) throw DomainError("frontier speed needs P_g > 0");
    return std::cbrt(generated_w / (0.5 * drag.air_density * drag.cd * drag.area_m2));
}

} // namespace suav::solar_speed
