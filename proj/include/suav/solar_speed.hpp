#pragma once

#include <optional>
#include <vector>

namespace suav::solar_speed {

enum class HullShape { Cuboid, Ellipsoid };

// Buoyancy hull envelope. For cuboids the box is a (width) x b (height)
// x L (length) with PV on the a x L top face and frontal area a x b.
// For ellipsoids the height is D, width b, length L, with projected PV
// area pi*b*L/4 and frontal area pi*b*D/4. cd_max is the upper-bound
// drag coefficient used in the reference formulas (2 for cuboids, 1 for
// ellipsoids in the generalized plots); cd_actual is the hull's own drag
// coefficient, used when mapping partial PV coverage onto the reference
// plot through an updated aspect ratio.
struct HullGeometry {
    HullShape shape = HullShape::Cuboid;
    double a = 1.0;
    double b = 1.0;
    double length = 1.0;
    double height_d = 1.0; // ellipsoid height D
    double cd_max = 2.0;
    double cd_actual = 2.0;

    void validate() const;

    static HullGeometry cuboid(double a, double b, double length, double cd_max = 2.0,
                               double cd_actual = 2.0);
    static HullGeometry ellipsoid(double height_d, double b, double length, double cd_max = 1.0,
                                  double cd_actual = 1.0);
};

struct SpeedQuery {
    HullGeometry geometry;
    double efficiency = 0.1;               // overall PV system efficiency
    std::optional<double> pv_area_m2;      // defaults to full top/projected area
    double air_density = 1.2;              // kg/m^3
    double irradiance_w_per_m2 = 1000.0;

    void validate() const;
};

// Steady airspeed at which drag power equals PV supply for a neutrally
// buoyant cuboid hull. Throws ConfigError for a non-cuboid geometry.
double cuboid_speed(const SpeedQuery &query);

// Same for an ellipsoid hull. Throws ConfigError for a non-ellipsoid
// geometry.
double ellipsoid_speed(const SpeedQuery &query);

// Effective aspect ratio that makes the full-coverage reference formula
// reproduce the partial-coverage speed: cd_max * A_PV / (cd_actual *
// reference frontal area). A pure algebraic substitution; it does not
// carry the geometric meaning of L/b or L/D.
double updated_ratio(const HullGeometry &geometry, double pv_area_m2);

// Speed from the reduced reference formula at a given (possibly updated)
// aspect ratio.
double speed_from_ratio(HullShape shape, double ratio, double efficiency, double cd_max,
                        double air_density, double irradiance);

struct SpeedTableRow {
    double ratio;
    double eta;
    double speed_mps;
};

// Reference-table grid over aspect ratio x efficiency.
std::vector<SpeedTableRow> speed_table(HullShape shape, const std::vector<double> &eta_list,
                                       double ratio_min, double ratio_max, int samples,
                                       double cd_max, double air_density = 1.2,
                                       double irradiance = 1000.0);

struct DragSpec {
    double cd = 1.0;
    double area_m2 = 1.0;
    double air_density = 1.2;
};

// Largest acceleration sustainable at speed v on the instantaneous solar
// budget: a = (P_g - 0.5 rho cd A v^3) / (m v). Negative means the speed
// itself is not sustainable. Throws DomainError at v <= 0.
double accel_frontier(double v, double mass_kg, const DragSpec &drag, double generated_w);

// Speed at which the frontier crosses zero for the given drag and supply.
double frontier_speed(double mass_kg, const DragSpec &drag, double generated_w);

} // namespace suav::solar_speed
