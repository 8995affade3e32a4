#include "suav/frames.hpp"

#include "suav/errors.hpp"

#include <cmath>
#include <numbers>

namespace suav::frames {

namespace {

void require_finite(const EulerAngles &a) {
    if (!std::isfinite(a.psi) || !std::isfinite(a.theta) || !std::isfinite(a.phi))
        throw DomainError("euler angles must be finite");
}

void require_finite(const BodyRates &w) {
    if (!std::isfinite(w.p) || !std::isfinite(w.q) || !std::isfinite(w.r))
        throw DomainError("body rates must be finite");
}

} // namespace

Mat3 rotation_body_from_inertial(const EulerAngles &angles) {
    require_finite(angles);
    const double cpsi = std::cos(angles.psi), spsi = std::sin(angles.psi);
    const double cth = std::cos(angles.theta), sth = std::sin(angles.theta);
    const double cphi = std::cos(angles.phi), sphi = std::sin(angles.phi);

    // Yaw about z, then pitch about the intermediate y, then roll about
    // the body x; each factor is a coordinate transform, so the product
    // maps inertial components to body components.
    const Mat3 yaw{{cpsi, spsi, 0, -spsi, cpsi, 0, 0, 0, 1}};
    const Mat3 pitch{{cth, 0, -sth, 0, 1, 0, sth, 0, cth}};
    const Mat3 roll{{1, 0, 0, 0, cphi, sphi, 0, -sphi, cphi}};
    return roll * pitch * yaw;
}

Mat3 rotation_inertial_from_body(const EulerAngles &angles) {
    return rotation_body_from_inertial(angles).transpose();
}

EulerRates euler_rates_from_body_rates(const EulerAngles &angles, const BodyRates &rates) {
    require_finite(angles);
    require_finite(rates);
    const double half_pi = std::numbers::pi / 2.0;
    // Compare against the wrapped pitch so unwrapped angles are guarded too.
    const double margin = half_pi - std::abs(std::remainder(angles.theta, std::numbers::pi));
    if (margin < kPitchSingularityGuard)
        throw SingularityError("euler-rate transform is singular: pitch within guard band of +-pi/2");

    const double cphi = std::cos(angles.phi), sphi = std::sin(angles.phi);
    const double tth = std::tan(angles.theta), cth = std::cos(angles.theta);
    return {
        rates.p + sphi * tth * rates.q + cphi * tth * rates.r,
        cphi * rates.q - sphi * rates.r,
        (sphi * rates.q + cphi * rates.r) / cth,
    };
}

BodyRates body_rates_from_euler_rates(const EulerAngles &angles, const EulerRates &rates) {
    require_finite(angles);
    if (!std::isfinite(rates.phi_dot) || !std::isfinite(rates.theta_dot) ||
        !std::isfinite(rates.psi_dot))
        throw DomainError("euler rates must be finite");

    const double cphi = std::cos(angles.phi), sphi = std::sin(angles.phi);
    const double cth = std::cos(angles.theta), sth = std::sin(angles.theta);
    return {
        rates.phi_dot - sth * rates.psi_dot,
        cphi * rates.theta_dot + sphi * cth * rates.psi_dot,
        -sphi * rates.theta_dot + cphi * cth * rates.psi_dot,
    };
}

Mat3 skew(const Vec3 &w) {
    return Mat3{{0, -w.z, w.y, w.z, 0, -w.x, -w.y, w.x, 0}};
}

Mat3 skew(const BodyRates &rates) {
    require_finite(rates);
    return skew(Vec3{rates.p, rates.q, rates.r});
}

} // namespace suav::frames
