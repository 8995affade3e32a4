#pragma once

#include "suav/math.hpp"

namespace suav::frames {

// Attitude as a yaw -> pitch -> roll (3-2-1) Euler sequence. Angles are
// not wrapped; integrators accumulate them unwrapped and wrapping is a
// display concern only.
struct EulerAngles {
    double psi = 0.0;   // yaw, rad
    double theta = 0.0; // pitch, rad
    double phi = 0.0;   // roll, rad
};

// Angular velocity about the body axes, rad/s.
struct BodyRates {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
};

struct EulerRates {
    double phi_dot = 0.0;
    double theta_dot = 0.0;
    double psi_dot = 0.0;
};

// Guard band around pitch = +-pi/2 inside which the Euler-rate transform
// refuses to evaluate instead of returning huge values.
inline constexpr double kPitchSingularityGuard = 1e-6;

// Direction-cosine matrix mapping inertial coordinates into body
// coordinates, built as the product of the three single-axis rotations.
// Throws DomainError on non-finite input.
Mat3 rotation_body_from_inertial(const EulerAngles &angles);

// Transpose (= inverse) of rotation_body_from_inertial.
Mat3 rotation_inertial_from_body(const EulerAngles &angles);

// Euler-angle rates from body-axis rates. Throws SingularityError when
// |theta| is within kPitchSingularityGuard of pi/2.
EulerRates euler_rates_from_body_rates(const EulerAngles &angles, const BodyRates &rates);

// Body-axis rates from Euler-angle rates; exact inverse of the above away
// from the singularity.
BodyRates body_rates_from_euler_rates(const EulerAngles &angles, const EulerRates &rates);

// Cross-product equivalent matrix: skew(w) * v == w x v for all v.
Mat3 skew(const BodyRates &rates);
Mat3 skew(const Vec3 &w);

} // namespace suav::frames
