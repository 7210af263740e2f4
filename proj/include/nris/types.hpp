// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace nris {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kJ{0.0, 1.0};

/// Physical constants (CODATA 2018, exact where SI defines them).
namespace phys {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K
inline constexpr double kEpsilon0 = 8.8541878128e-12;         // F/m
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
}  // namespace phys

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into [0, 2*pi).
inline double wrap_two_pi(double rad) {
    double w = std::fmod(rad, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

}  // namespace nris
