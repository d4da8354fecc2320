#pragma once

namespace biphoton::units {

// Everything in this library is expressed in micrometers, femtoseconds and
// radians; wavelength-domain bandwidths enter as nanometers and are converted
// to angular-frequency widths on resolution.
inline constexpr double kSpeedOfLightUmPerFs = 0.299792458;
inline constexpr double kPi = 3.14159265358979323846;

// Converts a wavelength-domain Gaussian width (nm) at a carrier wavelength
// (um) into an angular-frequency width (rad/fs) through the first-order
// Jacobian of omega(lambda) = 2 pi c / lambda. +infinity passes through and
// means "no filter".
double bandwidth_to_angular(double sigma_nm, double lambda0_um);

double deg_to_rad(double deg);
double rad_to_deg(double rad);

}  // namespace biphoton::units
