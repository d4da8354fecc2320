#pragma once

namespace biphoton {

// One-resonance Sellmeier form n^2(lambda) = a + b/(lambda^2 - c) - d lambda^2
// with lambda in micrometers.
struct SellmeierCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double n_squared(double lambda_um) const;
  double index(double lambda_um) const;
  // dn/dlambda in 1/um, evaluated analytically.
  double index_derivative(double lambda_um) const;
};

// Principal-index pair of a uniaxial crystal plus the wavelength window on
// which the fit is trusted. Both polarizations share the window.
struct SellmeierSet {
  SellmeierCoefficients ordinary;
  SellmeierCoefficients extraordinary;  // principal value (90 deg from axis)
  double lambda_min_um = 0.0;
  double lambda_max_um = 0.0;

  void require_in_window(double lambda_um) const;

  static SellmeierSet bbo();
};

}  // namespace biphoton
