#pragma once

#include <biphoton/sellmeier.hpp>

namespace biphoton {

// How a beam propagates in the uniaxial crystal: ordinary, or extraordinary
// at angle theta between wavevector and optic axis.
struct Polarization {
  enum class Kind { ordinary, extraordinary };
  Kind kind = Kind::ordinary;
  double theta_rad = 0.0;

  static Polarization ordinary() { return {Kind::ordinary, 0.0}; }
  static Polarization extraordinary(double theta_rad) {
    return {Kind::extraordinary, theta_rad};
  }
};

struct CrystalParams {
  double length_um = 1000.0;
  double theta_rad = 0.0;
  SellmeierSet sellmeier = SellmeierSet::bbo();
  // Coefficient of the Gaussian approximation to the longitudinal
  // phase-matching profile (matches the 1/e^2 width of sinc^2).
  double sinc_fit_gamma = 0.193;
};

// First-order longitudinal mismatch coefficients: walk-off angles of pump and
// signal, and each photon's group-delay difference against the pump
// (photon minus pump, fs/um).
struct DispersionData {
  double rho_p_rad = 0.0;
  double rho_s_rad = 0.0;
  double d_s_fs_per_um = 0.0;
  double d_i_fs_per_um = 0.0;
};

double index_ordinary(const SellmeierSet& s, double lambda_um);
// Angle-tuned extraordinary index: 1/n^2 = cos^2/n_o^2 + sin^2/n_e^2.
double index_extraordinary(const SellmeierSet& s, double lambda_um,
                           double theta_rad);
// Walk-off of the extraordinary beam: -(1/n) dn/dtheta, analytic.
double walkoff_angle(const SellmeierSet& s, double lambda_um, double theta_rad);
// Inverse group velocity N_g / c in fs/um.
double group_delay_coefficient(const SellmeierSet& s, double lambda_um,
                               const Polarization& pol);
// Collinear degenerate mismatch n_e(lp,th)/lp - n_e(2lp,th)/(2lp) - n_o(2lp)/(2lp)
// in 1/um (common 2 pi factor omitted throughout).
double phase_mismatch(const SellmeierSet& s, double lambda_pump_um,
                      double theta_rad);
// Root of the mismatch on (0, pi/2) by bisection; residual below 1e-12 1/um.
double phase_matching_angle(const SellmeierSet& s, double lambda_pump_um);
// All four mismatch coefficients at the crystal's angle, for a degenerate
// pair at twice the pump wavelength.
DispersionData dispersion_data(const CrystalParams& c, double lambda_pump_um);

}  // namespace biphoton
