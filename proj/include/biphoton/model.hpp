#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include <biphoton/dispersion.hpp>

namespace biphoton {

// Canonical ordering of the six mode-function coordinates: transverse
// wavevector components (rad/um) of signal and idler, then frequency
// detunings (rad/fs).
enum class Coord : int {
  q_s_x = 0,
  q_s_y = 1,
  q_i_x = 2,
  q_i_y = 3,
  omega_s = 4,
  omega_i = 5,
};
inline constexpr int kCoordCount = 6;
const char* coord_name(int index);

struct PumpParams {
  double wavelength_um = 0.405;
  double waist_um = 10.0;     // 0 means a plane-wave pump
  double bandwidth_nm = 1.0;  // Gaussian sigma; +infinity means monochromatic-limit off
};

// Per-arm Gaussian filters. A +infinity bandwidth means no spectral filter;
// a zero collecting mode means no spatial filter.
struct FilterSet {
  double sigma_s_nm = 5.0;
  double sigma_i_nm = 5.0;
  double w_s_um = 10.0;
  double w_i_um = 10.0;
};

// Which arms' filters enter the assembled form. Excluding an arm removes both
// its spectral and its collection terms, leaving that photon undetected.
enum class FilterMask { None, SignalOnly, IdlerOnly, Both };
bool mask_includes_signal(FilterMask m);
bool mask_includes_idler(FilterMask m);
const char* mask_name(FilterMask m);

struct SourceConfig {
  PumpParams pump;
  CrystalParams crystal;            // theta_rad here is ignored; see theta_rad below
  std::optional<double> theta_rad;  // absent: solved from phase matching
  std::optional<DispersionData> dispersion;  // absent: computed from Sellmeier
  FilterSet filters;
  std::optional<double> signal_wavelength_um;  // absent: twice the pump
  std::optional<double> idler_wavelength_um;
};

// A SourceConfig with every optional filled in and bandwidths converted to
// angular-frequency widths.
struct ResolvedConfig {
  PumpParams pump;
  CrystalParams crystal;  // theta_rad set
  DispersionData dispersion;
  FilterSet filters;
  double signal_wavelength_um = 0.0;
  double idler_wavelength_um = 0.0;
  double sigma_p_omega = 0.0;  // rad/fs
  double sigma_s_omega = 0.0;  // rad/fs, +infinity when unfiltered
  double sigma_i_omega = 0.0;
};

// Validates the configuration, solves the crystal angle when absent, computes
// the mismatch coefficients when absent, converts bandwidths.
ResolvedConfig resolve(const SourceConfig& cfg);

// Symmetric negative-semidefinite matrix A of the Gaussian mode function
// phi = N exp(x^T A x).
struct QuadraticForm {
  Eigen::Matrix<double, 6, 6> a;

  // The form restricted to a coordinate subset: the sub-block of A, i.e. the
  // form on the slice where every other coordinate is zero.
  Eigen::MatrixXd block(const std::vector<int>& coords) const;
};

QuadraticForm assemble_quadratic_form(const ResolvedConfig& cfg,
                                      FilterMask mask);
QuadraticForm assemble_quadratic_form(const SourceConfig& cfg,
                                      FilterMask mask);

// |phi|^2 up to normalization: exp(2 x^T A x), in (0, 1].
double mode_function_value(const QuadraticForm& q,
                           const Eigen::Matrix<double, 6, 1>& x);

}  // namespace biphoton
