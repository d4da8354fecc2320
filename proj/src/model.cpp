#include <biphoton/model.hpp>

#include <cmath>
#include <string>

#include <biphoton/errors.hpp>
#include <biphoton/units.hpp>

namespace biphoton {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

// 1/x^2 with the +infinity sentinel mapping to a vanishing coefficient.
double inv_square(double x) {
  if (std::isinf(x)) return 0.0;
  return 1.0 / (x * x);
}

void require_finite_dispersion(const DispersionData& d) {
  if (!(std::isfinite(d.rho_p_rad) && std::isfinite(d.rho_s_rad) &&
        std::isfinite(d.d_s_fs_per_um) && std::isfinite(d.d_i_fs_per_um)))
    throw MissingDispersion("mismatch coefficients must all be finite");
  if (!(std::abs(d.rho_p_rad) < kHalfPi && std::abs(d.rho_s_rad) < kHalfPi))
    throw InvalidConfig("walk-off angles must lie in (-pi/2, pi/2)");
}

}  // namespace

const char* coord_name(int index) {
  static const char* names[kCoordCount] = {"q_s_x", "q_s_y", "q_i_x",
                                           "q_i_y", "omega_s", "omega_i"};
  if (index < 0 || index >= kCoordCount)
    throw InvalidGrid("coordinate index out of range");
  return names[index];
}

bool mask_includes_signal(FilterMask m) {
  return m == FilterMask::SignalOnly || m == FilterMask::Both;
}

bool mask_includes_idler(FilterMask m) {
  return m == FilterMask::IdlerOnly || m == FilterMask::Both;
}

const char* mask_name(FilterMask m) {
  switch (m) {
    case FilterMask::None: return "none";
    case FilterMask::SignalOnly: return "signal";
    case FilterMask::IdlerOnly: return "idler";
    case FilterMask::Both: return "both";
  }
  return "?";
}

ResolvedConfig resolve(const SourceConfig& cfg) {
  const PumpParams& p = cfg.pump;
  if (!(p.wavelength_um > 0.0) || !std::isfinite(p.wavelength_um))
    throw InvalidConfig("pump wavelength must be positive and finite");
  if (!(p.waist_um >= 0.0) || !std::isfinite(p.waist_um))
    throw InvalidConfig("pump waist must be nonnegative and finite");
  if (!(p.bandwidth_nm > 0.0))
    throw InvalidConfig("pump bandwidth must be positive");
  if (!(cfg.crystal.length_um > 0.0) || !std::isfinite(cfg.crystal.length_um))
    throw InvalidConfig("crystal length must be positive and finite");
  if (!(cfg.crystal.sinc_fit_gamma > 0.0) ||
      !std::isfinite(cfg.crystal.sinc_fit_gamma))
    throw InvalidConfig("longitudinal fit coefficient must be positive");
  const FilterSet& f = cfg.filters;
  if (!(f.w_s_um >= 0.0) || !std::isfinite(f.w_s_um) || !(f.w_i_um >= 0.0) ||
      !std::isfinite(f.w_i_um))
    throw InvalidConfig("collecting modes must be nonnegative and finite");
  if (!(f.sigma_s_nm > 0.0) || !(f.sigma_i_nm > 0.0))
    throw InvalidConfig("filter bandwidths must be positive");

  ResolvedConfig r;
  r.pump = p;
  r.crystal = cfg.crystal;
  r.filters = f;
  r.signal_wavelength_um =
      cfg.signal_wavelength_um.value_or(2.0 * p.wavelength_um);
  r.idler_wavelength_um =
      cfg.idler_wavelength_um.value_or(2.0 * p.wavelength_um);
  if (!(r.signal_wavelength_um > 0.0) || !(r.idler_wavelength_um > 0.0))
    throw InvalidConfig("photon wavelengths must be positive");
  double residual = std::abs(1.0 / r.signal_wavelength_um +
                             1.0 / r.idler_wavelength_um -
                             1.0 / p.wavelength_um);
  if (!(residual <= 1e-9))
    throw InvalidConfig(
        "central wavelengths violate energy conservation; 1/ls + 1/li - 1/lp "
        "= " +
        std::to_string(residual) + " 1/um");

  r.crystal.theta_rad =
      cfg.theta_rad ? *cfg.theta_rad
                    : phase_matching_angle(r.crystal.sellmeier, p.wavelength_um);
  if (!(r.crystal.theta_rad > 0.0 && r.crystal.theta_rad < kHalfPi))
    throw InvalidConfig("crystal angle must lie strictly inside (0, pi/2)");

  r.dispersion = cfg.dispersion
                     ? *cfg.dispersion
                     : dispersion_data(r.crystal, p.wavelength_um);
  require_finite_dispersion(r.dispersion);

  r.sigma_p_omega =
      units::bandwidth_to_angular(p.bandwidth_nm, p.wavelength_um);
  r.sigma_s_omega =
      units::bandwidth_to_angular(f.sigma_s_nm, r.signal_wavelength_um);
  r.sigma_i_omega =
      units::bandwidth_to_angular(f.sigma_i_nm, r.idler_wavelength_um);
  return r;
}

QuadraticForm assemble_quadratic_form(const ResolvedConfig& cfg,
                                      FilterMask mask) {
  require_finite_dispersion(cfg.dispersion);
  using M6 = Eigen::Matrix<double, 6, 6>;
  using V6 = Eigen::Matrix<double, 6, 1>;
  M6 m = M6::Zero();  // accumulates -4A as a sum of outer products
  auto add_outer = [&m](const V6& v, double coeff) {
    if (coeff != 0.0) m.noalias() += coeff * (v * v.transpose());
  };
  auto unit = [](int i) {
    V6 v = V6::Zero();
    v(i) = 1.0;
    return v;
  };

  V6 ux = unit(0) + unit(2);  // pump confines the transverse sums
  V6 uy = unit(1) + unit(3);
  V6 uw = unit(4) + unit(5);  // and the frequency sum
  double wp2 = cfg.pump.waist_um * cfg.pump.waist_um;
  add_outer(ux, wp2);
  add_outer(uy, wp2);
  add_outer(uw, inv_square(cfg.sigma_p_omega));

  if (mask_includes_signal(mask)) {
    double ws2 = cfg.filters.w_s_um * cfg.filters.w_s_um;
    add_outer(unit(0), ws2);
    add_outer(unit(1), ws2);
    add_outer(unit(4), inv_square(cfg.sigma_s_omega));
  }
  if (mask_includes_idler(mask)) {
    double wi2 = cfg.filters.w_i_um * cfg.filters.w_i_um;
    add_outer(unit(2), wi2);
    add_outer(unit(3), wi2);
    add_outer(unit(5), inv_square(cfg.sigma_i_omega));
  }

  // First-order longitudinal mismatch direction.
  V6 b;
  b << cfg.dispersion.rho_p_rad - cfg.dispersion.rho_s_rad, 0.0,
      cfg.dispersion.rho_p_rad, 0.0, cfg.dispersion.d_s_fs_per_um,
      -cfg.dispersion.d_i_fs_per_um;
  add_outer(b, cfg.crystal.sinc_fit_gamma * cfg.crystal.length_um *
                   cfg.crystal.length_um);

  QuadraticForm q;
  q.a = -0.25 * m;
  return q;
}

QuadraticForm assemble_quadratic_form(const SourceConfig& cfg,
                                      FilterMask mask) {
  return assemble_quadratic_form(resolve(cfg), mask);
}

Eigen::MatrixXd QuadraticForm::block(const std::vector<int>& coords) const {
  int n = static_cast<int>(coords.size());
  if (n == 0) throw InvalidGrid("coordinate subset must not be empty");
  for (int c : coords)
    if (c < 0 || c >= kCoordCount)
      throw InvalidGrid("coordinate index out of range");
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = a(coords[i], coords[j]);
  return out;
}

double mode_function_value(const QuadraticForm& q,
                           const Eigen::Matrix<double, 6, 1>& x) {
  return std::exp(2.0 * x.dot(q.a * x));
}

}  // namespace biphoton
