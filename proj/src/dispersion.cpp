#include <biphoton/dispersion.hpp>

#include <cmath>
#include <string>

#include <biphoton/errors.hpp>
#include <biphoton/units.hpp>

namespace biphoton {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

void require_theta(double theta) {
  if (!(theta >= 0.0 && theta <= kHalfPi))
    throw InvalidConfig("propagation angle " + std::to_string(theta) +
                        " rad outside [0, pi/2]");
}

// dn_e(lambda, theta)/dlambda at fixed theta, by the chain rule through both
// principal indices.
double extraordinary_lambda_derivative(const SellmeierSet& s, double l,
                                       double theta) {
  double no = s.ordinary.index(l);
  double dno = s.ordinary.index_derivative(l);
  double nb = s.extraordinary.index(l);
  double dnb = s.extraordinary.index_derivative(l);
  double ct = std::cos(theta);
  double st = std::sin(theta);
  double inv2 = ct * ct / (no * no) + st * st / (nb * nb);
  double ne = 1.0 / std::sqrt(inv2);
  return ne * ne * ne *
         (ct * ct * dno / (no * no * no) + st * st * dnb / (nb * nb * nb));
}

}  // namespace

double index_ordinary(const SellmeierSet& s, double l) {
  s.require_in_window(l);
  return s.ordinary.index(l);
}

double index_extraordinary(const SellmeierSet& s, double l, double theta) {
  s.require_in_window(l);
  require_theta(theta);
  double no = s.ordinary.index(l);
  double nb = s.extraordinary.index(l);
  double ct = std::cos(theta);
  double st = std::sin(theta);
  double inv2 = ct * ct / (no * no) + st * st / (nb * nb);
  return 1.0 / std::sqrt(inv2);
}

double walkoff_angle(const SellmeierSet& s, double l, double theta) {
  s.require_in_window(l);
  require_theta(theta);
  double no = s.ordinary.index(l);
  double nb = s.extraordinary.index(l);
  double ne = index_extraordinary(s, l, theta);
  return 0.5 * ne * ne * std::sin(2.0 * theta) *
         (1.0 / (nb * nb) - 1.0 / (no * no));
}

double group_delay_coefficient(const SellmeierSet& s, double l,
                               const Polarization& pol) {
  s.require_in_window(l);
  double n, dn;
  if (pol.kind == Polarization::Kind::ordinary) {
    n = s.ordinary.index(l);
    dn = s.ordinary.index_derivative(l);
  } else {
    require_theta(pol.theta_rad);
    n = index_extraordinary(s, l, pol.theta_rad);
    dn = extraordinary_lambda_derivative(s, l, pol.theta_rad);
  }
  return (n - l * dn) / units::kSpeedOfLightUmPerFs;
}

double phase_mismatch(const SellmeierSet& s, double lp, double theta) {
  double lph = 2.0 * lp;
  return index_extraordinary(s, lp, theta) / lp -
         index_extraordinary(s, lph, theta) / lph -
         index_ordinary(s, lph) / lph;
}

double phase_matching_angle(const SellmeierSet& s, double lp) {
  s.require_in_window(lp);
  s.require_in_window(2.0 * lp);
  double lo = 1e-9;
  double hi = kHalfPi - 1e-9;
  double flo = phase_mismatch(s, lp, lo);
  double fhi = phase_mismatch(s, lp, hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NoPhaseMatching(
        "longitudinal mismatch keeps one sign over (0, pi/2); no collinear "
        "matching angle");
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = phase_mismatch(s, lp, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double theta = 0.5 * (lo + hi);
  if (!(std::abs(phase_mismatch(s, lp, theta)) < 1e-12))
    throw NoPhaseMatching("bisection stalled above the residual tolerance");
  return theta;
}

DispersionData dispersion_data(const CrystalParams& c, double lp) {
  double lph = 2.0 * lp;
  double theta = c.theta_rad;
  auto e = Polarization::extraordinary(theta);
  DispersionData d;
  d.rho_p_rad = walkoff_angle(c.sellmeier, lp, theta);
  d.rho_s_rad = walkoff_angle(c.sellmeier, lph, theta);
  double gd_pump = group_delay_coefficient(c.sellmeier, lp, e);
  d.d_s_fs_per_um = group_delay_coefficient(c.sellmeier, lph, e) - gd_pump;
  d.d_i_fs_per_um =
      group_delay_coefficient(c.sellmeier, lph, Polarization::ordinary()) -
      gd_pump;
  return d;
}

}  // namespace biphoton
