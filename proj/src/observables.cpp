#include <biphoton/observables.hpp>

#include <cmath>

#include <biphoton/errors.hpp>
#include <biphoton/units.hpp>

namespace biphoton {

Arm partner(Arm arm) { return arm == Arm::signal ? Arm::idler : Arm::signal; }

const char* arm_name(Arm arm) {
  return arm == Arm::signal ? "signal" : "idler";
}

std::vector<int> domain_coords(Domain d) {
  switch (d) {
    case Domain::spatial:
      return {0, 1, 2, 3};
    case Domain::spectral:
      return {4, 5};
    case Domain::full:
      return {0, 1, 2, 3, 4, 5};
  }
  throw InvalidConfig("unknown domain");
}

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::spatial:
      return "spatial";
    case Domain::spectral:
      return "spectral";
    case Domain::full:
      return "full";
  }
  return "?";
}

std::vector<int> arm_domain_coords(Arm arm, Domain d) {
  switch (d) {
    case Domain::spatial:
      return arm == Arm::signal ? std::vector<int>{0, 1}
                                : std::vector<int>{2, 3};
    case Domain::spectral:
      return arm == Arm::signal ? std::vector<int>{4} : std::vector<int>{5};
    case Domain::full:
      return arm == Arm::signal ? std::vector<int>{0, 1, 4}
                                : std::vector<int>{2, 3, 5};
  }
  throw InvalidConfig("unknown domain");
}

double subsystem_purity(const ResolvedConfig& cfg,
                        const std::vector<int>& keep) {
  QuadraticForm q = assemble_quadratic_form(cfg, FilterMask::Both);
  return purity(reduce_pure_state(q, keep));
}

double heralding_efficiency(const ResolvedConfig& cfg, Arm heralding_arm,
                            Domain domain) {
  QuadraticForm both = assemble_quadratic_form(cfg, FilterMask::Both);
  QuadraticForm solo = assemble_quadratic_form(
      cfg, heralding_arm == Arm::signal ? FilterMask::SignalOnly
                                        : FilterMask::IdlerOnly);
  std::vector<int> coords = domain_coords(domain);
  try {
    return detection_probability_ratio(both.block(coords),
                                       solo.block(coords));
  } catch (const NotPositiveDefinite& e) {
    throw UnnormalizableConfiguration(
        std::string("heralding efficiency undefined: ") + e.what());
  }
}

double purity_efficiency_factor(const ResolvedConfig& cfg, Arm heralded_arm) {
  double p =
      subsystem_purity(cfg, arm_domain_coords(heralded_arm, Domain::spectral));
  double eta =
      heralding_efficiency(cfg, partner(heralded_arm), Domain::spectral);
  return p * eta;
}

ObservablesReport make_report(const ResolvedConfig& cfg) {
  ObservablesReport r;
  r.purity_q_s = subsystem_purity(cfg, {0, 1});
  r.purity_q_i = subsystem_purity(cfg, {2, 3});
  r.purity_omega_s = subsystem_purity(cfg, {4});
  r.purity_omega_i = subsystem_purity(cfg, {5});
  r.eta_s = heralding_efficiency(cfg, Arm::signal, Domain::spatial);
  r.eta_i = heralding_efficiency(cfg, Arm::idler, Domain::spatial);
  r.pef_signal = purity_efficiency_factor(cfg, Arm::signal);
  r.pef_idler = purity_efficiency_factor(cfg, Arm::idler);
  return r;
}

const char* slice_domain_name(SliceDomain d) {
  return d == SliceDomain::spectral ? "spectral" : "spatial";
}

namespace {

std::vector<int> slice_coords(SliceDomain d) {
  return d == SliceDomain::spectral ? std::vector<int>{4, 5}
                                    : std::vector<int>{0, 2};
}

// 2x2 intensity form of the slice, checked to be confining.
Eigen::Matrix2d slice_form(const ResolvedConfig& cfg, SliceDomain domain,
                           FilterMask mask) {
  QuadraticForm q = assemble_quadratic_form(cfg, mask);
  Eigen::Matrix2d b = q.block(slice_coords(domain));
  Eigen::Matrix2d m = -2.0 * b;
  Eigen::LLT<Eigen::Matrix2d> llt(m);
  if (llt.info() != Eigen::Success)
    throw InvalidGrid(std::string("the ") + slice_domain_name(domain) +
                      " slice is not confining under mask '" +
                      mask_name(mask) + "'");
  return b;
}

TiltMetrics tilt_of(const Eigen::Matrix2d& b) {
  Eigen::Matrix2d m = -2.0 * b;
  // Covariance is proportional to the adjugate of the intensity form.
  double c11 = m(1, 1);
  double c22 = m(0, 0);
  double c12 = -m(0, 1);
  TiltMetrics t;
  t.principal_angle_deg =
      units::rad_to_deg(0.5 * std::atan2(2.0 * c12, c11 - c22));
  double d = std::fmod(t.principal_angle_deg + 45.0, 180.0);
  if (d < 0) d += 180.0;
  t.deviation_from_antidiagonal_deg = std::min(d, 180.0 - d);
  double s = 2.0 * std::abs(c12) / (c11 + c22);
  t.alignment_deviation_deg =
      units::rad_to_deg(0.5 * std::asin(std::min(1.0, std::max(0.0, s))));
  return t;
}

}  // namespace

TiltMetrics slice_tilt(const ResolvedConfig& cfg, SliceDomain domain,
                       FilterMask mask) {
  return tilt_of(slice_form(cfg, domain, mask));
}

double slice_auto_half_range(const ResolvedConfig& cfg, SliceDomain domain,
                             FilterMask mask) {
  Eigen::Matrix2d m = -2.0 * slice_form(cfg, domain, mask);
  Eigen::Matrix2d inv = m.inverse();
  double s0 = std::sqrt(0.5 * inv(0, 0));
  double s1 = std::sqrt(0.5 * inv(1, 1));
  return 6.0 * std::max(s0, s1);
}

SliceGrid joint_intensity_slice(const ResolvedConfig& cfg,
                                const SliceRequest& req) {
  if (req.points < 3 || req.points % 2 == 0)
    throw InvalidGrid("slice needs an odd point count of at least 3");
  double hr = req.half_range ? *req.half_range
                             : slice_auto_half_range(cfg, req.domain, req.mask);
  if (!(hr > 0.0) || !std::isfinite(hr))
    throw InvalidGrid("slice half range must be positive and finite");

  Eigen::Matrix2d b = slice_form(cfg, req.domain, req.mask);
  SliceGrid g;
  g.domain = req.domain;
  g.mask = req.mask;
  if (req.domain == SliceDomain::spectral) {
    g.row_name = "omega_s_rad_per_fs";
    g.col_name = "omega_i_rad_per_fs";
  } else {
    g.row_name = "q_s_x_rad_per_um";
    g.col_name = "q_i_x_rad_per_um";
  }
  int n = req.points;
  double h = 2.0 * hr / (n - 1);
  g.row_values.resize(n);
  g.col_values.resize(n);
  for (int k = 0; k < n; ++k) {
    g.row_values[k] = -hr + h * k;
    g.col_values[k] = g.row_values[k];
  }
  g.values.resize(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      Eigen::Vector2d v(g.row_values[r], g.col_values[c]);
      g.values(r, c) = std::exp(2.0 * v.dot(b * v));
    }
  double peak = g.values.maxCoeff();
  g.values /= peak;
  double mass = 0.0;
  for (int r = 0; r < n; ++r) {
    double wr = (r == 0 || r == n - 1) ? 0.5 * h : h;
    for (int c = 0; c < n; ++c) {
      double wc = (c == 0 || c == n - 1) ? 0.5 * h : h;
      mass += wr * wc * g.values(r, c);
    }
  }
  g.trapezoid_mass = mass;
  g.tilt = tilt_of(b);
  return g;
}

}  // namespace biphoton
