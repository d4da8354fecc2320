#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <biphoton/errors.hpp>
#include <biphoton/gaussian.hpp>
#include <biphoton/model.hpp>
#include <biphoton/units.hpp>

using namespace biphoton;
using doctest::Approx;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

Eigen::Matrix<double, 6, 6> minus_four_a(const SourceConfig& cfg,
                                         FilterMask mask) {
  return -4.0 * assemble_quadratic_form(cfg, mask).a;
}
}  // namespace

TEST_CASE("bandwidth conversion to angular frequency width") {
  // |d omega / d lambda| = 2 pi c / lambda^2, sigma in nm -> um
  double expected = 2.0 * units::kPi * units::kSpeedOfLightUmPerFs /
                    (0.405 * 0.405) * 1e-3;
  CHECK(units::bandwidth_to_angular(1.0, 0.405) ==
        Approx(expected).epsilon(1e-15));
  CHECK(units::bandwidth_to_angular(kInf, 0.405) == kInf);
  CHECK(units::deg_to_rad(180.0) == Approx(units::kPi).epsilon(1e-15));
  CHECK(units::rad_to_deg(units::kPi / 4.0) == Approx(45.0).epsilon(1e-15));
}

TEST_CASE("resolving the default configuration") {
  ResolvedConfig r = resolve(SourceConfig{});
  CHECK(r.crystal.theta_rad == Approx(0.722935145985596).epsilon(1e-12));
  CHECK(r.signal_wavelength_um == 0.81);
  CHECK(r.idler_wavelength_um == 0.81);
  CHECK(r.sigma_p_omega == Approx(0.0114839296894306).epsilon(1e-12));
  CHECK(r.sigma_s_omega == Approx(0.0143549121117882).epsilon(1e-12));
  CHECK(r.sigma_i_omega == r.sigma_s_omega);
  CHECK(r.dispersion.d_s_fs_per_um ==
        Approx(-0.268477228335126).epsilon(1e-12));
  CHECK(r.dispersion.d_i_fs_per_um ==
        Approx(-0.0758361416817737).epsilon(1e-12));
}

TEST_CASE("resolve rejects inconsistent configurations") {
  auto broken = [](auto&& mutate) {
    SourceConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(
      resolve(broken([](SourceConfig& c) { c.pump.wavelength_um = -1; })),
      InvalidConfig);
  CHECK_THROWS_AS(
      resolve(broken([](SourceConfig& c) { c.pump.waist_um = -1; })),
      InvalidConfig);
  CHECK_THROWS_AS(
      resolve(broken([](SourceConfig& c) { c.pump.bandwidth_nm = 0; })),
      InvalidConfig);
  CHECK_THROWS_AS(
      resolve(broken([](SourceConfig& c) { c.crystal.length_um = 0; })),
      InvalidConfig);
  CHECK_THROWS_AS(
      resolve(broken([](SourceConfig& c) { c.crystal.sinc_fit_gamma = 0; })),
      InvalidConfig);
  CHECK_THROWS_AS(
      resolve(broken([](SourceConfig& c) { c.filters.sigma_s_nm = 0; })),
      InvalidConfig);
  CHECK_THROWS_AS(
      resolve(broken([](SourceConfig& c) { c.filters.w_i_um = -2; })),
      InvalidConfig);
  CHECK_THROWS_AS(resolve(broken([](SourceConfig& c) { c.theta_rad = 2.0; })),
                  InvalidConfig);
  // central wavelengths must satisfy energy conservation
  CHECK_THROWS_AS(resolve(broken([](SourceConfig& c) {
                    c.signal_wavelength_um = 0.7;
                    c.idler_wavelength_um = 0.9;
                  })),
                  InvalidConfig);
}

TEST_CASE("nondegenerate central wavelengths resolve consistently") {
  SourceConfig c;
  double delta = 0.04;
  c.signal_wavelength_um = 2.0 * 0.405 / (1.0 - delta);
  c.idler_wavelength_um = 2.0 * 0.405 / (1.0 + delta);
  ResolvedConfig r = resolve(c);
  CHECK(1.0 / r.signal_wavelength_um + 1.0 / r.idler_wavelength_um ==
        Approx(1.0 / 0.405).epsilon(1e-14));
  CHECK(r.sigma_s_omega ==
        Approx(units::bandwidth_to_angular(5.0, *c.signal_wavelength_um))
            .epsilon(1e-15));
  CHECK(r.sigma_i_omega ==
        Approx(units::bandwidth_to_angular(5.0, *c.idler_wavelength_um))
            .epsilon(1e-15));
}

TEST_CASE("explicit angle and mismatch coefficients are honored") {
  SourceConfig c;
  c.theta_rad = 0.8;
  DispersionData d{0.01, 0.02, -0.1, -0.2};
  c.dispersion = d;
  ResolvedConfig r = resolve(c);
  CHECK(r.crystal.theta_rad == 0.8);
  CHECK(r.dispersion.rho_p_rad == 0.01);
  CHECK(r.dispersion.d_i_fs_per_um == -0.2);
}

TEST_CASE("assembled form: pinned entries for the default source") {
  Eigen::Matrix<double, 6, 6> m = minus_four_a(SourceConfig{},
                                               FilterMask::Both);
  // exact structural entries
  CHECK(m(1, 1) == 200.0);  // w_p^2 + w_s^2
  CHECK(m(1, 3) == 100.0);  // w_p^2
  CHECK(m(3, 3) == 200.0);
  CHECK(m(0, 1) == 0.0);  // x and y never couple
  CHECK(m(1, 4) == 0.0);  // y and frequency never couple
  // pinned numeric entries
  CHECK(m(0, 0) == Approx(203.9714).epsilon(5e-6));
  CHECK(m(0, 2) == Approx(166.7924).epsilon(5e-6));
  CHECK(m(0, 4) == Approx(-235.0483).epsilon(5e-6));
  CHECK(m(0, 5) == Approx(66.39354).epsilon(5e-6));
  CHECK(m(2, 2) == Approx(1323.341).epsilon(5e-6));
  CHECK(m(2, 4) == Approx(-3953.138).epsilon(5e-6));
  CHECK(m(4, 4) == Approx(26346.93).epsilon(5e-6));
  CHECK(m(4, 5) == Approx(3653.081).epsilon(5e-6));
  CHECK(m(5, 5) == Approx(13545.45).epsilon(5e-6));
  // symmetric up to rounding of the scaled outer products
  CHECK((m - m.transpose()).norm() <= 1e-12 * m.norm());
}

TEST_CASE("the form is negative semidefinite for every mask") {
  for (FilterMask mask : {FilterMask::None, FilterMask::SignalOnly,
                          FilterMask::IdlerOnly, FilterMask::Both}) {
    QuadraticForm q = assemble_quadratic_form(SourceConfig{}, mask);
    CHECK(is_negative_semidefinite(q.a));
  }
}

TEST_CASE("mask semantics: excluding an arm removes all its terms") {
  SourceConfig cfg;
  Eigen::Matrix<double, 6, 6> none = minus_four_a(cfg, FilterMask::None);
  Eigen::Matrix<double, 6, 6> so = minus_four_a(cfg, FilterMask::SignalOnly);
  Eigen::Matrix<double, 6, 6> io = minus_four_a(cfg, FilterMask::IdlerOnly);
  Eigen::Matrix<double, 6, 6> both = minus_four_a(cfg, FilterMask::Both);

  // pump-only entries survive unmasked: w_p^2 on the y block
  CHECK(none(1, 1) == 100.0);
  CHECK(none(3, 3) == 100.0);
  // untouched entries are bit-identical across masks
  CHECK(so(2, 2) == none(2, 2));  // idler x: no idler collection term
  CHECK(so(3, 3) == none(3, 3));
  CHECK(so(5, 5) == none(5, 5));  // idler frequency: no idler filter term
  CHECK(io(0, 0) == none(0, 0));
  CHECK(io(4, 4) == none(4, 4));
  CHECK(both(2, 2) == io(2, 2));
  CHECK(both(4, 4) == so(4, 4));
  // included arms add their collection and filter weights
  CHECK(so(1, 1) == 200.0);
  CHECK(io(3, 3) == 200.0);
  CHECK(so(4, 4) - none(4, 4) ==
        Approx(std::pow(resolve(cfg).sigma_s_omega, -2)).epsilon(1e-12));
  CHECK(mask_includes_signal(FilterMask::SignalOnly));
  CHECK_FALSE(mask_includes_idler(FilterMask::SignalOnly));
  CHECK(std::string(mask_name(FilterMask::IdlerOnly)) == "idler");
  CHECK(std::string(mask_name(FilterMask::None)) == "none");
}

TEST_CASE("filter sentinels: infinite bandwidth and zero collecting mode") {
  SourceConfig cfg;
  cfg.filters.sigma_s_nm = kInf;
  cfg.filters.w_s_um = 0.0;
  Eigen::Matrix<double, 6, 6> m = minus_four_a(cfg, FilterMask::Both);
  Eigen::Matrix<double, 6, 6> none = minus_four_a(cfg, FilterMask::None);
  // the signal arm contributes nothing anymore
  CHECK(m(0, 0) == none(0, 0));
  CHECK(m(1, 1) == 100.0);
  CHECK(m(4, 4) == none(4, 4));
  // idler terms still present
  CHECK(m(3, 3) == 200.0);
  CHECK(m(5, 5) > none(5, 5));
}

TEST_CASE("coordinate bookkeeping") {
  CHECK(std::string(coord_name(0)) == "q_s_x");
  CHECK(std::string(coord_name(3)) == "q_i_y");
  CHECK(std::string(coord_name(4)) == "omega_s");
  CHECK(std::string(coord_name(5)) == "omega_i");

  QuadraticForm q = assemble_quadratic_form(SourceConfig{}, FilterMask::Both);
  Eigen::MatrixXd spectral = q.block({4, 5});
  CHECK(spectral.rows() == 2);
  CHECK(spectral(0, 0) == q.a(4, 4));
  CHECK(spectral(0, 1) == q.a(4, 5));
  Eigen::MatrixXd crossed = q.block({0, 2});
  CHECK(crossed(1, 0) == q.a(2, 0));
  Eigen::MatrixXd one = q.block({5});
  CHECK(one.size() == 1);
  CHECK(one(0, 0) == q.a(5, 5));
}

TEST_CASE("mode function value") {
  QuadraticForm q = assemble_quadratic_form(SourceConfig{}, FilterMask::Both);
  Eigen::Matrix<double, 6, 1> x = Eigen::Matrix<double, 6, 1>::Zero();
  CHECK(mode_function_value(q, x) == 1.0);
  x << 0.01, 0.02, -0.01, 0.0, 0.001, -0.002;
  double expected = std::exp(2.0 * (x.transpose() * q.a * x)(0));
  CHECK(mode_function_value(q, x) == Approx(expected).epsilon(1e-14));
  CHECK(mode_function_value(q, x) <= 1.0);
  CHECK(mode_function_value(q, x) > 0.0);
}
