#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <biphoton/errors.hpp>
#include <biphoton/io.hpp>
#include <biphoton/observables.hpp>
#include <biphoton/sweep.hpp>
#include <biphoton/units.hpp>
#include <biphoton/validate.hpp>

namespace {

using biphoton::Json;

// Documents land next to the caller unless BIPHOTON_OUT redirects relative
// output paths to a collection directory.
std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  const char* env = std::getenv("BIPHOTON_OUT");
  if (env && *env && p.is_relative()) p = std::filesystem::path(env) / p;
  return p;
}

void emit(const std::string& content, const std::string& out) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::path p = resolve_out(out);
  std::error_code ec;
  if (!p.parent_path().empty())
    std::filesystem::create_directories(p.parent_path(), ec);
  biphoton::write_text_file(p.string(), content);
  std::cerr << "wrote " << p.string() << "\n";
}

biphoton::SourceConfig load_config(const std::string& path) {
  if (path.empty()) return biphoton::SourceConfig{};
  return biphoton::config_from_document(biphoton::read_json_file(path));
}

biphoton::FilterMask mask_from_string(const std::string& s) {
  if (s == "none") return biphoton::FilterMask::None;
  if (s == "signal") return biphoton::FilterMask::SignalOnly;
  if (s == "idler") return biphoton::FilterMask::IdlerOnly;
  if (s == "both") return biphoton::FilterMask::Both;
  throw biphoton::InvalidConfig("unknown mask '" + s +
                                "' (use none|signal|idler|both)");
}

Json resolved_to_json(const biphoton::ResolvedConfig& rc) {
  auto omega_or_null = [](double v) {
    return std::isfinite(v) ? Json(v) : Json();
  };
  return Json{
      {"theta_deg", biphoton::units::rad_to_deg(rc.crystal.theta_rad)},
      {"rho_p_rad", rc.dispersion.rho_p_rad},
      {"rho_s_rad", rc.dispersion.rho_s_rad},
      {"d_s_fs_per_um", rc.dispersion.d_s_fs_per_um},
      {"d_i_fs_per_um", rc.dispersion.d_i_fs_per_um},
      {"signal_wavelength_um", rc.signal_wavelength_um},
      {"idler_wavelength_um", rc.idler_wavelength_um},
      {"sigma_p_omega_rad_per_fs", rc.sigma_p_omega},
      {"sigma_s_omega_rad_per_fs", omega_or_null(rc.sigma_s_omega)},
      {"sigma_i_omega_rad_per_fs", omega_or_null(rc.sigma_i_omega)},
  };
}

int run(int argc, char** argv) {
  CLI::App app{
      "Gaussian model of a filtered collinear down-conversion pair source: "
      "heralded purities, heralding efficiencies, joint slices, parameter "
      "sweeps."};
  app.require_subcommand(1);

  auto* pm = app.add_subcommand(
      "pm-angle", "Solve the collinear degenerate phase-matching angle");
  double pump_nm = 405.0;
  pm->add_option("--pump-nm", pump_nm, "Pump wavelength in nm")
      ->check(CLI::PositiveNumber);

  std::string cfg_path, out_path, format = "csv";
  auto* coeffs = app.add_subcommand(
      "coeffs", "Print resolved coefficients and the quadratic form");
  coeffs->add_option("--config", cfg_path, "Configuration JSON file");
  std::string coeffs_mask = "both";
  coeffs->add_option("--mask", coeffs_mask, "none|signal|idler|both");

  auto* report = app.add_subcommand(
      "report", "Purities, heralding efficiencies and trade-off factors");
  report->add_option("--config", cfg_path, "Configuration JSON file");
  report->add_option("--out", out_path, "Output file (default: stdout)");
  report->add_option("--format", format, "csv|json");

  auto* slice = app.add_subcommand(
      "slice", "Two-coordinate intensity slices of the mode function");
  std::string slice_spec, slice_domain = "spectral", slice_mask = "both";
  int slice_points = 101;
  double slice_range = 0.0;
  slice->add_option("--config", cfg_path, "Configuration JSON file");
  slice->add_option("--spec", slice_spec,
                    "Slice-set JSON document (writes one file per slice)");
  slice->add_option("--domain", slice_domain, "spectral|spatial");
  slice->add_option("--mask", slice_mask, "none|signal|idler|both");
  slice->add_option("--points", slice_points, "Odd grid size per axis");
  slice->add_option("--range", slice_range,
                    "Half range (default: auto from the slice widths)");
  slice->add_option("--out", out_path,
                    "Output file, or directory in --spec mode");
  slice->add_option("--format", format, "csv|json");

  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate observables over a one- or two-axis parameter grid");
  std::string sweep_spec;
  sweep->add_option("--spec", sweep_spec, "Sweep JSON document")->required();
  sweep->add_option("--out", out_path, "Output file (default: stdout)");
  sweep->add_option("--format", format, "csv|json");

  auto* validate = app.add_subcommand(
      "validate", "Cross-check closed forms against brute-force quadrature");
  bool deep = false;
  validate->add_flag("--deep", deep,
                     "Also run the direct five-dimensional kernel quadrature");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (format != "csv" && format != "json")
    throw biphoton::InvalidConfig("unknown format '" + format +
                                  "' (use csv or json)");

  if (pm->parsed()) {
    auto bbo = biphoton::SellmeierSet::bbo();
    double lp = pump_nm * 1e-3;
    double theta = biphoton::phase_matching_angle(bbo, lp);
    double residual = biphoton::phase_mismatch(bbo, lp, theta);
    std::cout << "theta_deg = "
              << biphoton::format_double(biphoton::units::rad_to_deg(theta))
              << "\n"
              << "residual_per_um = " << biphoton::format_double(residual)
              << "\n";
    return 0;
  }

  if (coeffs->parsed()) {
    biphoton::ResolvedConfig rc = biphoton::resolve(load_config(cfg_path));
    biphoton::FilterMask mask = mask_from_string(coeffs_mask);
    biphoton::QuadraticForm q = biphoton::assemble_quadratic_form(rc, mask);
    Json j;
    j["schema"] = "biphoton-coeffs/1";
    j["resolved"] = resolved_to_json(rc);
    j["mask"] = biphoton::mask_name(mask);
    Json rows = Json::array();
    for (int r = 0; r < 6; ++r) {
      Json row = Json::array();
      for (int c = 0; c < 6; ++c) row.push_back(q.a(r, c));
      rows.push_back(std::move(row));
    }
    j["quadratic_form"] = std::move(rows);
    std::cout << biphoton::dump_json(j);
    return 0;
  }

  if (report->parsed()) {
    biphoton::ResolvedConfig rc = biphoton::resolve(load_config(cfg_path));
    biphoton::ObservablesReport r = biphoton::make_report(rc);
    emit(format == "json"
             ? biphoton::dump_json(biphoton::report_to_json(r, rc))
             : biphoton::report_to_csv(r),
         out_path);
    return 0;
  }

  if (slice->parsed()) {
    if (!slice_spec.empty()) {
      if (out_path.empty())
        throw biphoton::InvalidConfig(
            "slice --spec needs --out <directory>");
      Json doc = biphoton::read_json_file(slice_spec);
      biphoton::SliceSetSpec set = biphoton::parse_slice_set_spec(doc);
      biphoton::ResolvedConfig rc =
          biphoton::resolve(biphoton::config_from_json(set.base));
      std::filesystem::path dir = resolve_out(out_path);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      for (const auto& entry : set.slices) {
        biphoton::SliceRequest req;
        req.domain = entry.domain;
        req.mask = entry.mask;
        req.points = entry.points;
        req.half_range = entry.half_range;
        biphoton::SliceGrid g = biphoton::joint_intensity_slice(rc, req);
        std::filesystem::path p =
            dir / (entry.name + (format == "json" ? ".json" : ".csv"));
        biphoton::write_text_file(
            p.string(), format == "json"
                            ? biphoton::dump_json(biphoton::slice_to_json(g))
                            : biphoton::slice_to_csv(g));
        std::cerr << "wrote " << p.string() << "\n";
      }
      return 0;
    }
    biphoton::ResolvedConfig rc = biphoton::resolve(load_config(cfg_path));
    biphoton::SliceRequest req;
    req.domain = slice_domain == "spatial"
                     ? biphoton::SliceDomain::spatial_x
                     : biphoton::SliceDomain::spectral;
    if (slice_domain != "spatial" && slice_domain != "spectral")
      throw biphoton::InvalidConfig("unknown domain '" + slice_domain +
                                    "' (use spectral or spatial)");
    req.mask = mask_from_string(slice_mask);
    req.points = slice_points;
    if (slice_range > 0.0) req.half_range = slice_range;
    biphoton::SliceGrid g = biphoton::joint_intensity_slice(rc, req);
    emit(format == "json" ? biphoton::dump_json(biphoton::slice_to_json(g))
                          : biphoton::slice_to_csv(g),
         out_path);
    return 0;
  }

  if (sweep->parsed()) {
    Json doc = biphoton::read_json_file(sweep_spec);
    biphoton::SweepSpec spec = biphoton::parse_sweep_spec(doc);
    biphoton::SweepResult res = biphoton::run_sweep(spec);
    emit(format == "json" ? biphoton::dump_json(biphoton::sweep_to_json(res))
                          : biphoton::sweep_to_csv(res),
         out_path);
    return 0;
  }

  if (validate->parsed()) {
    biphoton::ValidationReport rep = biphoton::run_validation(deep);
    int failed = 0;
    for (const auto& c : rep.checks) {
      if (!c.ok) ++failed;
      std::cout << (c.ok ? "ok   " : "FAIL ") << c.name << "  " << c.detail
                << "\n";
    }
    std::cout << rep.checks.size() << " checks, " << failed << " failed\n";
    return failed == 0 ? 0 : 3;
  }

  return 0;
}

int exit_code_for(const biphoton::Error& e) {
  const std::string kind = e.kind();
  if (kind == "UnnormalizableConfiguration" || kind == "NotPositiveDefinite" ||
      kind == "DiscardedBlockNotDefinite" || kind == "NotTraceClass" ||
      kind == "GridTooCoarse")
    return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const biphoton::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
