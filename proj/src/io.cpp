#include <biphoton/io.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <biphoton/errors.hpp>
#include <biphoton/units.hpp>

namespace biphoton {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON in '") + path +
                              "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

DocumentKind classify_document(const Json& doc) {
  if (doc.is_object()) {
    if (doc.contains("axes")) return DocumentKind::sweep;
    if (doc.contains("slices")) return DocumentKind::slice_set;
  }
  return DocumentKind::config;
}

namespace {

void expect_object(const Json& j, const std::string& ptr) {
  if (!j.is_object())
    throw SchemaError(ptr, "expected an object");
}

void check_keys(const Json& j, const std::string& ptr,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw SchemaError(ptr + "/" + it.key(), "unknown key");
  }
}

double number_at(const Json& v, const std::string& ptr) {
  if (!v.is_number()) throw SchemaError(ptr, "expected a number");
  return v.get<double>();
}

double positive_at(const Json& v, const std::string& ptr) {
  double x = number_at(v, ptr);
  if (!(x > 0.0) || !std::isfinite(x))
    throw UnitError(ptr, "must be a positive finite magnitude");
  return x;
}

double nonnegative_at(const Json& v, const std::string& ptr) {
  double x = number_at(v, ptr);
  if (!(x >= 0.0) || !std::isfinite(x))
    throw UnitError(ptr, "must be a nonnegative finite magnitude");
  return x;
}

double finite_at(const Json& v, const std::string& ptr) {
  double x = number_at(v, ptr);
  if (!std::isfinite(x)) throw UnitError(ptr, "must be finite");
  return x;
}

// Bandwidths accept a positive number, null, or "inf"; the last two mean the
// filter is absent.
double bandwidth_at(const Json& v, const std::string& ptr) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string()) {
    if (v.get<std::string>() == "inf")
      return std::numeric_limits<double>::infinity();
    throw SchemaError(ptr, "expected a number, null, or \"inf\"");
  }
  return positive_at(v, ptr);
}

SellmeierCoefficients coefficients_at(const Json& v, const std::string& ptr) {
  expect_object(v, ptr);
  check_keys(v, ptr, {"a", "b", "c", "d"});
  for (const char* k : {"a", "b", "c", "d"})
    if (!v.contains(k)) throw SchemaError(ptr, std::string("missing '") + k + "'");
  SellmeierCoefficients c;
  c.a = positive_at(v["a"], ptr + "/a");
  c.b = finite_at(v["b"], ptr + "/b");
  c.c = finite_at(v["c"], ptr + "/c");
  c.d = finite_at(v["d"], ptr + "/d");
  return c;
}

void parse_pump(const Json& v, SourceConfig& cfg) {
  expect_object(v, "/pump");
  check_keys(v, "/pump", {"wavelength_um", "waist_um", "bandwidth_nm"});
  if (v.contains("wavelength_um"))
    cfg.pump.wavelength_um =
        positive_at(v["wavelength_um"], "/pump/wavelength_um");
  if (v.contains("waist_um"))
    cfg.pump.waist_um = nonnegative_at(v["waist_um"], "/pump/waist_um");
  if (v.contains("bandwidth_nm"))
    cfg.pump.bandwidth_nm =
        positive_at(v["bandwidth_nm"], "/pump/bandwidth_nm");
}

void parse_crystal(const Json& v, SourceConfig& cfg) {
  expect_object(v, "/crystal");
  check_keys(v, "/crystal", {"length_mm", "theta_deg", "gamma", "sellmeier"});
  if (v.contains("length_mm"))
    cfg.crystal.length_um =
        1000.0 * positive_at(v["length_mm"], "/crystal/length_mm");
  if (v.contains("theta_deg") && !v["theta_deg"].is_null())
    cfg.theta_rad =
        units::deg_to_rad(finite_at(v["theta_deg"], "/crystal/theta_deg"));
  if (v.contains("gamma"))
    cfg.crystal.sinc_fit_gamma = positive_at(v["gamma"], "/crystal/gamma");
  if (v.contains("sellmeier")) {
    const Json& s = v["sellmeier"];
    const std::string ptr = "/crystal/sellmeier";
    expect_object(s, ptr);
    check_keys(s, ptr, {"ordinary", "extraordinary", "window_um"});
    for (const char* k : {"ordinary", "extraordinary", "window_um"})
      if (!s.contains(k))
        throw SchemaError(ptr, std::string("missing '") + k + "'");
    SellmeierSet set;
    set.ordinary = coefficients_at(s["ordinary"], ptr + "/ordinary");
    set.extraordinary =
        coefficients_at(s["extraordinary"], ptr + "/extraordinary");
    const Json& w = s["window_um"];
    if (!w.is_array() || w.size() != 2)
      throw SchemaError(ptr + "/window_um", "expected [lo, hi]");
    set.lambda_min_um = positive_at(w[0], ptr + "/window_um/0");
    set.lambda_max_um = positive_at(w[1], ptr + "/window_um/1");
    if (!(set.lambda_min_um < set.lambda_max_um))
      throw UnitError(ptr + "/window_um", "window must satisfy lo < hi");
    cfg.crystal.sellmeier = set;
  }
}

void parse_wavelengths(const Json& v, SourceConfig& cfg) {
  expect_object(v, "/wavelengths");
  check_keys(v, "/wavelengths", {"signal_um", "idler_um"});
  if (v.contains("signal_um"))
    cfg.signal_wavelength_um =
        positive_at(v["signal_um"], "/wavelengths/signal_um");
  if (v.contains("idler_um"))
    cfg.idler_wavelength_um =
        positive_at(v["idler_um"], "/wavelengths/idler_um");
}

void parse_filters(const Json& v, SourceConfig& cfg) {
  expect_object(v, "/filters");
  check_keys(v, "/filters", {"sigma_s_nm", "sigma_i_nm", "w_s_um", "w_i_um"});
  if (v.contains("sigma_s_nm"))
    cfg.filters.sigma_s_nm = bandwidth_at(v["sigma_s_nm"], "/filters/sigma_s_nm");
  if (v.contains("sigma_i_nm"))
    cfg.filters.sigma_i_nm = bandwidth_at(v["sigma_i_nm"], "/filters/sigma_i_nm");
  if (v.contains("w_s_um"))
    cfg.filters.w_s_um = nonnegative_at(v["w_s_um"], "/filters/w_s_um");
  if (v.contains("w_i_um"))
    cfg.filters.w_i_um = nonnegative_at(v["w_i_um"], "/filters/w_i_um");
}

void parse_dispersion(const Json& v, SourceConfig& cfg) {
  const std::string ptr = "/dispersion";
  expect_object(v, ptr);
  check_keys(v, ptr,
             {"rho_p_rad", "rho_s_rad", "d_s_fs_per_um", "d_i_fs_per_um"});
  for (const char* k :
       {"rho_p_rad", "rho_s_rad", "d_s_fs_per_um", "d_i_fs_per_um"})
    if (!v.contains(k))
      throw SchemaError(ptr, std::string("missing '") + k +
                                 "' (give all four coefficients or none)");
  DispersionData d;
  d.rho_p_rad = finite_at(v["rho_p_rad"], ptr + "/rho_p_rad");
  d.rho_s_rad = finite_at(v["rho_s_rad"], ptr + "/rho_s_rad");
  d.d_s_fs_per_um = finite_at(v["d_s_fs_per_um"], ptr + "/d_s_fs_per_um");
  d.d_i_fs_per_um = finite_at(v["d_i_fs_per_um"], ptr + "/d_i_fs_per_um");
  cfg.dispersion = d;
}

}  // namespace

SourceConfig config_from_json(const Json& doc) {
  expect_object(doc, "");
  check_keys(doc, "",
             {"pump", "crystal", "wavelengths", "filters", "dispersion",
              "note", "title"});
  for (const char* k : {"note", "title"})
    if (doc.contains(k) && !doc[k].is_string())
      throw SchemaError(std::string("/") + k, "expected a string");
  SourceConfig cfg;
  if (doc.contains("pump")) parse_pump(doc["pump"], cfg);
  if (doc.contains("crystal")) parse_crystal(doc["crystal"], cfg);
  if (doc.contains("wavelengths")) parse_wavelengths(doc["wavelengths"], cfg);
  if (doc.contains("filters")) parse_filters(doc["filters"], cfg);
  if (doc.contains("dispersion")) parse_dispersion(doc["dispersion"], cfg);
  return cfg;
}

SourceConfig config_from_document(const Json& doc) {
  if (classify_document(doc) == DocumentKind::config)
    return config_from_json(doc);
  if (doc.contains("base")) return config_from_json(doc["base"]);
  return config_from_json(Json::object());
}

std::string report_to_csv(const ObservablesReport& r) {
  const auto& names = default_observables();
  const double vals[] = {r.purity_q_s,     r.purity_q_i, r.purity_omega_s,
                         r.purity_omega_i, r.eta_s,      r.eta_i,
                         r.pef_signal,     r.pef_idler};
  std::string out = "observable,value\n";
  for (size_t i = 0; i < names.size(); ++i)
    out += names[i] + "," + format_double(vals[i]) + "\n";
  return out;
}

Json report_to_json(const ObservablesReport& r, const ResolvedConfig& cfg) {
  Json j;
  j["schema"] = "biphoton-report/1";
  j["resolved"] = {
      {"theta_deg", units::rad_to_deg(cfg.crystal.theta_rad)},
      {"rho_p_rad", cfg.dispersion.rho_p_rad},
      {"rho_s_rad", cfg.dispersion.rho_s_rad},
      {"d_s_fs_per_um", cfg.dispersion.d_s_fs_per_um},
      {"d_i_fs_per_um", cfg.dispersion.d_i_fs_per_um},
      {"signal_wavelength_um", cfg.signal_wavelength_um},
      {"idler_wavelength_um", cfg.idler_wavelength_um},
  };
  j["observables"] = {
      {"purity_q_s", r.purity_q_s},
      {"purity_q_i", r.purity_q_i},
      {"purity_omega_s", r.purity_omega_s},
      {"purity_omega_i", r.purity_omega_i},
      {"eta_s", r.eta_s},
      {"eta_i", r.eta_i},
      {"pef_signal", r.pef_signal},
      {"pef_idler", r.pef_idler},
  };
  return j;
}

std::string slice_to_csv(const SliceGrid& g) {
  std::string out = g.row_name + "\\" + g.col_name;
  for (double c : g.col_values) out += "," + format_double(c);
  out += "\n";
  for (size_t r = 0; r < g.row_values.size(); ++r) {
    out += format_double(g.row_values[r]);
    for (size_t c = 0; c < g.col_values.size(); ++c)
      out += "," + format_double(g.values(static_cast<int>(r),
                                          static_cast<int>(c)));
    out += "\n";
  }
  return out;
}

Json slice_to_json(const SliceGrid& g) {
  Json j;
  j["schema"] = "biphoton-slice/1";
  j["domain"] = slice_domain_name(g.domain);
  j["mask"] = mask_name(g.mask);
  j["row_name"] = g.row_name;
  j["col_name"] = g.col_name;
  j["row_values"] = g.row_values;
  j["col_values"] = g.col_values;
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < g.values.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < g.values.cols(); ++c)
      row.push_back(g.values(r, c));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  j["tilt"] = {
      {"principal_angle_deg", g.tilt.principal_angle_deg},
      {"deviation_from_antidiagonal_deg",
       g.tilt.deviation_from_antidiagonal_deg},
      {"alignment_deviation_deg", g.tilt.alignment_deviation_deg},
  };
  j["trapezoid_mass"] = g.trapezoid_mass;
  return j;
}

std::string sweep_to_csv(const SweepResult& r) {
  std::string out;
  for (const auto& a : r.axis_names) out += a + ",";
  for (const auto& o : r.observable_names) out += o + ",";
  out += "error\n";
  for (const auto& row : r.rows) {
    for (double a : row.axis_values) out += format_double(a) + ",";
    if (row.error.empty()) {
      for (double v : row.values) out += format_double(v) + ",";
      out += "\n";
    } else {
      for (size_t i = 0; i < r.observable_names.size(); ++i) out += ",";
      out += row.error + "\n";
    }
  }
  return out;
}

Json sweep_to_json(const SweepResult& r) {
  Json j;
  j["schema"] = "biphoton-sweep/1";
  j["axis_names"] = r.axis_names;
  j["observable_names"] = r.observable_names;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr;
    jr["axis"] = row.axis_values;
    Json vals = Json::object();
    for (size_t i = 0; i < row.values.size(); ++i)
      vals[r.observable_names[i]] = row.values[i];
    jr["values"] = std::move(vals);
    jr["error"] = row.error.empty() ? Json() : Json(row.error);
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace biphoton
