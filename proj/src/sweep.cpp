#include <biphoton/sweep.hpp>

#include <cctype>
#include <cmath>

#include <biphoton/errors.hpp>
#include <biphoton/io.hpp>

namespace biphoton {

const std::vector<std::string>& default_observables() {
  static const std::vector<std::string> names = {
      "purity_q_s", "purity_q_i", "purity_omega_s", "purity_omega_i",
      "eta_s",      "eta_i",      "pef_signal",     "pef_idler"};
  return names;
}

const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = default_observables();
    n.insert(n.end(), {"eta_s_spectral", "eta_i_spectral", "eta_s_full",
                       "eta_i_full"});
    return n;
  }();
  return names;
}

double evaluate_observable(const ResolvedConfig& cfg, const std::string& name) {
  if (name == "purity_q_s") return subsystem_purity(cfg, {0, 1});
  if (name == "purity_q_i") return subsystem_purity(cfg, {2, 3});
  if (name == "purity_omega_s") return subsystem_purity(cfg, {4});
  if (name == "purity_omega_i") return subsystem_purity(cfg, {5});
  if (name == "eta_s")
    return heralding_efficiency(cfg, Arm::signal, Domain::spatial);
  if (name == "eta_i")
    return heralding_efficiency(cfg, Arm::idler, Domain::spatial);
  if (name == "eta_s_spectral")
    return heralding_efficiency(cfg, Arm::signal, Domain::spectral);
  if (name == "eta_i_spectral")
    return heralding_efficiency(cfg, Arm::idler, Domain::spectral);
  if (name == "eta_s_full")
    return heralding_efficiency(cfg, Arm::signal, Domain::full);
  if (name == "eta_i_full")
    return heralding_efficiency(cfg, Arm::idler, Domain::full);
  if (name == "pef_signal")
    return purity_efficiency_factor(cfg, Arm::signal);
  if (name == "pef_idler") return purity_efficiency_factor(cfg, Arm::idler);
  throw SchemaError("/observables", "unknown observable '" + name + "'");
}

namespace {

bool known_observable(const std::string& name) {
  for (const auto& n : known_observables())
    if (n == name) return true;
  return false;
}

nlohmann::json::json_pointer pointer_of(const std::string& path,
                                        const std::string& where) {
  try {
    return nlohmann::json::json_pointer(path);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(where, std::string("invalid JSON pointer: ") + e.what());
  }
}

void apply_axis(nlohmann::json& doc, const AxisSpec& ax, double value) {
  doc[pointer_of(ax.path, ax.path)] = value;
  for (const auto& p : ax.also) doc[pointer_of(p, p)] = value;
}

std::vector<double> axis_grid(const AxisSpec& ax) {
  std::vector<double> v(ax.count);
  for (int k = 0; k < ax.count; ++k) {
    double t = static_cast<double>(k) / (ax.count - 1);
    v[k] = ax.scale == AxisSpec::Scale::log
               ? ax.start * std::pow(ax.stop / ax.start, t)
               : ax.start + (ax.stop - ax.start) * t;
  }
  v.front() = ax.start;
  v.back() = ax.stop;
  return v;
}

AxisSpec parse_axis(const nlohmann::json& v, const std::string& ptr) {
  if (!v.is_object()) throw SchemaError(ptr, "expected an object");
  for (auto it = v.begin(); it != v.end(); ++it) {
    const std::string& k = it.key();
    if (k != "path" && k != "also" && k != "start" && k != "stop" &&
        k != "count" && k != "scale")
      throw SchemaError(ptr + "/" + k, "unknown key");
  }
  AxisSpec ax;
  if (!v.contains("path") || !v["path"].is_string())
    throw SchemaError(ptr + "/path", "expected a JSON-pointer string");
  ax.path = v["path"].get<std::string>();
  if (ax.path.empty() || ax.path[0] != '/')
    throw SchemaError(ptr + "/path", "a JSON pointer starts with '/'");
  if (v.contains("also")) {
    if (!v["also"].is_array())
      throw SchemaError(ptr + "/also", "expected an array of JSON pointers");
    for (size_t i = 0; i < v["also"].size(); ++i) {
      const auto& p = v["also"][i];
      std::string where = ptr + "/also/" + std::to_string(i);
      if (!p.is_string()) throw SchemaError(where, "expected a string");
      std::string s = p.get<std::string>();
      if (s.empty() || s[0] != '/')
        throw SchemaError(where, "a JSON pointer starts with '/'");
      ax.also.push_back(s);
    }
  }
  for (const char* k : {"start", "stop", "count"})
    if (!v.contains(k))
      throw SchemaError(ptr, std::string("missing '") + k + "'");
  if (!v["start"].is_number())
    throw SchemaError(ptr + "/start", "expected a number");
  if (!v["stop"].is_number())
    throw SchemaError(ptr + "/stop", "expected a number");
  ax.start = v["start"].get<double>();
  ax.stop = v["stop"].get<double>();
  if (!std::isfinite(ax.start) || !std::isfinite(ax.stop))
    throw UnitError(ptr, "axis endpoints must be finite");
  if (!v["count"].is_number_integer() || v["count"].get<long>() < 2)
    throw SchemaError(ptr + "/count", "expected an integer >= 2");
  ax.count = v["count"].get<int>();
  if (v.contains("scale")) {
    if (!v["scale"].is_string())
      throw SchemaError(ptr + "/scale", "expected \"linear\" or \"log\"");
    std::string s = v["scale"].get<std::string>();
    if (s == "linear")
      ax.scale = AxisSpec::Scale::linear;
    else if (s == "log")
      ax.scale = AxisSpec::Scale::log;
    else
      throw SchemaError(ptr + "/scale", "expected \"linear\" or \"log\"");
  }
  if (ax.scale == AxisSpec::Scale::log && (ax.start <= 0 || ax.stop <= 0))
    throw UnitError(ptr, "log-scaled endpoints must be positive");
  return ax;
}

}  // namespace

SweepSpec parse_sweep_spec(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    if (k != "base" && k != "axes" && k != "observables" && k != "note" &&
        k != "title")
      throw SchemaError("/" + k, "unknown key");
  }
  SweepSpec spec;
  spec.base = doc.value("base", nlohmann::json::object());
  config_from_json(spec.base);  // base must stand on its own
  if (!doc.contains("axes") || !doc["axes"].is_array())
    throw SchemaError("/axes", "expected an array of axes");
  const auto& axes = doc["axes"];
  if (axes.empty() || axes.size() > 2)
    throw SchemaError("/axes", "expected one or two axes");
  for (size_t i = 0; i < axes.size(); ++i)
    spec.axes.push_back(parse_axis(axes[i], "/axes/" + std::to_string(i)));
  if (doc.contains("observables")) {
    if (!doc["observables"].is_array())
      throw SchemaError("/observables", "expected an array of names");
    for (size_t i = 0; i < doc["observables"].size(); ++i) {
      const auto& o = doc["observables"][i];
      if (!o.is_string() || !known_observable(o.get<std::string>()))
        throw SchemaError("/observables/" + std::to_string(i),
                          "unknown observable");
      spec.observables.push_back(o.get<std::string>());
    }
  }
  spec.note = doc.value("note", "");
  spec.title = doc.value("title", "");
  // Paths must address writable configuration fields: apply every axis start
  // and re-validate.
  nlohmann::json probe = spec.base;
  for (const auto& ax : spec.axes) apply_axis(probe, ax, ax.start);
  try {
    config_from_json(probe);
  } catch (const Error& e) {
    throw SchemaError("/axes", std::string("axis path rejected: ") + e.what());
  }
  return spec;
}

SliceSetSpec parse_slice_set_spec(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    if (k != "base" && k != "slices" && k != "note" && k != "title")
      throw SchemaError("/" + k, "unknown key");
  }
  SliceSetSpec spec;
  spec.base = doc.value("base", nlohmann::json::object());
  config_from_json(spec.base);
  if (!doc.contains("slices") || !doc["slices"].is_array() ||
      doc["slices"].empty())
    throw SchemaError("/slices", "expected a nonempty array");
  for (size_t i = 0; i < doc["slices"].size(); ++i) {
    const auto& s = doc["slices"][i];
    std::string ptr = "/slices/" + std::to_string(i);
    if (!s.is_object()) throw SchemaError(ptr, "expected an object");
    for (auto it = s.begin(); it != s.end(); ++it) {
      const std::string& k = it.key();
      if (k != "name" && k != "domain" && k != "mask" && k != "points" &&
          k != "half_range")
        throw SchemaError(ptr + "/" + k, "unknown key");
    }
    SliceSetEntry e;
    if (!s.contains("name") || !s["name"].is_string())
      throw SchemaError(ptr + "/name", "expected a string");
    e.name = s["name"].get<std::string>();
    if (e.name.empty()) throw SchemaError(ptr + "/name", "must not be empty");
    for (char c : e.name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
        throw SchemaError(ptr + "/name",
                          "use only letters, digits, '_' and '-'");
    for (const auto& prev : spec.slices)
      if (prev.name == e.name)
        throw SchemaError(ptr + "/name", "duplicate slice name");
    if (!s.contains("domain") || !s["domain"].is_string())
      throw SchemaError(ptr + "/domain", "expected \"spectral\" or \"spatial\"");
    std::string d = s["domain"].get<std::string>();
    if (d == "spectral")
      e.domain = SliceDomain::spectral;
    else if (d == "spatial")
      e.domain = SliceDomain::spatial_x;
    else
      throw SchemaError(ptr + "/domain",
                        "expected \"spectral\" or \"spatial\"");
    if (!s.contains("mask") || !s["mask"].is_string())
      throw SchemaError(ptr + "/mask",
                        "expected \"none\", \"signal\", \"idler\" or \"both\"");
    std::string m = s["mask"].get<std::string>();
    if (m == "none")
      e.mask = FilterMask::None;
    else if (m == "signal")
      e.mask = FilterMask::SignalOnly;
    else if (m == "idler")
      e.mask = FilterMask::IdlerOnly;
    else if (m == "both")
      e.mask = FilterMask::Both;
    else
      throw SchemaError(ptr + "/mask",
                        "expected \"none\", \"signal\", \"idler\" or \"both\"");
    if (s.contains("points")) {
      if (!s["points"].is_number_integer() || s["points"].get<long>() < 3 ||
          s["points"].get<long>() % 2 == 0)
        throw SchemaError(ptr + "/points", "expected an odd integer >= 3");
      e.points = s["points"].get<int>();
    }
    if (s.contains("half_range")) {
      if (!s["half_range"].is_number())
        throw SchemaError(ptr + "/half_range", "expected a number");
      double hr = s["half_range"].get<double>();
      if (!(hr > 0) || !std::isfinite(hr))
        throw UnitError(ptr + "/half_range", "must be positive and finite");
      e.half_range = hr;
    }
    spec.slices.push_back(std::move(e));
  }
  spec.note = doc.value("note", "");
  spec.title = doc.value("title", "");
  return spec;
}

SweepResult run_sweep(const SweepSpec& spec, bool parallel) {
  SweepResult res;
  std::vector<std::vector<double>> grids;
  for (const auto& ax : spec.axes) {
    res.axis_names.push_back(ax.path);
    grids.push_back(axis_grid(ax));
  }
  res.observable_names =
      spec.observables.empty() ? default_observables() : spec.observables;
  const long n0 = static_cast<long>(grids[0].size());
  const long n1 = grids.size() == 2 ? static_cast<long>(grids[1].size()) : 1;
  res.rows.resize(n0 * n1);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long flat = 0; flat < n0 * n1; ++flat) {
    const long i = flat / n1;
    const long j = flat % n1;
    ReportRow row;
    row.axis_values.push_back(grids[0][i]);
    if (grids.size() == 2) row.axis_values.push_back(grids[1][j]);
    try {
      nlohmann::json doc = spec.base;
      apply_axis(doc, spec.axes[0], grids[0][i]);
      if (spec.axes.size() == 2) apply_axis(doc, spec.axes[1], grids[1][j]);
      ResolvedConfig rc = resolve(config_from_json(doc));
      for (const auto& name : res.observable_names)
        row.values.push_back(evaluate_observable(rc, name));
    } catch (const Error& e) {
      row.values.clear();
      row.error = e.kind();
    } catch (const nlohmann::json::exception&) {
      row.values.clear();
      row.error = "SchemaError";
    }
    res.rows[flat] = std::move(row);
  }
  return res;
}

}  // namespace biphoton
