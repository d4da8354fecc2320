#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <biphoton/model.hpp>
#include <biphoton/observables.hpp>

namespace biphoton {

// One sweep axis: a JSON-pointer path into the configuration document plus a
// start/stop/count range. Every pointer in `also` receives the same value,
// which is how linked parameters (equal collection waists, say) are swept.
struct AxisSpec {
  std::string path;
  std::vector<std::string> also;
  double start = 0.0;
  double stop = 0.0;
  int count = 2;
  enum class Scale { linear, log };
  Scale scale = Scale::linear;
};

struct SweepSpec {
  nlohmann::json base;  // configuration document the axes write into
  std::vector<AxisSpec> axes;  // one or two
  std::vector<std::string> observables;
  std::string note;
  std::string title;
};

struct SliceSetEntry {
  std::string name;
  SliceDomain domain = SliceDomain::spectral;
  FilterMask mask = FilterMask::Both;
  int points = 101;
  std::optional<double> half_range;
};

struct SliceSetSpec {
  nlohmann::json base;
  std::vector<SliceSetEntry> slices;
  std::string note;
  std::string title;
};

SweepSpec parse_sweep_spec(const nlohmann::json& doc);
SliceSetSpec parse_slice_set_spec(const nlohmann::json& doc);

// One evaluated grid point. `values` lines up with the sweep's observable
// names and is empty when the point failed; `error` then carries the error
// kind. Failures are data, not aborts: a sweep that walks into an
// unnormalizable corner keeps going.
struct ReportRow {
  std::vector<double> axis_values;
  std::vector<double> values;
  std::string error;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<std::string> observable_names;
  std::vector<ReportRow> rows;  // row-major over the axis grid
};

// Grid points are evaluated independently into preassigned slots, so the
// result is bitwise identical whatever the thread count.
SweepResult run_sweep(const SweepSpec& spec, bool parallel = true);

const std::vector<std::string>& default_observables();
const std::vector<std::string>& known_observables();
double evaluate_observable(const ResolvedConfig& cfg, const std::string& name);

}  // namespace biphoton
