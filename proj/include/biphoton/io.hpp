#pragma once

#include <string>

#include <json.hpp>

#include <biphoton/model.hpp>
#include <biphoton/observables.hpp>
#include <biphoton/sweep.hpp>

namespace biphoton {

using Json = nlohmann::json;

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Documents with an "axes" array are sweeps, with a "slices" array slice
// sets; anything else is read as a plain configuration.
enum class DocumentKind { config, sweep, slice_set };
DocumentKind classify_document(const Json& doc);

// Strict configuration reader: every key must be known, every magnitude in
// range. Missing sections fall back to the built-in defaults.
SourceConfig config_from_json(const Json& doc);

// Fills a document's "base" entry (or the document itself for a plain
// config) into a SourceConfig.
SourceConfig config_from_document(const Json& doc);

std::string report_to_csv(const ObservablesReport& r);
Json report_to_json(const ObservablesReport& r, const ResolvedConfig& cfg);

std::string slice_to_csv(const SliceGrid& g);
Json slice_to_json(const SliceGrid& g);

std::string sweep_to_csv(const SweepResult& r);
Json sweep_to_json(const SweepResult& r);

// Canonical serialization used for every JSON file this library writes.
std::string dump_json(const Json& j);

}  // namespace biphoton
