#pragma once

// Experiment runner: named studies over the numerical modules, driven by a
// JSON config tree and producing rows with oracle, residual and tolerance.

#include <json.hpp>

#include <string>
#include <vector>

namespace relindex::experiments {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Fixed CSV column order.
inline constexpr const char* kCsvHeader =
    "experiment,id,value,oracle,residual,tolerance,pass,wall_time_s,parameters";

struct Row {
  std::string experiment;
  std::string id;
  Json parameters = Json::object();
  double value = 0.0;
  double oracle = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_time_s = 0.0;
};

struct Report {
  std::string experiment;
  Json config;
  std::vector<Row> rows;
  bool all_pass = false;
  double wall_time_s = 0.0;
};

const std::vector<std::string>& names();
bool known(const std::string& name);

/// Every key an experiment reads, with its default.
Json default_config(const std::string& name);

/// Defaults patched by `overrides`. Objects merge key by key, anything else
/// replaces. Keys absent from the defaults are a config error.
Json resolve_config(const std::string& name, const Json& overrides);

/// Sets a dotted key path ("quadrature.outer_radius") from a flag string.
/// The value is read as JSON when it parses, otherwise as a string.
void set_path(Json& tree, const std::string& dotted, const std::string& value);

/// Runs with an already resolved config.
Report run(const std::string& name, const Json& config);

Json to_json(const Report& report);
std::string to_csv(const Report& report);

/// Writes report.json and/or report.csv ("json", "csv", "both") plus
/// config.echo into `dir`, creating it if needed.
void write_report(const Report& report, const std::string& dir, const std::string& format);

}  // namespace relindex::experiments
