// relindex: runs the named experiments and writes report.csv / report.json /
// config.echo. Exit status 0 all rows pass, 1 a tolerance failed or a run
// aborted, 2 usage or config error.

#include "relindex.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "both";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::vector<std::string> sets;
  bool dry_run = false;
  bool quiet = false;
  // Subcommand flags, keyed by dotted config path.
  std::map<std::string, std::string> flags;
};

std::string take(char* s) {
  std::string out = s ? s : "";
  relindex_string_free(s);
  return out;
}

Json default_config(const std::string& name) {
  char* text = nullptr;
  if (relindex_experiment_default_config(name.c_str(), &text) != RELINDEX_OK)
    throw std::runtime_error(relindex_last_error());
  return Json::parse(take(text));
}

bool has_path(const Json& tree, const std::string& dotted) {
  const Json* node = &tree;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return false;
    node = &(*node)[part];
  }
  return true;
}

std::string first_path(const Json& tree, std::initializer_list<const char*> candidates) {
  for (const char* c : candidates)
    if (has_path(tree, c)) return c;
  return {};
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int run(const std::string& name, const Options& opt) {
  const Json defaults = default_config(name);
  std::vector<std::string> assignments;
  if (opt.seed) {
    const std::string key = first_path(defaults, {"seed", "monte_carlo.quadrature.seed"});
    if (key.empty()) throw UsageError(name + " has no random seed");
    assignments.push_back(key + "=" + std::to_string(*opt.seed));
  }
  if (opt.tol) {
    if (!has_path(defaults, "tol"))
      throw UsageError(name + " has no single tolerance; use --set <key>=<value>");
    std::ostringstream v;
    v.precision(17);
    v << *opt.tol;
    assignments.push_back("tol=" + v.str());
  }
  for (const auto& [key, value] : opt.flags) assignments.push_back(key + "=" + value);
  assignments.insert(assignments.end(), opt.sets.begin(), opt.sets.end());

  std::optional<std::string> file_text;
  if (!opt.config_path.empty()) {
    std::ifstream f(opt.config_path);
    if (!f) throw UsageError("cannot read config " + opt.config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    file_text = ss.str();
  }

  std::vector<const char*> argv;
  for (const auto& a : assignments) argv.push_back(a.c_str());
  char* resolved = nullptr;
  relindex_status st = relindex_config_resolve(name.c_str(), file_text ? file_text->c_str() : nullptr,
                                               argv.data(), static_cast<int>(argv.size()), &resolved);
  if (st != RELINDEX_OK) throw UsageError(relindex_last_error());
  const std::string config = take(resolved);
  if (opt.dry_run) {
    std::cout << config << "\n";
    return kExitPass;
  }

  int all_pass = 0;
  char* report = nullptr;
  st = relindex_experiment_run(name.c_str(), config.c_str(), opt.out_dir.c_str(),
                               opt.format.c_str(), &all_pass, &report);
  if (st == RELINDEX_CONFIG || st == RELINDEX_IO || st == RELINDEX_INVALID_ARGUMENT)
    throw UsageError(relindex_last_error());
  if (st != RELINDEX_OK) {
    std::cerr << name << ": " << relindex_status_name(st) << ": " << relindex_last_error() << "\n";
    return kExitFail;
  }
  const Json rep = Json::parse(take(report));
  if (!opt.quiet) {
    for (const auto& row : rep["rows"]) {
      std::printf("%-4s %-34s value=% .10g oracle=% .10g residual=%.3g tol=%.3g\n",
                  row["pass"].get<bool>() ? "ok" : "FAIL", row["id"].get<std::string>().c_str(),
                  row["value"].get<double>(), row["oracle"].get<double>(),
                  row["residual"].get<double>(), row["tolerance"].get<double>());
    }
    std::printf("%s: %s (%.2f s)\n", name.c_str(), all_pass ? "all pass" : "FAILED",
                rep["wall_time_s"].get<double>());
  }
  return all_pass ? kExitPass : kExitFail;
}

struct FlagSpec {
  const char* flag;
  const char* path;
  const char* help;
  bool list = false;  // wrap the single value in an array
};

const std::map<std::string, std::vector<FlagSpec>>& subcommand_flags() {
  static const std::map<std::string, std::vector<FlagSpec>> f{
      {"proj-suite", {{"--trials", "trials", "number of random trials"},
                      {"--max-dim", "max_dim", "largest matrix dimension"}}},
      {"connes-area", {{"--trials", "trials", "number of random triangles"},
                       {"--box", "box", "vertices drawn from [-box, box]^2"}}},
      {"landau-index", {{"--m", "levels", "single Landau level", true},
                        {"--n", "trace_power", "odd trace power 2n+1"},
                        {"--radius", "grid.radius", "truncation radius"},
                        {"--samples", "monte_carlo.quadrature.mc_samples", "Monte Carlo samples"}}},
      {"hall-transport", {{"--m", "levels", "single Landau level", true},
                          {"--kubo-L", "kubo_L", "Kubo box half side"}}},
      {"switch-check", {{"--scale", "scale", "switch scale"},
                        {"--switch", "switch", "tanh or erf"}}},
      {"lattice-index", {{"--size", "sizes", "single grid size", true},
                         {"--fermi", "fermi", "Fermi energy"}}},
      {"wedge", {{"--size", "size", "grid size"},
                 {"--angle", "angle_deg", "wedge angle in degrees"},
                 {"--fermi", "fermi", "Fermi energy"}}},
      {"disorder", {{"--size", "size", "grid size"},
                    {"--amplitude-factor", "amplitude_factor", "disorder amplitude / bulk gap width"},
                    {"--fermi", "fermi", "Fermi energy"}}},
      {"decay-fit", {{"--size", "size", "grid size"}, {"--fermi", "fermi", "Fermi energy"}}},
  };
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative index experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(relindex_version()));

  Options opt;
  std::map<std::string, std::map<std::string, std::string>> raw_flags;
  std::string selected;

  app.add_subcommand("list", "list experiment names")->callback([&] { selected = "list"; });
  std::string defaults_name;
  app.add_subcommand("defaults", "print the default config of an experiment")
      ->callback([&] { selected = "defaults"; })
      ->add_option("name", defaults_name, "experiment")
      ->required();

  for (int i = 0; i < relindex_experiment_count(); ++i) {
    const std::string name = relindex_experiment_name(i);
    CLI::App* sub = app.add_subcommand(name, "run " + name);
    sub->add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--format", opt.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--tol", opt.tol, "headline tolerance");
    sub->add_option("--set", opt.sets, "override key.path=value (repeatable)");
    sub->add_flag("--dry-run", opt.dry_run, "print the resolved config and stop");
    sub->add_flag("-q,--quiet", opt.quiet, "no per-row output");
    const auto it = subcommand_flags().find(name);
    if (it != subcommand_flags().end())
      for (const FlagSpec& f : it->second) {
        auto* slot = &raw_flags[name][f.path];
        const bool list = f.list;
        sub->add_option_function<std::string>(
            f.flag, [slot, list](const std::string& v) { *slot = list ? "[" + v + "]" : v; },
            f.help);
      }
    sub->callback([&, name] { selected = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (selected == "list") {
      for (int i = 0; i < relindex_experiment_count(); ++i)
        std::cout << relindex_experiment_name(i) << "\n";
      return kExitPass;
    }
    if (selected == "defaults") {
      std::cout << default_config(defaults_name).dump(2) << "\n";
      return kExitPass;
    }
    for (const auto& [path, value] : raw_flags[selected])
      if (!value.empty()) opt.flags[path] = value;
    return run(selected, opt);
  } catch (const UsageError& e) {
    std::cerr << "relindex: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "relindex: " << e.what() << "\n";
    return kExitUsage;
  }
}
