#pragma once

// maxdep command-line front end.
//
// Exit codes: 0 success, 1 data or runtime failure, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "maxdep/core.hpp"
#include "maxdep/estimators.hpp"
#include "maxdep/io.hpp"
#include "maxdep/models.hpp"
#include "maxdep/simulate.hpp"

namespace maxdep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Command { estimate, theory, simulate };
enum class OutputFormat { json, csv };

struct RunConfig {
  Command command = Command::estimate;
  std::string input_path;
  std::vector<std::string> locations;
  std::string subsets = "pairs,full";
  std::optional<std::size_t> bootstrap_replicates;
  double level = 0.95;
  std::uint64_t seed = 0;
  TiePolicy tie_policy = TiePolicy::midrank;
  bool drop_incomplete = false;
  OutputFormat output_format = OutputFormat::json;
  std::string output_path;
  double alpha = 0.0;
  std::size_t k = 0;
  std::size_t n = 0;
};

// ---------------------------------------------------------------------------
// Subset selection
// ---------------------------------------------------------------------------

/// Resolves a comma-separated list of `pairs`, `full`, `all` and explicit
/// label groups such as `A+B+C` into sorted, distinct subsets of size >= 2.
inline std::vector<SubsetIndex> resolve_subsets(const std::string& spec,
                                                const std::vector<std::string>& labels) {
  const std::size_t k = labels.size();
  std::set<SubsetIndex> chosen;
  std::stringstream ss(spec);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    item = std::string(detail::trim(item));
    if (item.empty()) continue;
    any = true;
    if (item == "pairs") {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) chosen.insert(SubsetIndex{a, b});
    } else if (item == "full") {
      chosen.insert(SubsetIndex::full(k));
    } else if (item == "all") {
      if (k > kMaxSubsetDimension)
        throw UsageError("--subsets all is limited to 20 locations; got " + std::to_string(k));
      for (auto& s : enumerate_subsets(k, 2)) chosen.insert(std::move(s));
    } else {
      std::vector<std::size_t> members;
      std::stringstream group(item);
      std::string label;
      while (std::getline(group, label, '+')) {
        const auto it = std::find(labels.begin(), labels.end(), std::string(detail::trim(label)));
        if (it == labels.end()) throw Error("unknown location '" + label + "' in subset '" + item + "'");
        members.push_back(static_cast<std::size_t>(it - labels.begin()));
      }
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      if (members.size() < 2) throw UsageError("subset '" + item + "' needs at least 2 locations");
      chosen.insert(SubsetIndex(std::move(members)));
    }
  }
  if (!any) throw UsageError("--subsets is empty");
  return {chosen.begin(), chosen.end()};
}

struct BootstrapSettings {
  std::size_t replicates = 0;
  double level = 0.95;
  std::uint64_t seed = 0;
};

/// Builds one report per subset. Pairs also carry the madogram and the
/// extremal coefficient derived from it.
inline std::vector<DependenceReport> estimate_reports(
    const BlockMaximaTable& table, const std::vector<SubsetIndex>& subsets,
    const EstimationOptions& opts, const std::optional<BootstrapSettings>& bootstrap = std::nullopt) {
  const auto pseudo = rank_transform(table, opts);
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<DependenceReport> out;
  for (const auto& s : subsets) {
    DependenceReport r{s, {}, empirical_variogram(pseudo, s), std::nullopt, std::nullopt, std::nullopt};
    for (auto j : s.members()) r.labels.push_back(table.locations()[j].label());
    if (s.size() == 2) {
      r.madogram = empirical_madogram(pseudo, s);
      r.extremal_coefficient = extremal_coefficient_from_madogram(*r.madogram);
    }
    if (bootstrap) {
      const auto iv = bootstrap_variogram(table, s, bootstrap->replicates, bootstrap->level,
                                          bootstrap->seed, opts, threads);
      r.ci = ConfidenceInterval{iv.lower, iv.upper, bootstrap->level, bootstrap->replicates};
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline const char* tie_policy_name(TiePolicy p) {
  return p == TiePolicy::midrank ? "midrank" : "ecdf";
}

inline int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.bootstrap_replicates && *cfg.bootstrap_replicates < 100)
    throw UsageError("--bootstrap needs at least 100 replicates");
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw UsageError("--level must lie in (0, 1)");

  const auto load = parse_csv(cfg.input_path, cfg.drop_incomplete, cfg.locations);
  const auto& table = load.table;
  const auto subsets = resolve_subsets(cfg.subsets, table.labels());
  std::optional<BootstrapSettings> boot;
  if (cfg.bootstrap_replicates) boot = BootstrapSettings{*cfg.bootstrap_replicates, cfg.level, cfg.seed};
  const auto reports = estimate_reports(table, subsets, EstimationOptions{cfg.tie_policy}, boot);

  if (load.dropped_rows > 0) err << "note: dropped " << load.dropped_rows << " incomplete row(s)\n";

  std::ostringstream body;
  if (cfg.output_format == OutputFormat::json) {
    body << "{\n  \"command\": \"estimate\",\n  \"n\": " << table.n() << ",\n  \"k\": " << table.k()
         << ",\n  \"locations\": [";
    const auto labels = table.labels();
    for (std::size_t j = 0; j < labels.size(); ++j) body << (j ? ", " : "") << json_string(labels[j]);
    body << "],\n  \"tie_policy\": \"" << tie_policy_name(cfg.tie_policy)
         << "\",\n  \"dropped_rows\": " << load.dropped_rows << ",\n  \"reports\": [";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      body << (i ? ",\n    " : "\n    ");
      write_report_json(body, reports[i]);
    }
    body << "\n  ]\n}\n";
  } else {
    write_reports_csv(body, reports);
  }

  if (cfg.output_path.empty()) {
    out << body.str();
  } else {
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!(f << body.str())) throw IoError("cannot write '" + cfg.output_path + "'");
  }
  return kExitOk;
}

inline int cmd_theory(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw UsageError("--alpha must lie in (0, 1]");
  if (cfg.k < 2 || cfg.k > kMaxSubsetDimension) throw UsageError("--k must lie in [2, 20]");

  const LogisticModel model(cfg.alpha, cfg.k);
  const auto eps = logistic_extremal_coefficients(model);
  const double v = variogram_from_extremal_coefficients(eps);
  const double pair_eps = std::pow(2.0, cfg.alpha);
  const double nu = madogram_from_tail_dependence(pair_eps);
  const double pair_v = pairwise_variogram_from_madogram(nu);
  const auto subsets = enumerate_subsets(cfg.k, 1);

  if (cfg.output_format == OutputFormat::json) {
    out << "{\n  \"command\": \"theory\",\n  \"model\": \"logistic\",\n  \"alpha\": "
        << format_exact(cfg.alpha) << ",\n  \"k\": " << cfg.k << ",\n  \"variogram\": " << format_exact(v)
        << ",\n  \"pairwise\": {\"extremal_coefficient\": " << format_exact(pair_eps)
        << ", \"madogram\": " << format_exact(nu) << ", \"variogram\": " << format_exact(pair_v)
        << "},\n  \"extremal_coefficients\": [";
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      out << (i ? ",\n    " : "\n    ") << "{\"subset\": [";
      for (std::size_t m = 0; m < subsets[i].size(); ++m) out << (m ? ", " : "") << subsets[i][m] + 1;
      out << "], \"value\": " << format_exact(eps[subsets[i]]) << "}";
    }
    out << "\n  ]\n}\n";
  } else {
    std::string full;
    for (std::size_t j = 0; j < cfg.k; ++j) full += (j ? "+" : "") + std::to_string(j + 1);
    out << "quantity,subset,value\n";
    out << "variogram," << full << ',' << format_fixed4(v) << '\n';
    out << "pairwise_extremal_coefficient,," << format_fixed4(pair_eps) << '\n';
    out << "pairwise_madogram,," << format_fixed4(nu) << '\n';
    out << "pairwise_variogram,," << format_fixed4(pair_v) << '\n';
    for (const auto& s : subsets)
      out << "extremal_coefficient," << detail::join_subset(s) << ',' << format_fixed4(eps[s]) << '\n';
  }
  return kExitOk;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.alpha >= kMinSimulationAlpha && cfg.alpha <= 1.0))
    throw UsageError("--alpha must lie in [0.001, 1] for simulation");
  if (cfg.k < 2) throw UsageError("--k must be at least 2");
  if (cfg.n < 1) throw UsageError("--n must be at least 1");

  const SimulationSpec spec{LogisticModel(cfg.alpha, cfg.k), cfg.n, cfg.seed};
  const auto values = sample_logistic_rows(spec);
  std::ostringstream body;
  write_table_csv(body, synthetic_labels(cfg.k), values);
  if (cfg.output_path.empty()) {
    out << body.str();
  } else {
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!(f << body.str())) throw IoError("cannot write '" + cfg.output_path + "'");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

/// Runs the CLI on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Dependence of block maxima across locations: variogram, madogram, extremal coefficients",
               "maxdep"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::json},
                                                    {"csv", OutputFormat::csv}};
  const std::map<std::string, TiePolicy> ties{{"midrank", TiePolicy::midrank},
                                              {"ecdf", TiePolicy::first_occurrence}};

  auto* estimate = app.add_subcommand("estimate", "Estimate v-hat (and pairwise madogram) from a CSV");
  estimate->add_option("--input", cfg.input_path, "CSV of block maxima, one column per location")
      ->required();
  estimate->add_option("--locations", cfg.locations, "Columns to use, comma separated")->delimiter(',');
  estimate->add_option("--subsets", cfg.subsets, "pairs, full, all, or groups like A+B,A+B+C")
      ->capture_default_str();
  estimate->add_option("--bootstrap", cfg.bootstrap_replicates, "Bootstrap replicates (>= 100)");
  estimate->add_option("--level", cfg.level, "Bootstrap interval level")->capture_default_str();
  estimate->add_option("--seed", cfg.seed, "Bootstrap seed")->capture_default_str();
  estimate->add_option("--ties", cfg.tie_policy, "Tie handling in the rank transform")
      ->transform(CLI::CheckedTransformer(ties, CLI::ignore_case));
  estimate->add_flag("--drop-incomplete", cfg.drop_incomplete, "Skip rows with missing cells");
  estimate->add_option("--format", cfg.output_format, "json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  estimate->add_option("--output", cfg.output_path, "Write to this file instead of stdout");

  auto* theory = app.add_subcommand("theory", "Closed-form values for the symmetric logistic model");
  theory->add_option("--alpha", cfg.alpha, "Dependence parameter in (0, 1]")->required();
  theory->add_option("--k", cfg.k, "Number of locations")->required();
  theory->add_option("--format", cfg.output_format, "json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* simulate = app.add_subcommand("simulate", "Sample a logistic extreme-value table as CSV");
  simulate->add_option("--alpha", cfg.alpha, "Dependence parameter in [0.001, 1]")->required();
  simulate->add_option("--k", cfg.k, "Number of locations")->required();
  simulate->add_option("--n", cfg.n, "Number of rows")->required();
  simulate->add_option("--seed", cfg.seed, "Master seed")->required();
  simulate->add_option("--output", cfg.output_path, "Write to this file instead of stdout");

  std::vector<std::string> argv_store{"maxdep"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(cfg, out, err);
    if (theory->parsed()) return cmd_theory(cfg, out);
    return cmd_simulate(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

inline int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace maxdep::cli
