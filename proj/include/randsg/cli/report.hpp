#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "randsg/cli/experiment.hpp"

namespace randsg::cli {

/// Column order of the per-replication CSV.
inline constexpr const char* kCsvHeader = "replication,seed,R,grad_norm_sq,f_gap,oracle_calls,wall_ms,status";

/// Shortest round-trip decimal form ("%.17g"); "nan" and "inf" for
/// non-finite values.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<ReplicationRow>& rows);

/// Parses a CSV written by write_csv. Columns not stored in the file
/// (optimization/post calls, diagnostics) are left at their defaults.
std::vector<ReplicationRow> read_csv(std::istream& is);

/// Cumulative oracle budget against the running mean of grad_norm_sq.
void write_plot_csv(std::ostream& os, const std::vector<ReplicationRow>& rows);

nlohmann::ordered_json aggregate_json(const Aggregate& aggregate);
nlohmann::ordered_json bounds_json(const BoundReport& bounds);
nlohmann::ordered_json derived_json(const Derived& derived, const Instance& instance);
nlohmann::ordered_json result_json(const ExperimentResult& result);
nlohmann::ordered_json certificates_json(const ExperimentConfig& config, const std::vector<Certificate>& certs);

/// Writes results.csv, aggregate.json and, with plot_data, plot.csv into
/// config.out_dir.
void write_outputs(const ExperimentResult& result);

/// Inputs of the parameter calculator.
struct ParamsQuery {
  double epsilon = 0.0;
  double Lambda = 0.0;
  double L = 0.0;
  double D_f = 0.0;
  std::optional<double> D_tilde;  ///< Defaults to D_f.
  double sigma = 0.0;
  std::string order = "first";    ///< "first" or "zeroth".
  int n = 1;
  bool light_tail = false;
};

nlohmann::ordered_json compute_params(const ParamsQuery& q);

/// Human-readable list of built-in problems and their keys.
std::string problem_catalog();

}  // namespace randsg::cli
