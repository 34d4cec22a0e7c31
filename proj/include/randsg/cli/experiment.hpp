#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randsg/bounds.hpp"
#include "randsg/cli/config.hpp"
#include "randsg/oracle.hpp"
#include "randsg/stats.hpp"
#include "randsg/stepsize.hpp"

namespace randsg::cli {

/// A concrete problem with its starting point and known constants.
struct Instance {
  ProblemSpec spec;
  Vector x1;
  double D_f = 0.0;
  bool D_f_exact = false;  ///< False when D_f is the sqrt(2 f(x1)/L) upper bound.
  std::optional<double> D_X;
};

Instance build_instance(const ExperimentConfig& config);

/// Algorithm parameters after resolving every `auto`.
struct Derived {
  int n = 0;
  double L = 0.0;
  double sigma = 0.0;
  double D_tilde = 0.0;
  long long N = 0;
  int S = 1;
  long long T = 1;
  std::optional<double> mu;
  StepsizePlan plan;
  TerminationDistribution dist;
};

Derived derive(const ExperimentConfig& config, const Instance& instance);

struct ReplicationRow {
  std::uint64_t replication = 0;
  std::uint64_t seed = 0;
  std::vector<int> R;
  double grad_norm_sq = 0.0;
  std::optional<double> f_gap;
  long long oracle_calls = 0;
  long long optimization_calls = 0;
  long long post_calls = 0;
  double wall_ms = 0.0;
  bool ok = true;
  std::string status = "ok";
  std::optional<double> min_gradnorm;  ///< Trajectory diagnostic when retained.
};

struct Aggregate {
  long ok_count = 0;
  long failed_count = 0;
  Estimate grad_norm_sq;
  double grad_norm_sq_variance = 0.0;
  std::optional<Estimate> f_gap;
  std::optional<double> f_gap_variance;
  std::optional<double> failure_frequency;  ///< P{grad_norm_sq > epsilon}
  double mean_oracle_calls = 0.0;
  std::optional<double> mean_min_gradnorm;
};

/// Recomputes the aggregate from rows; run_experiment uses the same function
/// so the JSON can be reproduced from the CSV.
Aggregate aggregate_rows(const std::vector<ReplicationRow>& rows, std::optional<double> epsilon);

struct ExperimentResult {
  ExperimentConfig config;
  Instance instance;
  Derived derived;
  std::vector<ReplicationRow> rows;
  Aggregate aggregate;
  BoundReport bounds;
};

/// Executes all replications. Replication r runs on RngStream(seed + r, 0);
/// a non-finite iterate marks the row failed and the run continues.
ExperimentResult run_experiment(const ExperimentConfig& config);

BoundReport bound_report(const ExperimentConfig& config, const Instance& instance, const Derived& derived);

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct Certificate {
  std::string claim;
  std::string description;
  double empirical = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  double slack = 0.0;  ///< Statistical band used for the verdict.
  bool exact = false;  ///< Computed without Monte Carlo.
  Verdict verdict = Verdict::inconclusive;
};

/// Evaluates each configured claim (all applicable claims when none listed).
/// Monte Carlo verdicts: pass if empirical + slack <= bound, fail if
/// empirical - slack > bound, inconclusive otherwise.
std::vector<Certificate> verify_bounds(const ExperimentConfig& config);

}  // namespace randsg::cli
