#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "randsg/errors.hpp"
#include "randsg/oracle.hpp"
#include "randsg/stepsize.hpp"
#include "randsg/two_phase.hpp"

namespace randsg::cli {

/// A configuration problem, with the 1-based line it refers to (0 when the
/// problem is not tied to a line).
class ConfigError : public InputError {
 public:
  ConfigError(int line, const std::string& message)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class Algorithm { rsg, rsgf, two_rsg, two_rsgf, trajectory_average };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);
bool is_zeroth_order(Algorithm a);
bool is_two_phase(Algorithm a);

enum class ProblemKind { quadratic, least_squares, sigmoid_svm };
const char* to_string(ProblemKind p);
ProblemKind problem_kind_from_string(const std::string& s);

/// Every key of the configuration file. Optional numeric fields left unset
/// (or written as `auto`) are derived at run time.
struct ExperimentConfig {
  // Problem.
  ProblemKind problem = ProblemKind::quadratic;
  int dim = 10;
  std::uint64_t problem_seed = 1;
  std::vector<double> eigenvalues;  ///< Empty: linearly spaced in [eig_min, eig_max].
  double eig_min = 0.1;
  double eig_max = 1.0;
  bool rotate = true;
  double ls_sparsity = 0.5;
  double ls_noise_sd = 0.1;
  int svm_samples = 500;
  double svm_sparsity = 0.5;
  double svm_lambda = 0.01;
  double svm_label_flip = 0.1;
  double init_radius = 1.0;

  // Algorithm.
  Algorithm algorithm = Algorithm::rsg;
  StepsizeKind stepsize = StepsizeKind::constant;
  std::optional<long long> iterations;
  std::optional<double> D_tilde;
  NoiseKind noise = NoiseKind::bounded_variance;
  double sigma = 1.0;
  std::optional<double> mu;
  bool crn = true;

  // Two-phase.
  std::optional<double> epsilon;
  std::optional<double> Lambda;
  std::optional<int> candidates;
  std::optional<long long> post_samples;
  bool light_tail_T = false;
  Selection selection = Selection::gradient_norm;
  bool recycle_xi = false;

  // Replication and output.
  int replications = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_dir = ".";
  bool plot_data = false;
  bool timing = false;
  bool retain_trajectory = false;

  // Verification.
  std::vector<std::string> claims;
  std::vector<double> markov_lambdas{2.0, 4.0};
  double deviation_lambda = 8.0;
  double deviation_lambda_light_tail = 3.0;

  /// Parses the key-value text. Throws ConfigError on unknown or duplicate
  /// keys, malformed values and inconsistent combinations.
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::string& path);

  /// Cross-field checks that do not depend on the problem instance.
  void validate() const;

  nlohmann::ordered_json to_json() const;
};

/// The keys accepted by ExperimentConfig::parse, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace randsg::cli
