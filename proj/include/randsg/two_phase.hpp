#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "randsg/oracle.hpp"
#include "randsg/rsg.hpp"
#include "randsg/rsgf.hpp"
#include "randsg/stepsize.hpp"

namespace randsg {

enum class Selection { gradient_norm, function_value };
enum class OracleOrder { first, zeroth };

const char* to_string(Selection s);
Selection selection_from_string(const std::string& s);

struct TwoPhaseConfig {
  int S = 1;  ///< Candidate runs.
  int N = 1;  ///< Iteration limit per run.
  int T = 1;  ///< Post-optimization sample size per candidate.
  Selection selection = Selection::gradient_norm;
  bool recycle_xi = false;
  OracleOrder order = OracleOrder::first;
  /// Zeroth order only: share xi between the two evaluations of G_mu.
  bool common_random_numbers = true;

  void validate() const;
};

struct TwoPhaseResult {
  Vector x_star_bar;
  std::size_t chosen = 0;  ///< Zero-based index into candidates.
  std::vector<Vector> candidates;
  std::vector<int> R;
  std::vector<double> selection_scores;
  long long optimization_calls = 0;
  long long post_calls = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Two-phase scheme with a first-order oracle: S RSG runs from x1, each on
/// rng.derive(2s), then selection by ||(1/T) sum G(x_s, xi_k)|| (or by the
/// averaged F for function_value). Post-optimization for candidate s uses
/// rng.derive(2s+1), or one shared stream when recycle_xi is set.
TwoPhaseResult run_two_phase(const FirstOrderOracle& oracle, const Vector& x1, const TwoPhaseConfig& config,
                             const StepsizePlan& plan, const TerminationDistribution& dist,
                             const RngStream& rng);

/// Two-phase scheme with a zeroth-order oracle (RSGF candidates, G_mu
/// post-optimization). `mu` is required.
TwoPhaseResult run_two_phase(const ZerothOrderOracle& oracle, const Vector& x1, const TwoPhaseConfig& config,
                             const StepsizePlan& plan, const TerminationDistribution& dist,
                             std::optional<double> mu, const RngStream& rng);

/// Index of the smallest score, lowest index on ties.
std::size_t argmin_lowest(const std::vector<double>& scores);

// Parameter calculators.

/// S = ceil(log2(2/Lambda)), at least 1.
int params_S(double Lambda);
/// N = ceil(max{32 L^2 D_f^2 / eps, [32 L (D + D_f^2/D) sigma / eps]^2}).
long long params_N_first_order(double epsilon, double L, double D_f, double D_tilde, double sigma);
/// T = max{1, ceil(24 (S+1) sigma^2 / (Lambda eps))}.
long long params_T_first_order(double epsilon, double Lambda, double sigma, int S);
/// T' = max{1, ceil((24 sigma^2 / eps) [1 + sqrt(3 ln(2(S+1)/Lambda))]^2)}.
long long params_T_light_tail(double epsilon, double Lambda, double sigma, int S);
/// N^ = ceil(max{12(n+4)(6 L D_f)^2 / eps, [72 L sqrt(n+4) (D + D_f^2/D) sigma / eps]^2}).
long long params_N_zeroth_order(double epsilon, double L, double D_f, double D_tilde, double sigma, int n);
/// T^ = ceil((24 (n+4)(S+1) / Lambda) max{1, 6 sigma^2 / eps}).
long long params_T_zeroth_order(double epsilon, double Lambda, double sigma, int S, int n);

}  // namespace randsg
