#pragma once

#include <string>
#include <vector>

#include "randsg/rng.hpp"

namespace randsg {

enum class StepsizeKind { constant, increasing, decreasing, custom };

const char* to_string(StepsizeKind kind);
StepsizeKind stepsize_kind_from_string(const std::string& s);

/// The stepsize sequence gamma_1..gamma_N (stored zero-based).
struct StepsizePlan {
  StepsizeKind kind = StepsizeKind::custom;
  std::vector<double> gammas;
  double L = 0.0;
  double D_tilde = 0.0;
  double sigma = 0.0;

  int N() const { return static_cast<int>(gammas.size()); }
  static StepsizePlan custom(std::vector<double> gammas);
};

/// gamma_k = min{1/L, D/(sigma sqrt N)}; sigma = 0 gives 1/L.
StepsizePlan constant_plan_first_order(double L, double D_tilde, double sigma, int N);
/// gamma_k = min{1/L, D sqrt(k) / (sigma N)}.
StepsizePlan increasing_plan(double L, double D_tilde, double sigma, int N);
/// gamma_k = min{1/L, D / (sigma (k N)^{1/4})}.
StepsizePlan decreasing_plan(double L, double D_tilde, double sigma, int N);
/// gamma_k = (n+4)^{-1/2} min{1/(4 L sqrt(n+4)), D/(sigma sqrt N)}.
StepsizePlan constant_plan_zeroth_order(double L, double D_tilde, double sigma, int N, int n);

/// Probability mass of the random iteration count R over {1..N}, plus the
/// CDF used for inverse sampling.
struct TerminationDistribution {
  std::vector<double> probs;
  std::vector<double> cdf;

  int N() const { return static_cast<int>(probs.size()); }
  /// Builds from nonnegative weights; throws ValidityError if they sum to zero.
  static TerminationDistribution from_weights(const std::vector<double>& weights);
};

/// P_R(k) proportional to 2 gamma_k - L gamma_k^2; requires gamma_k < 2/L.
TerminationDistribution termination_distribution_first_order(const StepsizePlan& plan, double L);
/// P_R(k) proportional to gamma_k - 2L(n+4) gamma_k^2; requires gamma_k < 1/(2(n+4)L).
TerminationDistribution termination_distribution_zeroth_order(const StepsizePlan& plan, double L, int n);

/// Inverse-CDF draw of R in [1, N] from a single 64-bit uniform. A draw landing
/// exactly on a CDF boundary resolves to the lower index.
int sample_R(const TerminationDistribution& dist, RngStream& rng);
/// The same map applied to a given uniform in [0, 1).
int sample_R_from_uniform(const TerminationDistribution& dist, double u);

}  // namespace randsg
