#pragma once

#include <optional>

#include "randsg/oracle.hpp"
#include "randsg/rsg.hpp"
#include "randsg/stats.hpp"
#include "randsg/stepsize.hpp"

namespace randsg {

struct RsgfConfig {
  double mu = 0.0;
  StepsizePlan plan;
  TerminationDistribution dist;
  int n = 0;
  /// Both evaluations of a step share one xi draw. When false each evaluation
  /// draws its own xi.
  bool common_random_numbers = true;

  /// Checks mu > 0, matching lengths, gamma_k < 1/(2(n+4)L) and, when D_f is
  /// given, mu <= D_f / ((n+4) sqrt(2N)).
  void validate(double L, std::optional<double> D_f = std::nullopt) const;
};

/// D_f / ((n+4) sqrt(2N)).
double choose_mu(double D_f, int n, int N);

/// sqrt(2 f(x1) / L_hat), an upper bound on D_f whenever f* >= 0.
double heuristic_Df(double f_x1, double L_hat);

/// Constant zeroth-order stepsizes, their termination distribution and mu.
RsgfConfig make_rsgf_config(double L, double D_tilde, double sigma, int N, int n, double mu);

/// One draw of G_mu(x, xi, u): samples u, then xi (shared or per evaluation),
/// and makes exactly two oracle calls.
Vector sample_gmu(const ZerothOrderOracle& oracle, const Vector& x, double mu, bool common_random_numbers,
                  RngStream& rng);

/// Randomized stochastic gradient-free method: x_{k+1} = x_k - gamma_k G_mu
/// for k = 1..R-1, returning x_R after 2(R-1) oracle calls.
RunResult rsgf_run(const ZerothOrderOracle& oracle, const Vector& x1, const RsgfConfig& config,
                   RngStream& rng, RunOptions options = {});

RunResult rsgf_run_fixed_R(const ZerothOrderOracle& oracle, const Vector& x1, const RsgfConfig& config,
                           int R, RngStream& rng, RunOptions options = {});

/// Monte Carlo estimate of E||grad f(x_R)||^2 over R, xi and u. The oracle uses
/// the default value-noise level for config.mu.
Estimate rsgf_expected_sq_gradnorm(const ProblemSpec& problem, const NoiseModel& noise,
                                   const RsgfConfig& config, const Vector& x1, int runs,
                                   const RngStream& rng, unsigned threads = 1);

Estimate rsgf_expected_fgap(const ProblemSpec& problem, const NoiseModel& noise, const RsgfConfig& config,
                            const Vector& x1, int runs, const RngStream& rng, unsigned threads = 1);

}  // namespace randsg
