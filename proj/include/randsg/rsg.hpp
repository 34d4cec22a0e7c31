#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "randsg/oracle.hpp"
#include "randsg/rng.hpp"
#include "randsg/stats.hpp"
#include "randsg/stepsize.hpp"
#include "randsg/types.hpp"

namespace randsg {

/// Outcome of one randomized run.
struct RunResult {
  Vector x_out;
  int R = 0;
  int N = 0;
  long long oracle_calls = 0;
  /// x_1..x_R (or x_1..x_N for full-horizon runs) when retained.
  std::optional<std::vector<Vector>> trajectory;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::chrono::duration<double> wall_time{};
};

struct RunOptions {
  bool retain_trajectory = false;
  /// Keep iterating to x_N after reaching x_R. The output is still x_R; the
  /// extra N - R oracle calls are counted.
  bool full_horizon = false;
};

/// Randomized stochastic gradient method. R is drawn from `dist` first, then
/// x_{k+1} = x_k - gamma_k G(x_k, xi_k) for k = 1..R-1 and x_R is returned;
/// the gradient at x_R would be unused, so only R - 1 oracle calls are made.
RunResult rsg_run(const FirstOrderOracle& oracle, const Vector& x1, const StepsizePlan& plan,
                  const TerminationDistribution& dist, RngStream& rng, RunOptions options = {});

/// The same iteration with R fixed by the caller.
RunResult rsg_run_fixed_R(const FirstOrderOracle& oracle, const Vector& x1, const StepsizePlan& plan,
                          int R, RngStream& rng, RunOptions options = {});

/// Monte Carlo estimate of E||grad f(x_R)||^2 over R and xi. Run i uses
/// rng.derive(i).
Estimate rsg_expected_sq_gradnorm(const ProblemSpec& problem, const NoiseModel& noise,
                                  const StepsizePlan& plan, const TerminationDistribution& dist,
                                  const Vector& x1, int runs, const RngStream& rng, unsigned threads = 1);

/// Monte Carlo estimate of E[f(x_R) - f*]; requires f_star.
Estimate rsg_expected_fgap(const ProblemSpec& problem, const NoiseModel& noise, const StepsizePlan& plan,
                           const TerminationDistribution& dist, const Vector& x1, int runs,
                           const RngStream& rng, unsigned threads = 1);

/// sum_k P_R(k) metric(x_k) along the deterministic trajectory; valid only
/// without noise.
double rsg_noiseless_expectation(const ProblemSpec& problem, const StepsizePlan& plan,
                                 const TerminationDistribution& dist, const Vector& x1,
                                 const std::function<double(const Vector&)>& metric);

/// Smallest true gradient norm along a trajectory: (1-based index, norm).
/// Ties go to the lowest index.
std::pair<int, double> min_gradnorm_diagnostic(const std::vector<Vector>& trajectory,
                                               const ProblemSpec& problem);

/// Throws DivergenceError if any coordinate of x is not finite.
void check_finite(const Vector& x, long iteration);

}  // namespace randsg
