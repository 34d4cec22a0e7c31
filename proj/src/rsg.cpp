#include "randsg/rsg.hpp"

#include <cmath>
#include <string>

#include "randsg/errors.hpp"

namespace randsg {

void check_finite(const Vector& x, long iteration) {
  if (!x.allFinite())
    throw DivergenceError("iterate became non-finite at iteration " + std::to_string(iteration), iteration);
}

RunResult rsg_run_fixed_R(const FirstOrderOracle& oracle, const Vector& x1, const StepsizePlan& plan,
                          int R, RngStream& rng, RunOptions options) {
  const auto start = std::chrono::steady_clock::now();
  if (x1.size() != oracle.dim()) throw InputError("initial point dimension mismatch");
  const int N = plan.N();
  if (R < 1 || R > N) throw InputError("R must lie in [1, N]");

  RunResult out;
  out.R = R;
  out.N = N;
  out.seed = rng.seed();
  out.stream_id = rng.stream_id();

  const int last = options.full_horizon ? N : R;
  Vector x = x1;
  if (options.retain_trajectory) {
    out.trajectory.emplace();
    out.trajectory->reserve(last);
    out.trajectory->push_back(x);
  }
  for (int k = 1; k < last; ++k) {
    const Vector g = oracle.query(x, rng);
    x -= plan.gammas[k - 1] * g;
    ++out.oracle_calls;
    check_finite(x, k + 1);
    if (options.retain_trajectory) out.trajectory->push_back(x);
    if (k + 1 == R) out.x_out = x;
  }
  if (R == 1) out.x_out = x1;
  out.wall_time = std::chrono::steady_clock::now() - start;
  return out;
}

RunResult rsg_run(const FirstOrderOracle& oracle, const Vector& x1, const StepsizePlan& plan,
                  const TerminationDistribution& dist, RngStream& rng, RunOptions options) {
  if (plan.N() != dist.N())
    throw InputError("stepsize plan has N = " + std::to_string(plan.N()) +
                     " but termination distribution has N = " + std::to_string(dist.N()));
  const int R = sample_R(dist, rng);
  return rsg_run_fixed_R(oracle, x1, plan, R, rng, options);
}

namespace {

Estimate replicate(const ProblemSpec& problem, const NoiseModel& noise, const StepsizePlan& plan,
                   const TerminationDistribution& dist, const Vector& x1, int runs, const RngStream& rng,
                   unsigned threads, const std::function<double(const Vector&)>& metric) {
  if (runs < 1) throw InputError("runs must be >= 1");
  const FirstOrderOracle oracle(problem, noise);
  std::vector<double> values(runs);
  parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t i) {
    RngStream r = rng.derive(i);
    values[i] = metric(rsg_run(oracle, x1, plan, dist, r).x_out);
  });
  return mean_estimate(values);
}

}  // namespace

Estimate rsg_expected_sq_gradnorm(const ProblemSpec& problem, const NoiseModel& noise,
                                  const StepsizePlan& plan, const TerminationDistribution& dist,
                                  const Vector& x1, int runs, const RngStream& rng, unsigned threads) {
  if (!problem.has_grad()) throw CapabilityError("rsg_expected_sq_gradnorm requires the true gradient");
  return replicate(problem, noise, plan, dist, x1, runs, rng, threads,
                   [&](const Vector& x) { return problem.grad(x).squaredNorm(); });
}

Estimate rsg_expected_fgap(const ProblemSpec& problem, const NoiseModel& noise, const StepsizePlan& plan,
                           const TerminationDistribution& dist, const Vector& x1, int runs,
                           const RngStream& rng, unsigned threads) {
  if (!problem.f_star) throw CapabilityError("rsg_expected_fgap requires f_star");
  const double f_star = *problem.f_star;
  return replicate(problem, noise, plan, dist, x1, runs, rng, threads,
                   [&](const Vector& x) { return problem.value(x) - f_star; });
}

double rsg_noiseless_expectation(const ProblemSpec& problem, const StepsizePlan& plan,
                                 const TerminationDistribution& dist, const Vector& x1,
                                 const std::function<double(const Vector&)>& metric) {
  if (plan.N() != dist.N()) throw InputError("plan/distribution length mismatch");
  if (!problem.has_grad()) throw CapabilityError("noiseless expectation requires the gradient");
  Vector x = x1;
  double acc = 0.0;
  for (int k = 1; k <= plan.N(); ++k) {
    acc += dist.probs[k - 1] * metric(x);
    if (k < plan.N()) {
      x -= plan.gammas[k - 1] * problem.grad(x);
      check_finite(x, k + 1);
    }
  }
  return acc;
}

std::pair<int, double> min_gradnorm_diagnostic(const std::vector<Vector>& trajectory,
                                               const ProblemSpec& problem) {
  if (trajectory.empty()) throw InputError("min_gradnorm_diagnostic: empty trajectory");
  if (!problem.has_grad()) throw CapabilityError("min_gradnorm_diagnostic requires the true gradient");
  int best = 1;
  double best_norm = problem.grad(trajectory[0]).norm();
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const double v = problem.grad(trajectory[k]).norm();
    if (v < best_norm) {
      best_norm = v;
      best = static_cast<int>(k) + 1;
    }
  }
  return {best, best_norm};
}

}  // namespace randsg
