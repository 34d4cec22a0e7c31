#include "randsg/cli/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "randsg/errors.hpp"
#include "randsg/problems.hpp"
#include "randsg/rsg.hpp"
#include "randsg/rsgf.hpp"
#include "randsg/two_phase.hpp"

namespace randsg::cli {

namespace {

constexpr long long kMaxIterations = 100'000'000;

Vector unit_direction(int n, RngStream rng) {
  Vector d = rng.normal_vector(n);
  return d / d.norm();
}

}  // namespace

Instance build_instance(const ExperimentConfig& config) {
  config.validate();
  RngStream problem_rng(config.problem_seed, 0);
  const Vector dir = unit_direction(config.dim, RngStream(config.problem_seed, 1));

  Instance inst;
  switch (config.problem) {
    case ProblemKind::quadratic: {
      std::vector<double> spectrum = config.eigenvalues;
      if (spectrum.empty()) {
        spectrum.resize(config.dim);
        for (int i = 0; i < config.dim; ++i)
          spectrum[i] = config.dim == 1 ? config.eig_max
                                        : config.eig_min + (config.eig_max - config.eig_min) * i / (config.dim - 1);
      }
      const QuadraticProblem q = make_quadratic(spectrum, problem_rng, config.rotate);
      inst.spec = q.spec();
      inst.x1 = *q.x_star + config.init_radius * dir;
      break;
    }
    case ProblemKind::least_squares: {
      const LeastSquaresProblem p = make_least_squares(config.dim, config.ls_sparsity, config.ls_noise_sd, problem_rng);
      inst.spec = p.spec();
      inst.x1 = p.x_bar + config.init_radius * dir;
      break;
    }
    case ProblemKind::sigmoid_svm: {
      const SigmoidSvmProblem p = make_sigmoid_svm(config.dim, config.svm_samples, config.svm_sparsity,
                                                   config.svm_lambda, config.svm_label_flip, problem_rng);
      inst.spec = p.spec();
      inst.x1 = config.init_radius * dir;
      break;
    }
  }
  const double f1 = inst.spec.value(inst.x1);
  if (inst.spec.f_star) {
    inst.D_f = compute_Df(f1, *inst.spec.f_star, inst.spec.lipschitz_L);
    inst.D_f_exact = true;
  } else {
    inst.D_f = heuristic_Df(f1, inst.spec.lipschitz_L);
  }
  if (inst.spec.x_star) inst.D_X = (inst.x1 - *inst.spec.x_star).norm();
  return inst;
}

Derived derive(const ExperimentConfig& config, const Instance& inst) {
  Derived d;
  d.n = inst.spec.n;
  d.L = inst.spec.lipschitz_L;
  d.sigma = config.noise == NoiseKind::none ? 0.0 : config.sigma;
  d.D_tilde = config.D_tilde.value_or(inst.D_f);
  if (!(d.D_tilde > 0.0)) throw ConfigError(0, "D_tilde resolved to 0 (x1 is optimal); set D_tilde explicitly");
  const bool zeroth = is_zeroth_order(config.algorithm);

  if (is_two_phase(config.algorithm)) {
    d.S = config.candidates ? *config.candidates : params_S(*config.Lambda);
    if (config.iterations) {
      d.N = *config.iterations;
    } else {
      d.N = zeroth ? params_N_zeroth_order(*config.epsilon, d.L, inst.D_f, d.D_tilde, d.sigma, d.n)
                   : params_N_first_order(*config.epsilon, d.L, inst.D_f, d.D_tilde, d.sigma);
    }
    if (config.post_samples) {
      d.T = *config.post_samples;
    } else if (zeroth) {
      d.T = params_T_zeroth_order(*config.epsilon, *config.Lambda, d.sigma, d.S, d.n);
    } else if (config.light_tail_T) {
      d.T = params_T_light_tail(*config.epsilon, *config.Lambda, d.sigma, d.S);
    } else {
      d.T = params_T_first_order(*config.epsilon, *config.Lambda, d.sigma, d.S);
    }
  } else {
    d.N = *config.iterations;
  }
  if (d.N > kMaxIterations) throw ConfigError(0, "derived iteration limit " + std::to_string(d.N) + " is too large");
  const int N = static_cast<int>(d.N);

  if (zeroth) {
    d.plan = constant_plan_zeroth_order(d.L, d.D_tilde, d.sigma, N, d.n);
    d.dist = termination_distribution_zeroth_order(d.plan, d.L, d.n);
    d.mu = config.mu ? *config.mu : choose_mu(inst.D_f, d.n, N);
  } else {
    switch (config.stepsize) {
      case StepsizeKind::increasing: d.plan = increasing_plan(d.L, d.D_tilde, d.sigma, N); break;
      case StepsizeKind::decreasing: d.plan = decreasing_plan(d.L, d.D_tilde, d.sigma, N); break;
      default: d.plan = constant_plan_first_order(d.L, d.D_tilde, d.sigma, N); break;
    }
    d.dist = termination_distribution_first_order(d.plan, d.L);
  }
  return d;
}

Aggregate aggregate_rows(const std::vector<ReplicationRow>& rows, std::optional<double> epsilon) {
  Aggregate a;
  std::vector<double> g, fg, calls, diag;
  bool all_have_gap = true;
  for (const auto& r : rows) {
    if (!r.ok) {
      ++a.failed_count;
      continue;
    }
    ++a.ok_count;
    g.push_back(r.grad_norm_sq);
    calls.push_back(static_cast<double>(r.oracle_calls));
    if (r.f_gap) fg.push_back(*r.f_gap);
    else all_have_gap = false;
    if (r.min_gradnorm) diag.push_back(*r.min_gradnorm);
  }
  a.grad_norm_sq = mean_estimate(g);
  a.grad_norm_sq_variance = sample_variance(g);
  if (all_have_gap && !fg.empty()) {
    a.f_gap = mean_estimate(fg);
    a.f_gap_variance = sample_variance(fg);
  }
  if (epsilon && !g.empty()) a.failure_frequency = fraction_above(g, *epsilon);
  a.mean_oracle_calls = mean_estimate(calls).mean;
  if (!diag.empty() && diag.size() == g.size()) a.mean_min_gradnorm = mean_estimate(diag).mean;
  return a;
}

BoundReport bound_report(const ExperimentConfig& config, const Instance& inst, const Derived& d) {
  BoundReport b;
  b.D_f = inst.D_f;
  b.B_N = compute_BN(d.L, inst.D_f, d.D_tilde, d.sigma, d.N);
  b.B_bar_N = compute_BN_bar(d.L, inst.D_f, d.D_tilde, d.sigma, d.N, d.n);
  b.D_N = compute_DN(d.L, b.B_bar_N, d.sigma, inst.D_f, d.N, d.n);
  const double B = is_zeroth_order(config.algorithm) ? b.B_bar_N : b.B_N;
  for (double lambda : config.markov_lambdas) b.thresholds.push_back(markov_threshold(d.L, B, lambda));
  if (config.algorithm == Algorithm::two_rsg) {
    b.thresholds.push_back(deviation_threshold_2rsg(d.L, b.B_N, d.sigma, d.T, d.S, config.deviation_lambda));
    b.thresholds.push_back(
        deviation_threshold_2rsg_light_tail(d.L, b.B_N, d.sigma, d.T, d.S, config.deviation_lambda_light_tail));
  } else if (config.algorithm == Algorithm::two_rsgf) {
    b.thresholds.push_back(
        deviation_threshold_2rsgf(d.L, b.B_bar_N, d.sigma, inst.D_f, d.N, d.T, d.S, d.n, config.deviation_lambda));
  }
  b.first_order_total = budget_totals(d.S, d.N, d.T, BudgetOrder::first);
  b.zeroth_order_total = budget_totals(d.S, d.N, d.T, BudgetOrder::zeroth);
  return b;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult res;
  res.config = config;
  res.instance = build_instance(config);
  res.derived = derive(config, res.instance);
  const Instance& inst = res.instance;
  const Derived& d = res.derived;
  const ProblemSpec& spec = inst.spec;
  const NoiseModel noise{config.noise, d.sigma};

  const FirstOrderOracle first(spec, noise);
  const ZerothOrderOracle zeroth(spec, noise, d.mu ? default_value_noise_sd(noise, d.n, *d.mu) : 0.0);

  RsgfConfig rc;
  if (d.mu) {
    rc.mu = *d.mu;
    rc.plan = d.plan;
    rc.dist = d.dist;
    rc.n = d.n;
    rc.common_random_numbers = config.crn;
  }
  TwoPhaseConfig tc;
  tc.S = d.S;
  tc.N = static_cast<int>(d.N);
  tc.T = static_cast<int>(d.T);
  tc.selection = config.selection;
  tc.recycle_xi = config.recycle_xi;
  tc.order = is_zeroth_order(config.algorithm) ? OracleOrder::zeroth : OracleOrder::first;
  tc.common_random_numbers = config.crn;
  if (d.T > std::numeric_limits<int>::max()) throw ConfigError(0, "post_samples is too large");

  RunOptions options;
  options.retain_trajectory = config.retain_trajectory;
  options.full_horizon = config.retain_trajectory;

  res.rows.resize(config.replications);
  parallel_for(res.rows.size(), config.threads, [&](std::size_t r) {
    ReplicationRow& row = res.rows[r];
    row.replication = r;
    row.seed = config.seed + r;
    RngStream rng(row.seed, 0);
    const auto start = std::chrono::steady_clock::now();
    Vector x_out;
    try {
      switch (config.algorithm) {
        case Algorithm::rsg:
        case Algorithm::rsgf: {
          RunResult run = config.algorithm == Algorithm::rsg ? rsg_run(first, inst.x1, d.plan, d.dist, rng, options)
                                                             : rsgf_run(zeroth, inst.x1, rc, rng, options);
          row.R = {run.R};
          row.oracle_calls = row.optimization_calls = run.oracle_calls;
          if (run.trajectory && spec.has_grad()) row.min_gradnorm = min_gradnorm_diagnostic(*run.trajectory, spec).second;
          x_out = std::move(run.x_out);
          break;
        }
        case Algorithm::two_rsg:
        case Algorithm::two_rsgf: {
          TwoPhaseResult tp = config.algorithm == Algorithm::two_rsg
                                  ? run_two_phase(first, inst.x1, tc, d.plan, d.dist, rng)
                                  : run_two_phase(zeroth, inst.x1, tc, d.plan, d.dist, d.mu, rng);
          row.R = tp.R;
          row.optimization_calls = tp.optimization_calls;
          row.post_calls = tp.post_calls;
          row.oracle_calls = tp.optimization_calls + tp.post_calls;
          x_out = std::move(tp.x_star_bar);
          break;
        }
        case Algorithm::trajectory_average: {
          RunOptions full{true, true};
          RunResult run = rsg_run_fixed_R(first, inst.x1, d.plan, static_cast<int>(d.N), rng, full);
          Vector avg = Vector::Zero(d.n);
          for (const Vector& x : *run.trajectory) avg += x;
          avg /= static_cast<double>(run.trajectory->size());
          row.R = {run.R};
          row.oracle_calls = row.optimization_calls = run.oracle_calls;
          if (spec.has_grad()) row.min_gradnorm = min_gradnorm_diagnostic(*run.trajectory, spec).second;
          x_out = std::move(avg);
          break;
        }
      }
      row.grad_norm_sq = spec.grad(x_out).squaredNorm();
      if (spec.f_star) row.f_gap = spec.value(x_out) - *spec.f_star;
    } catch (const DivergenceError&) {
      row.ok = false;
      row.status = "diverged";
      row.grad_norm_sq = std::numeric_limits<double>::quiet_NaN();
      row.min_gradnorm.reset();
    }
    if (config.timing)
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });

  res.aggregate = aggregate_rows(res.rows, config.epsilon);
  res.bounds = bound_report(config, inst, d);
  return res;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

Verdict judge(double empirical, double slack, double bound, bool exact) {
  if (exact) return empirical <= bound ? Verdict::pass : Verdict::fail;
  if (empirical + slack <= bound) return Verdict::pass;
  if (empirical - slack > bound) return Verdict::fail;
  return Verdict::inconclusive;
}

Certificate expectation_certificate(std::string claim, std::string description, double empirical, double se,
                                    double bound, bool exact) {
  Certificate c;
  c.claim = std::move(claim);
  c.description = std::move(description);
  c.empirical = empirical;
  c.std_error = exact ? 0.0 : se;
  c.bound = bound;
  c.slack = exact ? 0.0 : 4.0 * se;
  c.exact = exact;
  c.verdict = judge(c.empirical, c.slack, bound, exact);
  return c;
}

Certificate frequency_certificate(std::string claim, std::string description, double empirical, double bound,
                                  long M, bool exact) {
  Certificate c;
  c.claim = std::move(claim);
  c.description = std::move(description);
  c.empirical = empirical;
  c.bound = bound;
  c.exact = exact;
  const double p = std::min(bound, 1.0);
  c.slack = exact ? 0.0 : frequency_slack(p, std::max(M, 1L));
  c.std_error = exact ? 0.0 : std::sqrt(p * (1.0 - p) / std::max(M, 1L));
  c.verdict = bound >= 1.0 ? Verdict::pass : judge(c.empirical, c.slack, bound, exact);
  return c;
}

std::vector<double> ok_values(const std::vector<ReplicationRow>& rows) {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.ok) v.push_back(r.grad_norm_sq);
  return v;
}

}  // namespace

std::vector<Certificate> verify_bounds(const ExperimentConfig& config) {
  if (config.algorithm == Algorithm::trajectory_average)
    throw ConfigError(0, "no bound claims apply to the trajectory-average baseline");

  std::vector<std::string> claims = config.claims;
  const bool two_phase = is_two_phase(config.algorithm);
  const bool zeroth = is_zeroth_order(config.algorithm);
  if (claims.empty()) {
    if (two_phase) {
      claims = {"deviation"};
      if (config.algorithm == Algorithm::two_rsg && config.noise == NoiseKind::light_tail)
        claims.push_back("deviation_light_tail");
      if (config.epsilon && config.Lambda) claims.push_back("eps_lambda");
    } else {
      claims = {"expectation", "markov"};
    }
  }

  const Instance inst = build_instance(config);
  const Derived d = derive(config, inst);
  const ProblemSpec& spec = inst.spec;
  const BoundReport br = bound_report(config, inst, d);
  const bool exact = !zeroth && !two_phase && d.sigma == 0.0;
  const bool constant_plan = d.plan.kind == StepsizeKind::constant;

  // Bound on E||grad f(x_R)||^2.
  double grad_bound;
  if (zeroth) {
    grad_bound = *d.mu <= choose_mu(inst.D_f, d.n, static_cast<int>(d.N))
                     ? d.L * br.B_bar_N
                     : d.L * rsgf_general_bound(d.plan, d.L, inst.D_f, d.sigma, *d.mu, d.n);
  } else {
    grad_bound = constant_plan ? d.L * br.B_N : d.L * rsg_general_bound(d.plan, d.L, inst.D_f, d.sigma);
  }

  std::optional<ExperimentResult> mc;
  auto results = [&]() -> const ExperimentResult& {
    if (!mc) mc = run_experiment(config);
    return *mc;
  };

  std::vector<Certificate> out;
  for (const std::string& claim : claims) {
    if (claim == "expectation") {
      if (two_phase) throw ConfigError(0, "claim 'expectation' applies to single-run algorithms");
      const std::string desc = "E||grad f(x_R)||^2 <= L * B" + std::string(inst.D_f_exact ? "" : " (D_f upper bound)");
      if (exact) {
        const double v = rsg_noiseless_expectation(spec, d.plan, d.dist, inst.x1,
                                                   [&](const Vector& x) { return spec.grad(x).squaredNorm(); });
        out.push_back(expectation_certificate(claim, desc, v, 0.0, grad_bound, true));
      } else {
        const Aggregate& a = results().aggregate;
        out.push_back(expectation_certificate(claim, desc, a.grad_norm_sq.mean, a.grad_norm_sq.std_error, grad_bound,
                                              false));
      }
    } else if (claim == "convex") {
      if (two_phase) throw ConfigError(0, "claim 'convex' applies to single-run algorithms");
      if (!spec.is_convex || !inst.D_X || !spec.f_star)
        throw ConfigError(0, "claim 'convex' needs a convex problem with known optimum");
      const double DX = *inst.D_X;
      double bound;
      if (zeroth) {
        if (*d.mu > DX / std::sqrt(d.n + 4.0))
          throw ConfigError(0, "claim 'convex' needs mu <= D_X / sqrt(n+4)");
        bound = convex_bound_zeroth_order(d.L, DX, d.D_tilde, d.sigma, d.N, d.n);
      } else {
        bound = constant_plan ? convex_bound_first_order(d.L, DX, d.D_tilde, d.sigma, d.N)
                              : rsg_general_convex_bound(d.plan, d.L, DX, d.sigma);
      }
      const std::string desc = "E[f(x_R) - f*] <= convex bound";
      if (exact) {
        const double fs = *spec.f_star;
        const double v = rsg_noiseless_expectation(spec, d.plan, d.dist, inst.x1,
                                                   [&](const Vector& x) { return spec.value(x) - fs; });
        out.push_back(expectation_certificate(claim, desc, v, 0.0, bound, true));
      } else {
        const Aggregate& a = results().aggregate;
        if (!a.f_gap) throw ConfigError(0, "claim 'convex': no successful replications");
        out.push_back(expectation_certificate(claim, desc, a.f_gap->mean, a.f_gap->std_error, bound, false));
      }
    } else if (claim == "markov") {
      if (two_phase) throw ConfigError(0, "claim 'markov' applies to single-run algorithms");
      for (double lambda : config.markov_lambdas) {
        const double thr = lambda * grad_bound;
        const std::string name = "markov[lambda=" + nlohmann::json(lambda).dump() + "]";
        const std::string desc = "P{||grad f(x_R)||^2 >= lambda L B} <= 1/lambda";
        if (exact) {
          const double v = rsg_noiseless_expectation(
              spec, d.plan, d.dist, inst.x1, [&](const Vector& x) { return spec.grad(x).squaredNorm() >= thr ? 1.0 : 0.0; });
          out.push_back(frequency_certificate(name, desc, v, 1.0 / lambda, 0, true));
        } else {
          const auto g = ok_values(results().rows);
          out.push_back(frequency_certificate(name, desc, fraction_at_least(g, thr), 1.0 / lambda,
                                              static_cast<long>(g.size()), false));
        }
      }
    } else if (claim == "deviation" || claim == "deviation_light_tail") {
      if (!two_phase) throw ConfigError(0, "claim '" + claim + "' applies to two-phase algorithms");
      DeviationBound db;
      if (claim == "deviation_light_tail") {
        if (zeroth) throw ConfigError(0, "claim 'deviation_light_tail' applies to two-rsg");
        db = deviation_threshold_2rsg_light_tail(d.L, br.B_N, d.sigma, d.T, d.S, config.deviation_lambda_light_tail);
      } else if (zeroth) {
        db = deviation_threshold_2rsgf(d.L, br.B_bar_N, d.sigma, inst.D_f, d.N, d.T, d.S, d.n, config.deviation_lambda);
      } else {
        db = deviation_threshold_2rsg(d.L, br.B_N, d.sigma, d.T, d.S, config.deviation_lambda);
      }
      const auto g = ok_values(results().rows);
      Certificate c = frequency_certificate(claim, "P{||grad f(x*)||^2 >= threshold} <= bound (threshold " +
                                                       nlohmann::json(db.threshold).dump() + ")",
                                            fraction_at_least(g, db.threshold), db.prob_bound,
                                            static_cast<long>(g.size()), false);
      if (db.vacuous) c.verdict = Verdict::pass;
      out.push_back(c);
    } else if (claim == "eps_lambda") {
      if (!two_phase) throw ConfigError(0, "claim 'eps_lambda' applies to two-phase algorithms");
      if (!config.epsilon || !config.Lambda) throw ConfigError(0, "claim 'eps_lambda' needs epsilon and Lambda");
      const auto g = ok_values(results().rows);
      out.push_back(frequency_certificate(claim, "P{||grad f(x*)||^2 > epsilon} <= Lambda",
                                          fraction_above(g, *config.epsilon), *config.Lambda,
                                          static_cast<long>(g.size()), false));
    }
  }
  return out;
}

}  // namespace randsg::cli
