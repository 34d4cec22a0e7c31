#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "randsg/cli/experiment.hpp"
#include "randsg/cli/report.hpp"
#include "randsg/errors.hpp"

namespace {

enum Exit : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kInconclusive = 3, kRuntimeError = 4 };

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Configuration file")->required();
  cmd->add_option("--seed", o.seed, "Master seed (overrides the file)");
  cmd->add_option("--out", o.out, "Output directory (overrides the file)");
  cmd->add_option("--threads", o.threads, "Worker threads, 0 for all cores");
}

randsg::cli::ExperimentConfig load(const Overrides& o) {
  auto config = randsg::cli::ExperimentConfig::load(o.config_path);
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.out_dir = *o.out;
  if (o.threads) config.threads = *o.threads;
  config.validate();
  return config;
}

int cmd_run(const Overrides& o) {
  const auto config = load(o);
  const auto result = randsg::cli::run_experiment(config);
  randsg::cli::write_outputs(result);
  const auto& a = result.aggregate;
  std::printf("replications %ld ok, %ld failed; mean ||grad f||^2 = %s (se %s)\n", a.ok_count, a.failed_count,
              randsg::cli::format_double(a.grad_norm_sq.mean).c_str(),
              randsg::cli::format_double(a.grad_norm_sq.std_error).c_str());
  return kOk;
}

int cmd_verify(const Overrides& o) {
  const auto config = load(o);
  const auto certs = randsg::cli::verify_bounds(config);
  std::cout << randsg::cli::certificates_json(config, certs).dump(2) << '\n';
  bool failed = false, inconclusive = false;
  for (const auto& c : certs) {
    failed |= c.verdict == randsg::cli::Verdict::fail;
    inconclusive |= c.verdict == randsg::cli::Verdict::inconclusive;
  }
  if (failed) return kVerifyFailed;
  if (inconclusive) return kInconclusive;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized stochastic gradient methods: experiments, bound checks and parameter calculator"};
  app.require_subcommand(1);

  Overrides run_opts, verify_opts;
  auto* run = app.add_subcommand("run", "Run replications and write results.csv and aggregate.json");
  add_common(run, run_opts);
  auto* verify = app.add_subcommand("verify-bounds", "Check empirical statistics against the bounds");
  add_common(verify, verify_opts);

  randsg::cli::ParamsQuery q;
  std::optional<double> D_tilde;
  auto* params = app.add_subcommand("params", "Compute S, N and T for an (epsilon, Lambda) target");
  params->add_option("--epsilon", q.epsilon, "Target for ||grad f||^2")->required();
  params->add_option("--Lambda", q.Lambda, "Allowed failure probability in (0, 1)")->required();
  params->add_option("--L", q.L, "Lipschitz constant of the gradient")->required();
  params->add_option("--D_f", q.D_f, "sqrt(2 (f(x1) - f*) / L)")->required();
  params->add_option("--D_tilde", D_tilde, "Stepsize scale (default D_f)");
  params->add_option("--sigma", q.sigma, "Oracle noise level")->required();
  params->add_option("--order", q.order, "Oracle order (default first)")->check(CLI::IsMember({"first", "zeroth"}));
  params->add_option("--n", q.n, "Dimension, required for zeroth order");
  params->add_flag("--light-tail", q.light_tail, "Use the light-tail sample size T'");

  app.add_subcommand("list-problems", "Describe the built-in test problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*verify) return cmd_verify(verify_opts);
    if (*params) {
      q.D_tilde = D_tilde;
      std::cout << randsg::cli::compute_params(q).dump(2) << '\n';
      return kOk;
    }
    std::cout << randsg::cli::problem_catalog();
    return kOk;
  } catch (const randsg::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
