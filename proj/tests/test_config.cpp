#include <doctest.h>

#include <string>

#include "randsg/cli/config.hpp"

using namespace randsg;
using namespace randsg::cli;

namespace {

int error_line(const std::string& text) {
  try {
    ExperimentConfig::parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("defaults and a minimal file") {
  const auto c = ExperimentConfig::parse("iterations = 50\n");
  CHECK(c.problem == ProblemKind::quadratic);
  CHECK(c.dim == 10);
  CHECK(c.algorithm == Algorithm::rsg);
  CHECK(*c.iterations == 50);
  CHECK_FALSE(c.D_tilde.has_value());
  CHECK(c.noise == NoiseKind::bounded_variance);
  CHECK(c.sigma == 1.0);
  CHECK(c.replications == 100);
  CHECK(c.markov_lambdas == std::vector<double>{2.0, 4.0});
}

TEST_CASE("every key parses") {
  const std::string text = R"(# full example
problem = least_squares
dim = 4
problem_seed = 7
eigenvalues = 0.1, 0.2, 0.3, 0.4
eig_min = 0.1
eig_max = 0.4
rotate = false
ls_sparsity = 0.3
ls_noise_sd = 0.2
svm_samples = 100
svm_sparsity = 0.9
svm_lambda = 0.05
svm_label_flip = 0.2
init_radius = 2.5
algorithm = two-rsgf
stepsize = constant
iterations = auto
D_tilde = 1.5
noise = light_tail   # trailing comment
sigma = 0.5
mu = auto
crn = false
epsilon = 0.5
Lambda = 0.25
candidates = auto
post_samples = 12
light_tail_T = false
selection = function_value
recycle_xi = true
replications = 30
seed = 18446744073709551615
threads = 0
out_dir = some/dir
plot_data = true
timing = true
retain_trajectory = true
claims = deviation, eps_lambda
markov_lambdas = 3
deviation_lambda = 9
deviation_lambda_light_tail = 2.5
)";
  const auto c = ExperimentConfig::parse(text);
  CHECK(c.problem == ProblemKind::least_squares);
  CHECK(c.eigenvalues.size() == 4);
  CHECK_FALSE(c.rotate);
  CHECK(c.algorithm == Algorithm::two_rsgf);
  CHECK_FALSE(c.iterations.has_value());
  CHECK(*c.D_tilde == 1.5);
  CHECK(c.noise == NoiseKind::light_tail);
  CHECK_FALSE(c.crn);
  CHECK(*c.post_samples == 12);
  CHECK(c.selection == Selection::function_value);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.out_dir == "some/dir");
  CHECK(c.claims == std::vector<std::string>{"deviation", "eps_lambda"});
  CHECK(c.markov_lambdas == std::vector<double>{3.0});
  // Every documented key appears in the file above.
  for (const auto& key : config_keys()) CHECK(text.find("\n" + key + " =") != std::string::npos);
}

TEST_CASE("malformed files report the offending line") {
  CHECK(error_line("iterations = 5\nbogus = 1\n") == 2);
  CHECK(error_line("iterations = 5\n\n# c\niterations = 6\n") == 4);
  CHECK(error_line("dim = ten\niterations = 5\n") == 1);
  CHECK(error_line("iterations = 5\nrotate = yes\n") == 2);
  CHECK(error_line("iterations = 5\nalgorithm = sgd\n") == 2);
  CHECK(error_line("iterations = 5\njust text\n") == 2);
  CHECK(error_line("iterations = 5\nsigma =\n") == 2);
  CHECK(error_line("iterations = 5\nclaims = expectation, nonsense\n") == 2);
  CHECK(error_line("iterations = 5\nsigma = 1e400\n") == 2);
}

TEST_CASE("cross-field rules") {
  CHECK(error_line("algorithm = rsg\n") == 0);
  CHECK(error_line("iterations = 5\nnoise = none\n") > 0);
  CHECK(error_line("iterations = 5\nsigma = 0\n") == 2);
  CHECK(error_line("iterations = 5\nalgorithm = rsgf\nstepsize = increasing\n") == 3);
  CHECK(error_line("iterations = 5\nstepsize = custom\n") == 2);
  CHECK(error_line("algorithm = two-rsg\niterations = 5\ncandidates = 2\n") == 0);
  CHECK(error_line("algorithm = two-rsg\nepsilon = 1\nLambda = 0.5\n") == -1);
  CHECK(error_line("iterations = 5\nLambda = 1\n") == 2);
  CHECK(error_line("iterations = 5\nlight_tail_T = true\n") == 2);
  CHECK(error_line("iterations = 5\nproblem = sigmoid_svm\nselection = function_value\n") == 3);
  CHECK(error_line("iterations = 5\ndim = 3\neigenvalues = 1, 2\n") == 3);
}

TEST_CASE("configuration echo") {
  const auto c = ExperimentConfig::parse("iterations = 5\nseed = 3\nout_dir = x\nthreads = 4\n");
  const auto j = c.to_json();
  CHECK(j["iterations"] == 5);
  CHECK(j["seed"] == 3);
  CHECK(j["D_tilde"] == "auto");
  CHECK_FALSE(j.contains("out_dir"));
  CHECK_FALSE(j.contains("threads"));
  std::size_t keys = 0;
  for (const auto& key : config_keys()) keys += j.contains(key);
  CHECK(keys == config_keys().size() - 2);
}

TEST_CASE("missing file") { CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/file.cfg"), ConfigError); }
