#include "randsg/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace randsg::cli {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::rsg: return "rsg";
    case Algorithm::rsgf: return "rsgf";
    case Algorithm::two_rsg: return "two-rsg";
    case Algorithm::two_rsgf: return "two-rsgf";
    case Algorithm::trajectory_average: return "trajectory-average-baseline";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "rsg") return Algorithm::rsg;
  if (s == "rsgf") return Algorithm::rsgf;
  if (s == "two-rsg") return Algorithm::two_rsg;
  if (s == "two-rsgf") return Algorithm::two_rsgf;
  if (s == "trajectory-average-baseline") return Algorithm::trajectory_average;
  throw InputError("unknown algorithm '" + s + "'");
}

bool is_zeroth_order(Algorithm a) { return a == Algorithm::rsgf || a == Algorithm::two_rsgf; }
bool is_two_phase(Algorithm a) { return a == Algorithm::two_rsg || a == Algorithm::two_rsgf; }

const char* to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::quadratic: return "quadratic";
    case ProblemKind::least_squares: return "least_squares";
    case ProblemKind::sigmoid_svm: return "sigmoid_svm";
  }
  return "?";
}

ProblemKind problem_kind_from_string(const std::string& s) {
  if (s == "quadratic") return ProblemKind::quadratic;
  if (s == "least_squares") return ProblemKind::least_squares;
  if (s == "sigmoid_svm") return ProblemKind::sigmoid_svm;
  throw InputError("unknown problem '" + s + "'");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  int line;
};

double parse_double(const Entry& e, const std::string& key) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(e.line, "key '" + key + "' expects a number, got '" + e.value + "'");
  return v;
}

template <typename Int>
Int parse_int(const Entry& e, const std::string& key) {
  Int v{};
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(e.line, "key '" + key + "' expects an integer, got '" + e.value + "'");
  return v;
}

bool parse_bool(const Entry& e, const std::string& key) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ConfigError(e.line, "key '" + key + "' expects true or false, got '" + e.value + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_double_list(const Entry& e, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(parse_double(Entry{item, e.line}, key));
  if (out.empty()) throw ConfigError(e.line, "key '" + key + "' expects a comma-separated list of numbers");
  return out;
}

template <typename F>
auto enum_value(const Entry& e, const std::string& key, F&& convert) {
  try {
    return convert(e.value);
  } catch (const InputError& err) {
    throw ConfigError(e.line, "key '" + key + "': " + err.what());
  }
}

const std::vector<std::string> kKeys = {
    "problem", "dim", "problem_seed", "eigenvalues", "eig_min", "eig_max", "rotate",
    "ls_sparsity", "ls_noise_sd", "svm_samples", "svm_sparsity", "svm_lambda", "svm_label_flip",
    "init_radius", "algorithm", "stepsize", "iterations", "D_tilde", "noise", "sigma", "mu", "crn",
    "epsilon", "Lambda", "candidates", "post_samples", "light_tail_T", "selection", "recycle_xi",
    "replications", "seed", "threads", "out_dir", "plot_data", "timing", "retain_trajectory",
    "claims", "markov_lambdas", "deviation_lambda", "deviation_lambda_light_tail"};

const std::vector<std::string> kClaims = {"expectation", "convex", "markov", "deviation",
                                          "deviation_light_tail", "eps_lambda"};

void check(bool ok, int line, const std::string& msg) {
  if (!ok) throw ConfigError(line, msg);
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError(line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(line_no, "key '" + key + "' has no value");
    if (auto it = entries.find(key); it != entries.end())
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " +
                                     std::to_string(it->second.line) + ")");
    entries.emplace(key, Entry{value, line_no});
  }

  ExperimentConfig c;
  auto get = [&](const std::string& key, auto&& apply) {
    if (auto it = entries.find(key); it != entries.end()) apply(it->second, key);
  };
  auto is_auto = [](const Entry& e) { return e.value == "auto"; };

  get("problem", [&](const Entry& e, const std::string& k) { c.problem = enum_value(e, k, problem_kind_from_string); });
  get("dim", [&](const Entry& e, const std::string& k) { c.dim = parse_int<int>(e, k); });
  get("problem_seed", [&](const Entry& e, const std::string& k) { c.problem_seed = parse_int<std::uint64_t>(e, k); });
  get("eigenvalues", [&](const Entry& e, const std::string& k) { c.eigenvalues = parse_double_list(e, k); });
  get("eig_min", [&](const Entry& e, const std::string& k) { c.eig_min = parse_double(e, k); });
  get("eig_max", [&](const Entry& e, const std::string& k) { c.eig_max = parse_double(e, k); });
  get("rotate", [&](const Entry& e, const std::string& k) { c.rotate = parse_bool(e, k); });
  get("ls_sparsity", [&](const Entry& e, const std::string& k) { c.ls_sparsity = parse_double(e, k); });
  get("ls_noise_sd", [&](const Entry& e, const std::string& k) { c.ls_noise_sd = parse_double(e, k); });
  get("svm_samples", [&](const Entry& e, const std::string& k) { c.svm_samples = parse_int<int>(e, k); });
  get("svm_sparsity", [&](const Entry& e, const std::string& k) { c.svm_sparsity = parse_double(e, k); });
  get("svm_lambda", [&](const Entry& e, const std::string& k) { c.svm_lambda = parse_double(e, k); });
  get("svm_label_flip", [&](const Entry& e, const std::string& k) { c.svm_label_flip = parse_double(e, k); });
  get("init_radius", [&](const Entry& e, const std::string& k) { c.init_radius = parse_double(e, k); });
  get("algorithm", [&](const Entry& e, const std::string& k) { c.algorithm = enum_value(e, k, algorithm_from_string); });
  get("stepsize", [&](const Entry& e, const std::string& k) { c.stepsize = enum_value(e, k, stepsize_kind_from_string); });
  get("iterations", [&](const Entry& e, const std::string& k) {
    if (!is_auto(e)) c.iterations = parse_int<long long>(e, k);
  });
  get("D_tilde", [&](const Entry& e, const std::string& k) {
    if (!is_auto(e)) c.D_tilde = parse_double(e, k);
  });
  get("noise", [&](const Entry& e, const std::string& k) { c.noise = enum_value(e, k, noise_kind_from_string); });
  get("sigma", [&](const Entry& e, const std::string& k) { c.sigma = parse_double(e, k); });
  get("mu", [&](const Entry& e, const std::string& k) {
    if (!is_auto(e)) c.mu = parse_double(e, k);
  });
  get("crn", [&](const Entry& e, const std::string& k) { c.crn = parse_bool(e, k); });
  get("epsilon", [&](const Entry& e, const std::string& k) { c.epsilon = parse_double(e, k); });
  get("Lambda", [&](const Entry& e, const std::string& k) { c.Lambda = parse_double(e, k); });
  get("candidates", [&](const Entry& e, const std::string& k) {
    if (!is_auto(e)) c.candidates = parse_int<int>(e, k);
  });
  get("post_samples", [&](const Entry& e, const std::string& k) {
    if (!is_auto(e)) c.post_samples = parse_int<long long>(e, k);
  });
  get("light_tail_T", [&](const Entry& e, const std::string& k) { c.light_tail_T = parse_bool(e, k); });
  get("selection", [&](const Entry& e, const std::string& k) { c.selection = enum_value(e, k, selection_from_string); });
  get("recycle_xi", [&](const Entry& e, const std::string& k) { c.recycle_xi = parse_bool(e, k); });
  get("replications", [&](const Entry& e, const std::string& k) { c.replications = parse_int<int>(e, k); });
  get("seed", [&](const Entry& e, const std::string& k) { c.seed = parse_int<std::uint64_t>(e, k); });
  get("threads", [&](const Entry& e, const std::string& k) { c.threads = parse_int<unsigned>(e, k); });
  get("out_dir", [&](const Entry& e, const std::string&) { c.out_dir = e.value; });
  get("plot_data", [&](const Entry& e, const std::string& k) { c.plot_data = parse_bool(e, k); });
  get("timing", [&](const Entry& e, const std::string& k) { c.timing = parse_bool(e, k); });
  get("retain_trajectory", [&](const Entry& e, const std::string& k) { c.retain_trajectory = parse_bool(e, k); });
  get("claims", [&](const Entry& e, const std::string& k) {
    c.claims = split_list(e.value);
    for (const auto& claim : c.claims)
      check(std::find(kClaims.begin(), kClaims.end(), claim) != kClaims.end(), e.line,
            "key '" + k + "': unknown claim '" + claim + "'");
  });
  get("markov_lambdas", [&](const Entry& e, const std::string& k) { c.markov_lambdas = parse_double_list(e, k); });
  get("deviation_lambda", [&](const Entry& e, const std::string& k) { c.deviation_lambda = parse_double(e, k); });
  get("deviation_lambda_light_tail",
      [&](const Entry& e, const std::string& k) { c.deviation_lambda_light_tail = parse_double(e, k); });

  auto line_of = [&](const std::string& key) {
    auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
  };
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& err) {
    // validate() reports the offending key first in its message.
    // When that key is absent, point at another key named in the message.
    const std::string msg = err.what();
    const auto colon = msg.find(':');
    int line = line_of(msg.substr(0, colon));
    if (line == 0) {
      for (const auto& [key, entry] : entries) {
        const auto at = msg.find(key, colon);
        const auto end = at + key.size();
        const bool word = at != std::string::npos && !std::isalnum(static_cast<unsigned char>(msg[at - 1])) &&
                          msg[at - 1] != '_' && (end == msg.size() || (!std::isalnum(static_cast<unsigned char>(msg[end])) && msg[end] != '_'));
        if (word && (line == 0 || entry.line < line)) line = entry.line;
      }
    }
    throw ConfigError(line, msg);
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& msg) { throw InputError(key + ": " + msg); };
  if (dim < 1) fail("dim", "must be >= 1");
  if (!eigenvalues.empty()) {
    if (static_cast<int>(eigenvalues.size()) != dim) fail("eigenvalues", "length must equal dim");
    for (double e : eigenvalues)
      if (e < 0.0) fail("eigenvalues", "must be nonnegative");
  }
  if (!(eig_min >= 0.0 && eig_max > 0.0 && eig_min <= eig_max)) fail("eig_min", "need 0 <= eig_min <= eig_max, eig_max > 0");
  if (!(ls_sparsity > 0.0 && ls_sparsity <= 1.0)) fail("ls_sparsity", "must lie in (0, 1]");
  if (ls_noise_sd < 0.0) fail("ls_noise_sd", "must be >= 0");
  if (svm_samples < 1) fail("svm_samples", "must be >= 1");
  if (!(svm_sparsity > 0.0 && svm_sparsity <= 1.0)) fail("svm_sparsity", "must lie in (0, 1]");
  if (!(svm_lambda > 0.0)) fail("svm_lambda", "must be positive");
  if (!(svm_label_flip >= 0.0 && svm_label_flip < 0.5)) fail("svm_label_flip", "must lie in [0, 0.5)");
  if (!(init_radius > 0.0)) fail("init_radius", "must be positive");
  if (iterations && *iterations < 1) fail("iterations", "must be >= 1");
  if (D_tilde && !(*D_tilde > 0.0)) fail("D_tilde", "must be positive");
  if (sigma < 0.0) fail("sigma", "must be >= 0");
  if (noise == NoiseKind::none && sigma != 0.0) fail("sigma", "must be 0 when noise = none");
  if (noise != NoiseKind::none && sigma == 0.0) fail("noise", "sigma = 0 requires noise = none");
  if (mu && !(*mu > 0.0)) fail("mu", "must be positive");
  if (epsilon && !(*epsilon > 0.0)) fail("epsilon", "must be positive");
  if (Lambda && !(*Lambda > 0.0 && *Lambda < 1.0)) fail("Lambda", "must lie in (0, 1)");
  if (candidates && *candidates < 1) fail("candidates", "must be >= 1");
  if (post_samples && *post_samples < 1) fail("post_samples", "must be >= 1");
  if (replications < 1) fail("replications", "must be >= 1");
  for (double l : markov_lambdas)
    if (!(l > 0.0)) fail("markov_lambdas", "must be positive");
  if (!(deviation_lambda > 0.0)) fail("deviation_lambda", "must be positive");
  if (!(deviation_lambda_light_tail > 0.0)) fail("deviation_lambda_light_tail", "must be positive");

  if (is_zeroth_order(algorithm) && stepsize != StepsizeKind::constant)
    fail("stepsize", "zeroth-order methods support only the constant policy");
  if (stepsize == StepsizeKind::custom) fail("stepsize", "custom plans are library-only");
  if (is_two_phase(algorithm)) {
    if (!iterations && !epsilon) fail("iterations", "two-phase runs need iterations or epsilon");
    if (!candidates && !Lambda) fail("candidates", "two-phase runs need candidates or Lambda");
    if (!post_samples && !(epsilon && Lambda)) fail("post_samples", "two-phase runs need post_samples or epsilon and Lambda");
    if (stepsize != StepsizeKind::constant) fail("stepsize", "two-phase runs use the constant policy");
  } else {
    if (!iterations) fail("iterations", "required for single-run algorithms");
  }
  if (light_tail_T && algorithm != Algorithm::two_rsg) fail("light_tail_T", "applies only to two-rsg");
  if (problem == ProblemKind::sigmoid_svm && selection == Selection::function_value)
    fail("selection", "function_value selection is documented only for convex problems");
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  auto opt = [](const auto& o) -> nlohmann::ordered_json {
    if (o) return *o;
    return "auto";
  };
  j["problem"] = to_string(problem);
  j["dim"] = dim;
  j["problem_seed"] = problem_seed;
  j["eigenvalues"] = eigenvalues;
  j["eig_min"] = eig_min;
  j["eig_max"] = eig_max;
  j["rotate"] = rotate;
  j["ls_sparsity"] = ls_sparsity;
  j["ls_noise_sd"] = ls_noise_sd;
  j["svm_samples"] = svm_samples;
  j["svm_sparsity"] = svm_sparsity;
  j["svm_lambda"] = svm_lambda;
  j["svm_label_flip"] = svm_label_flip;
  j["init_radius"] = init_radius;
  j["algorithm"] = to_string(algorithm);
  j["stepsize"] = to_string(stepsize);
  j["iterations"] = opt(iterations);
  j["D_tilde"] = opt(D_tilde);
  j["noise"] = to_string(noise);
  j["sigma"] = sigma;
  j["mu"] = opt(mu);
  j["crn"] = crn;
  j["epsilon"] = epsilon ? nlohmann::ordered_json(*epsilon) : nlohmann::ordered_json(nullptr);
  j["Lambda"] = Lambda ? nlohmann::ordered_json(*Lambda) : nlohmann::ordered_json(nullptr);
  j["candidates"] = opt(candidates);
  j["post_samples"] = opt(post_samples);
  j["light_tail_T"] = light_tail_T;
  j["selection"] = to_string(selection);
  j["recycle_xi"] = recycle_xi;
  j["replications"] = replications;
  j["seed"] = seed;
  j["plot_data"] = plot_data;
  j["timing"] = timing;
  j["retain_trajectory"] = retain_trajectory;
  j["claims"] = claims;
  j["markov_lambdas"] = markov_lambdas;
  j["deviation_lambda"] = deviation_lambda;
  j["deviation_lambda_light_tail"] = deviation_lambda_light_tail;
  return j;
}

}  // namespace randsg::cli
