#include "randsg/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "randsg/errors.hpp"
#include "randsg/rsgf.hpp"

namespace randsg::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join_R(const std::vector<int>& R) {
  std::string s;
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(R[i]);
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw InputError("bad number in CSV: " + s);
  return v;
}

nlohmann::ordered_json estimate_json(const Estimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"count", e.count}};
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ReplicationRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.replication << ',' << r.seed << ',' << join_R(r.R) << ',' << format_double(r.grad_norm_sq) << ','
       << (r.f_gap ? format_double(*r.f_gap) : "") << ',' << r.oracle_calls << ',' << format_double(r.wall_ms)
       << ',' << r.status << '\n';
  }
}

std::vector<ReplicationRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw InputError("CSV header mismatch");
  std::vector<ReplicationRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw InputError("CSV row has " + std::to_string(f.size()) + " fields");
    ReplicationRow r;
    r.replication = std::stoull(f[0]);
    r.seed = std::stoull(f[1]);
    for (const auto& part : split(f[2], ';'))
      if (!part.empty()) r.R.push_back(std::stoi(part));
    r.grad_norm_sq = parse_double(f[3]);
    if (!f[4].empty()) r.f_gap = parse_double(f[4]);
    r.oracle_calls = std::stoll(f[5]);
    r.wall_ms = parse_double(f[6]);
    r.status = f[7];
    r.ok = r.status == "ok";
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_plot_csv(std::ostream& os, const std::vector<ReplicationRow>& rows) {
  os << "replication,cumulative_oracle_calls,running_mean_grad_norm_sq\n";
  long long budget = 0;
  double sum = 0.0;
  long count = 0;
  for (const auto& r : rows) {
    budget += r.oracle_calls;
    if (r.ok) {
      sum += r.grad_norm_sq;
      ++count;
    }
    os << r.replication << ',' << budget << ',' << (count ? format_double(sum / count) : "nan") << '\n';
  }
}

nlohmann::ordered_json aggregate_json(const Aggregate& a) {
  nlohmann::ordered_json j;
  j["ok_count"] = a.ok_count;
  j["failed_count"] = a.failed_count;
  j["grad_norm_sq"] = estimate_json(a.grad_norm_sq);
  j["grad_norm_sq_variance"] = a.grad_norm_sq_variance;
  j["f_gap"] = a.f_gap ? estimate_json(*a.f_gap) : nlohmann::ordered_json(nullptr);
  j["f_gap_variance"] = optional_json(a.f_gap_variance);
  j["failure_frequency"] = optional_json(a.failure_frequency);
  j["mean_oracle_calls"] = a.mean_oracle_calls;
  j["mean_min_gradnorm"] = optional_json(a.mean_min_gradnorm);
  return j;
}

nlohmann::ordered_json bounds_json(const BoundReport& b) {
  nlohmann::ordered_json j;
  j["D_f"] = b.D_f;
  j["B_N"] = b.B_N;
  j["B_bar_N"] = b.B_bar_N;
  j["D_N"] = b.D_N;
  auto& t = j["thresholds"] = nlohmann::ordered_json::array();
  for (const auto& d : b.thresholds)
    t.push_back({{"name", d.name},
                 {"lambda", d.lambda},
                 {"threshold", d.threshold},
                 {"prob_bound", d.prob_bound},
                 {"vacuous", d.vacuous}});
  j["first_order_budget"] = b.first_order_total;
  j["zeroth_order_budget"] = b.zeroth_order_total;
  return j;
}

nlohmann::ordered_json derived_json(const Derived& d, const Instance& inst) {
  nlohmann::ordered_json j;
  j["n"] = d.n;
  j["L"] = d.L;
  j["sigma"] = d.sigma;
  j["D_f"] = inst.D_f;
  j["D_f_exact"] = inst.D_f_exact;
  j["D_X"] = optional_json(inst.D_X);
  j["f_star"] = optional_json(inst.spec.f_star);
  j["D_tilde"] = d.D_tilde;
  j["N"] = d.N;
  j["S"] = d.S;
  j["T"] = d.T;
  j["mu"] = optional_json(d.mu);
  j["stepsize"] = to_string(d.plan.kind);
  j["gamma_1"] = d.plan.gammas.empty() ? 0.0 : d.plan.gammas.front();
  return j;
}

nlohmann::ordered_json result_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["config"] = r.config.to_json();
  j["derived"] = derived_json(r.derived, r.instance);
  j["statistics"] = aggregate_json(r.aggregate);
  j["bounds"] = bounds_json(r.bounds);
  return j;
}

nlohmann::ordered_json certificates_json(const ExperimentConfig& config, const std::vector<Certificate>& certs) {
  nlohmann::ordered_json j;
  j["config"] = config.to_json();
  auto& arr = j["certificates"] = nlohmann::ordered_json::array();
  for (const auto& c : certs)
    arr.push_back({{"claim", c.claim},
                   {"description", c.description},
                   {"empirical", c.empirical},
                   {"std_error", c.std_error},
                   {"bound", c.bound},
                   {"slack", c.slack},
                   {"exact", c.exact},
                   {"verdict", to_string(c.verdict)}});
  return j;
}

void write_outputs(const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(result.config.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "results.csv", std::ios::binary);
    write_csv(os, result.rows);
    if (!os) throw Error("cannot write " + (dir / "results.csv").string());
  }
  {
    std::ofstream os(dir / "aggregate.json", std::ios::binary);
    os << result_json(result).dump(2) << '\n';
    if (!os) throw Error("cannot write " + (dir / "aggregate.json").string());
  }
  if (result.config.plot_data) {
    std::ofstream os(dir / "plot.csv", std::ios::binary);
    write_plot_csv(os, result.rows);
    if (!os) throw Error("cannot write " + (dir / "plot.csv").string());
  }
}

nlohmann::ordered_json compute_params(const ParamsQuery& q) {
  if (!(q.epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!(q.Lambda > 0.0 && q.Lambda < 1.0)) throw InputError("Lambda must lie in (0, 1)");
  if (!(q.L > 0.0)) throw InputError("L must be positive");
  if (!(q.D_f > 0.0)) throw InputError("D_f must be positive");
  if (!(q.sigma >= 0.0)) throw InputError("sigma must be non-negative");
  const double Dt = q.D_tilde.value_or(q.D_f);
  if (!(Dt > 0.0)) throw InputError("D_tilde must be positive");
  const bool zeroth = q.order == "zeroth";
  if (!zeroth && q.order != "first") throw InputError("order must be 'first' or 'zeroth'");
  if (zeroth && q.light_tail) throw InputError("light-tail sample size applies to first order only");
  if (q.n < 1) throw InputError("n must be at least 1");

  const int S = params_S(q.Lambda);
  long long N, T;
  if (zeroth) {
    N = params_N_zeroth_order(q.epsilon, q.L, q.D_f, Dt, q.sigma, q.n);
    T = params_T_zeroth_order(q.epsilon, q.Lambda, q.sigma, S, q.n);
  } else {
    N = params_N_first_order(q.epsilon, q.L, q.D_f, Dt, q.sigma);
    T = q.light_tail ? params_T_light_tail(q.epsilon, q.Lambda, q.sigma, S)
                     : params_T_first_order(q.epsilon, q.Lambda, q.sigma, S);
  }
  nlohmann::ordered_json j;
  j["order"] = q.order;
  j["S"] = S;
  j["N"] = N;
  j["T"] = T;
  if (zeroth) j["mu"] = N <= 100'000'000 ? nlohmann::ordered_json(choose_mu(q.D_f, q.n, static_cast<int>(N)))
                                         : nlohmann::ordered_json(nullptr);
  j["total_calls"] = budget_totals(S, N, T, zeroth ? BudgetOrder::zeroth : BudgetOrder::first);
  return j;
}

std::string problem_catalog() {
  return "quadratic      f(x) = 1/2 x'Ax with A = Q diag(spectrum) Q', Q Haar orthogonal\n"
         "               keys: dim, eigenvalues | eig_min, eig_max, rotate, problem_seed\n"
         "               convex, f* = 0, L = max eigenvalue\n"
         "least_squares  f(x) = E(<x,u> - v)^2 with sparse uniform features u, v = <x_bar,u> + noise\n"
         "               keys: dim, ls_sparsity, ls_noise_sd, problem_seed\n"
         "               convex, f* = ls_noise_sd^2, L = 2 lambda_max(E uu')\n"
         "sigmoid_svm    f(x) = mean_i [1 - tanh(v_i <x,u_i>)] + lambda ||x||^2 over a fixed sample\n"
         "               keys: dim, svm_samples, svm_sparsity, svm_lambda, svm_label_flip, problem_seed\n"
         "               nonconvex, f* unknown\n";
}

}  // namespace randsg::cli
