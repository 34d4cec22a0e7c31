#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "randsg/errors.hpp"
#include "randsg/rng.hpp"
#include "randsg/stepsize.hpp"

using namespace randsg;

namespace {

// chi-square 0.999 quantiles for 1..7 degrees of freedom.
constexpr std::array<double, 7> kChi2Crit{10.827566170662733, 13.815510557964274, 16.26623619623813,
                                          18.46682695290317,  20.515005652432873, 22.457744484825323,
                                          24.321886347856854};

void check_normalized(const TerminationDistribution& d) {
  double s = 0.0;
  for (double p : d.probs) {
    CHECK(p >= 0.0);
    s += p;
  }
  CHECK(std::abs(s - 1.0) <= 1e-12);
  CHECK(d.cdf.back() == 1.0);
}

}  // namespace

TEST_CASE("constant first-order stepsizes") {
  for (double g : constant_plan_first_order(2.0, 5.0, 0.0, 10).gammas) CHECK(g == 0.5);
  const auto p = constant_plan_first_order(1.0, 1.0, 1.0, 100);
  CHECK(p.N() == 100);
  CHECK(p.gammas[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(constant_plan_first_order(10.0, 2.0, 0.5, 4).gammas[3] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(constant_plan_first_order(0.0, 1.0, 1.0, 4), InputError);
  CHECK_THROWS_AS(constant_plan_first_order(1.0, -1.0, 1.0, 4), InputError);
}

TEST_CASE("increasing and decreasing stepsizes") {
  for (double g : increasing_plan(1.0, 1.0, 0.0, 5).gammas) CHECK(g == 1.0);
  const auto inc = increasing_plan(1.0, 1.0, 1.0, 4);
  const std::array<double, 4> expect{0.25, 0.3535533905932738, 0.4330127018922193, 0.5};
  for (int k = 0; k < 4; ++k) CHECK(inc.gammas[k] == doctest::Approx(expect[k]).epsilon(1e-12));
  const auto dec = decreasing_plan(1.0, 1.0, 1.0, 16);
  CHECK(dec.gammas.front() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dec.gammas.back() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("constant zeroth-order stepsizes") {
  CHECK(constant_plan_zeroth_order(1.0, 1.0, 0.0, 10, 12).gammas[0] == doctest::Approx(0.015625).epsilon(1e-15));
  CHECK(constant_plan_zeroth_order(1.0, 1.0, 1.0, 9, 5).gammas[0] == doctest::Approx(1.0 / 36).epsilon(1e-15));
  RngStream rng(1, 0);
  for (int t = 0; t < 200; ++t) {
    const double L = 0.01 + 10 * rng.uniform(), D = 0.01 + 5 * rng.uniform(), s = 3 * rng.uniform();
    const int N = 1 + static_cast<int>(rng.below(1000)), n = 1 + static_cast<int>(rng.below(50));
    CHECK(constant_plan_zeroth_order(L, D, s, N, n).gammas[0] < 1.0 / (2.0 * (n + 4) * L));
  }
}

TEST_CASE("first-order termination distribution") {
  for (int N : {1, 4, 16}) {
    const auto d = termination_distribution_first_order(constant_plan_first_order(1.0, 1.0, 1.0, N), 1.0);
    for (double p : d.probs) CHECK(p == 1.0 / N);
  }
  const auto d = termination_distribution_first_order(StepsizePlan::custom({0.5, 1.0}), 1.0);
  CHECK(d.probs[0] == doctest::Approx(3.0 / 7).epsilon(1e-15));
  CHECK(d.probs[1] == doctest::Approx(4.0 / 7).epsilon(1e-15));
}

TEST_CASE("stepsize at 2/L is rejected with the offending index") {
  try {
    termination_distribution_first_order(StepsizePlan::custom({0.5, 2.0, 0.1}), 1.0);
    FAIL("expected ValidityError");
  } catch (const ValidityError& e) {
    CHECK(std::string(e.what()).find("gamma_2") != std::string::npos);
  }
}

TEST_CASE("zeroth-order termination distribution") {
  for (int N : {1, 4, 16}) {
    const auto d = termination_distribution_zeroth_order(constant_plan_zeroth_order(1.0, 1.0, 1.0, N, 3), 1.0, 3);
    for (double p : d.probs) CHECK(p == 1.0 / N);
  }
  const auto d = termination_distribution_zeroth_order(StepsizePlan::custom({1.0 / 32, 1.0 / 64}), 1.0, 4);
  CHECK(d.probs[0] == doctest::Approx(0.015625 / 0.02734375).epsilon(1e-14));
  CHECK(d.probs[1] == doctest::Approx(0.01171875 / 0.02734375).epsilon(1e-14));
  CHECK_THROWS_AS(termination_distribution_zeroth_order(StepsizePlan::custom({0.1}), 1.0, 4), ValidityError);
}

TEST_CASE("random plans give normalized distributions") {
  RngStream rng(2, 0);
  for (int t = 0; t < 300; ++t) {
    const double L = 0.1 + 5 * rng.uniform();
    const int N = 1 + static_cast<int>(rng.below(40));
    std::vector<double> g(N);
    for (double& x : g) x = rng.uniform_open() * 1.999 / L;
    check_normalized(termination_distribution_first_order(StepsizePlan::custom(g), L));
    const int n = 1 + static_cast<int>(rng.below(20));
    for (double& x : g) x = rng.uniform_open() * 0.4999 / ((n + 4) * L);
    check_normalized(termination_distribution_zeroth_order(StepsizePlan::custom(g), L, n));
  }
}

TEST_CASE("increasing plan has nondecreasing weights") {
  for (int N : {4, 50, 400}) {
    const auto plan = increasing_plan(2.0, 0.7, 1.3, N);
    const auto d = termination_distribution_first_order(plan, 2.0);
    for (int k = 1; k < N; ++k)
      if (plan.gammas[k] <= 0.5) CHECK(d.probs[k] >= d.probs[k - 1]);
  }
}

TEST_CASE("sample_R edge cases") {
  RngStream rng(3, 0);
  const auto one = TerminationDistribution::from_weights({1.0});
  for (int i = 0; i < 10; ++i) CHECK(sample_R(one, rng) == 1);
  const auto d01 = TerminationDistribution::from_weights({0.0, 1.0});
  for (double u : {0.0, 1e-300, 0.5, 1.0}) CHECK(sample_R_from_uniform(d01, u) == 2);
  const auto half = TerminationDistribution::from_weights({1.0, 1.0});
  // A draw exactly on a boundary goes to the lower index.
  CHECK(sample_R_from_uniform(half, 0.5) == 1);
  CHECK_THROWS_AS(TerminationDistribution::from_weights({0.0, 0.0}), ValidityError);
}

TEST_CASE("sample_R frequencies for a uniform distribution") {
  RngStream rng(4, 0);
  const auto d = termination_distribution_first_order(constant_plan_first_order(1.0, 1.0, 1.0, 4), 1.0);
  std::array<int, 4> counts{};
  constexpr int M = 100000;
  for (int i = 0; i < M; ++i) ++counts[sample_R(d, rng) - 1];
  for (int c : counts) CHECK(std::abs(c / double(M) - 0.25) <= 0.006);
}

TEST_CASE("sample_R agrees with a rejection sampler") {
  RngStream rng(5, 0), ref(5, 1);
  for (int N = 2; N <= 8; ++N) {
    std::vector<double> w(N);
    for (double& x : w) x = 0.05 + rng.uniform();
    const auto d = TerminationDistribution::from_weights(w);
    const double wmax = *std::max_element(w.begin(), w.end());
    constexpr int M = 100000;
    std::vector<double> a(N, 0.0), b(N, 0.0);
    for (int i = 0; i < M; ++i) {
      a[sample_R(d, rng) - 1] += 1;
      for (;;) {
        const auto k = ref.below(N);
        if (ref.uniform() * wmax < w[k]) {
          b[k] += 1;
          break;
        }
      }
    }
    // Two-sample chi-square homogeneity statistic with N - 1 degrees of freedom.
    double chi2 = 0.0;
    for (int k = 0; k < N; ++k) {
      const double e = (a[k] + b[k]) / 2.0;
      chi2 += (a[k] - e) * (a[k] - e) / e + (b[k] - e) * (b[k] - e) / e;
    }
    CAPTURE(N);
    CHECK(chi2 < kChi2Crit[N - 2]);
  }
}
