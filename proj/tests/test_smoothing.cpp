#include <doctest.h>

#include <cmath>
#include <vector>

#include "randsg/errors.hpp"
#include "randsg/problems.hpp"
#include "randsg/smoothing.hpp"
#include "test_util.hpp"

using namespace randsg;
using testutil::vec;

namespace {

SmoothedFunctionHandle handle_for(const ProblemSpec& p, double mu, int samples = 10000) {
  return {p, {mu, p.n}, samples};
}

SigmoidSvmProblem small_svm(int n) {
  RngStream rng(21, 0);
  return make_sigmoid_svm(n, 200, 0.5, 0.01, 0.1, rng);
}

}  // namespace

TEST_CASE("two-point estimator on hand-evaluated inputs") {
  CHECK(gmu_estimator(7.0, 7.0, vec({0.3, -2.0}), 0.1) == Vector::Zero(2));
  CHECK(gmu_estimator(1.0, 0.0, testutil::unit(3, 0), 0.5) == vec({2, 0, 0}));
  // f = 1/2 ||x||^2 at e1 along e2 with mu = 0.2
  const Vector g = gmu_estimator(0.52, 0.5, testutil::unit(2, 1), 0.2);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(gmu_estimator(1, 0, vec({1}), 0.0), InputError);
  CHECK_THROWS_AS(gmu_estimator(1, 0, vec({1}), -1.0), InputError);
}

TEST_CASE("smoothed value of a constant is exact") {
  RngStream rng(1, 0);
  const auto r = smoothed_value(handle_for(testutil::constant(3, 2.5), 0.7, 100), vec({1, 2, 3}), rng);
  CHECK(r.mean == 2.5);
  CHECK(r.std_error == 0.0);
  const auto g = smoothed_gradient(handle_for(testutil::constant(3, 2.5), 0.7, 100), vec({1, 2, 3}), rng);
  CHECK(g.mean == Vector::Zero(3));
}

TEST_CASE("smoothed value of the sphere at the origin") {
  RngStream rng(2, 0);
  const auto r = smoothed_value(handle_for(testutil::sphere(2), 0.1, 100000), Vector::Zero(2), rng);
  CHECK(std::abs(r.mean - 0.01) <= 4.0 * r.std_error);
}

TEST_CASE("smoothed quadratic matches the trace formula") {
  RngStream prng(3, 0), rng(3, 1);
  const auto q = make_quadratic(std::vector<double>{0.2, 0.5, 1.0, 3.0}, prng);
  const auto h = handle_for(q.spec(), 0.3, 100000);
  for (int i = 0; i < 3; ++i) {
    const Vector x = rng.normal_vector(4);
    const auto v = smoothed_value(h, x, rng);
    CHECK(std::abs(v.mean - q.smoothed_value(x, 0.3)) <= 4.0 * v.std_error);
    const auto g = smoothed_gradient(h, x, rng);
    const Vector exact = q.grad(x);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(g.mean[j] - exact[j]) <= 4.0 * g.std_error[j]);
  }
}

TEST_CASE("smoothed SVM value is self-consistent") {
  const auto svm = small_svm(5);
  RngStream rng(4, 0);
  const Vector x = rng.normal_vector(5);
  const auto a = smoothed_value(handle_for(svm.spec(), 0.2, 10000), x, rng);
  const auto b = smoothed_value(handle_for(svm.spec(), 0.2, 100000), x, rng);
  CHECK(std::abs(a.mean - b.mean) <= 4.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("smoothing bounds hold on quadratic and SVM instances") {
  RngStream prng(5, 0), rng(5, 1);
  std::vector<double> spectrum;
  for (int i = 0; i < 10; ++i) spectrum.push_back(0.1 + 0.1 * i);
  const auto q = make_quadratic(spectrum, prng);
  const auto svm = small_svm(10);
  for (const ProblemSpec& p : {q.spec(), svm.spec()}) {
    std::vector<Vector> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(rng.normal_vector(10));
    const auto report = check_smoothing_bounds(handle_for(p, 0.01, 10000), pts, rng);
    CAPTURE(p.name);
    CHECK(report.points.size() == 20);
    CHECK(report.all_hold());
  }
}

TEST_CASE("quadratic gradient gap is zero up to Monte Carlo error") {
  RngStream prng(6, 0), rng(6, 1);
  const auto q = make_quadratic(std::vector<double>{1.0, 2.0, 4.0}, prng);
  std::vector<Vector> pts{rng.normal_vector(3)};
  const auto report = check_smoothing_bounds(handle_for(q.spec(), 0.5, 20000), pts, rng);
  CHECK(report.points[0].grad_gap <= report.points[0].grad_mc_error);
}

TEST_CASE("second moment of the two-point estimator") {
  RngStream rng(7, 0);
  SUBCASE("constant function") {
    const auto c = second_moment_bound_check(handle_for(testutil::constant(3, 1.0), 0.1), vec({1, 2, 3}), 0.0,
                                             1000, rng);
    CHECK(c.lhs == 0.0);
    CHECK(c.holds());
  }
  SUBCASE("sphere") {
    const auto c = second_moment_bound_check(handle_for(testutil::sphere(2), 0.1), testutil::unit(2, 0), 0.0,
                                             100000, rng);
    CHECK(c.lhs <= c.rhs);
    // E[(u1 + 0.05 ||u||^2)^2 ||u||^2] for u ~ N(0, I_2): 4 + 0.1*0 + 0.0025*E||u||^6 = 4 + 0.0025*48
    CHECK(std::abs(c.lhs - 4.12) <= 4.0 * c.lhs_std_error);
  }
  SUBCASE("linear function") {
    const Vector a = vec({1.0, -2.0, 0.5, 0.0});
    const auto c = second_moment_bound_check(handle_for(testutil::linear(a), 0.3), Vector::Zero(4), 0.0, 100000,
                                             rng);
    // E[(a.u)^2 ||u||^2] = (n + 2) ||a||^2
    CHECK(std::abs(c.lhs - 6.0 * a.squaredNorm()) <= 4.0 * c.lhs_std_error);
    CHECK(c.lhs <= 2.0 * 8.0 * a.squaredNorm());
  }
  SUBCASE("noisy sphere") {
    const auto c = second_moment_bound_check(handle_for(testutil::sphere(3), 0.1), vec({1, 0, 1}), 1.0, 100000, rng);
    CHECK(c.holds());
  }
}

TEST_CASE("two-point estimator is unbiased for the smoothed gradient") {
  const auto svm = small_svm(4);
  const ProblemSpec p = svm.spec();
  const double mu = 0.5;
  ZerothOrderOracle oracle(p, NoiseModel::bounded_variance(1.0), default_value_noise_sd(NoiseModel::bounded_variance(1.0), 4, mu));
  RngStream rng(8, 0);
  const Vector x = rng.normal_vector(4);
  constexpr int K = 200000;
  Vector mean = Vector::Zero(4), m2 = Vector::Zero(4);
  for (int k = 1; k <= K; ++k) {
    const Vector u = rng.normal_vector(4);
    const NoiseDraw xi = oracle.draw(rng);
    const Vector g = gmu_estimator(oracle.query(x + mu * u, xi), oracle.query(x, xi), u, mu);
    const Vector d = g - mean;
    mean += d / double(k);
    m2 += d.cwiseProduct(g - mean);
  }
  const Vector se = (m2 / double(K - 1) / double(K)).cwiseSqrt();
  const auto ref = smoothed_gradient(handle_for(p, mu, 200000), x, rng);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(mean[j] - ref.mean[j]) <= 4.0 * std::hypot(se[j], ref.std_error[j]));
}

TEST_CASE("smoothed gradient is L-Lipschitz") {
  const auto svm = small_svm(5);
  const ProblemSpec p = svm.spec();
  const double mu = 0.3, L = p.lipschitz_L;
  RngStream rng(9, 0);
  for (int t = 0; t < 5; ++t) {
    const Vector x = rng.normal_vector(5), y = rng.normal_vector(5);
    const double fx = p.value(x), fy = p.value(y);
    constexpr int K = 20000;
    Vector mean = Vector::Zero(5), m2 = Vector::Zero(5);
    for (int k = 1; k <= K; ++k) {
      const Vector u = rng.normal_vector(5);
      const Vector d_k = ((p.value(x + mu * u) - fx) - (p.value(y + mu * u) - fy)) / mu * u;
      const Vector d = d_k - mean;
      mean += d / double(k);
      m2 += d.cwiseProduct(d_k - mean);
    }
    const double se = (m2 / double(K - 1) / double(K)).cwiseSqrt().norm();
    CHECK(mean.norm() <= L * (x - y).norm() + 4.0 * se);
  }
}

TEST_CASE("invalid smoothing inputs") {
  RngStream rng(1, 0);
  CHECK_THROWS_AS(smoothed_value(handle_for(testutil::sphere(2), 0.0), vec({1, 1}), rng), InputError);
  CHECK_THROWS_AS(smoothed_value(handle_for(testutil::sphere(2), 0.1), vec({1}), rng), InputError);
  ProblemSpec no_grad = testutil::sphere(2);
  no_grad.grad = nullptr;
  std::vector<Vector> pts{vec({1, 1})};
  CHECK_THROWS_AS(check_smoothing_bounds(handle_for(no_grad, 0.1), pts, rng), CapabilityError);
}
