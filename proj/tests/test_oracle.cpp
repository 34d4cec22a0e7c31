#include <doctest.h>

#include <cmath>
#include <vector>

#include "randsg/errors.hpp"
#include "randsg/oracle.hpp"
#include "randsg/problems.hpp"
#include "test_util.hpp"

using namespace randsg;
using testutil::vec;

TEST_CASE("noiseless gradient query is exact") {
  FirstOrderOracle o(testutil::sphere(2), NoiseModel::none());
  RngStream rng(1, 0);
  CHECK(o.query(vec({3, 4}), rng) == vec({3, 4}));
  ZerothOrderOracle z(testutil::sphere(2), NoiseModel::none());
  CHECK(z.query(vec({1, 1}), rng) == 1.0);
}

TEST_CASE("noiseless value at the optimum of a quadratic is f*") {
  RngStream prng(4, 0);
  const auto q = make_quadratic(std::vector<double>{0.5, 1.0, 2.0}, prng);
  ZerothOrderOracle z(q.spec(), NoiseModel::none());
  RngStream rng(1, 0);
  CHECK(z.query(*q.x_star, rng) == doctest::Approx(*q.f_star).epsilon(1e-12));
}

TEST_CASE("gradient noise is unbiased") {
  FirstOrderOracle o(testutil::sphere(4), NoiseModel::bounded_variance(1.0));
  RngStream rng(2, 0);
  constexpr int K = 100000;
  Vector sum = Vector::Zero(4);
  for (int i = 0; i < K; ++i) sum += o.query(Vector::Zero(4), rng);
  CHECK((sum / K).norm() <= 4.0 / std::sqrt(double(K)));
}

TEST_CASE("gradient noise attains the variance bound") {
  for (NoiseKind kind : {NoiseKind::bounded_variance, NoiseKind::light_tail}) {
    FirstOrderOracle o(testutil::sphere(3), NoiseModel{kind, 2.0});
    RngStream rng(3, 0);
    const Vector x = vec({0.3, -1.0, 2.0});
    constexpr int K = 100000;
    double s = 0.0;
    for (int i = 0; i < K; ++i) s += (o.query(x, rng) - x).squaredNorm();
    CAPTURE(to_string(kind));
    CHECK(s / K >= 3.8);
    CHECK(s / K <= 4.2);
    CHECK(s / K <= 4.0 * (1.0 + 5.0 / std::sqrt(double(K))));
  }
}

TEST_CASE("light-tail noise satisfies the exponential moment bound") {
  for (int n : {1, 2, 10}) {
    FirstOrderOracle o(testutil::sphere(n), NoiseModel::light_tail(1.5));
    RngStream rng(4, n);
    constexpr int K = 100000;
    double s = 0.0;
    for (int i = 0; i < K; ++i) s += std::exp((o.query(Vector::Zero(n), rng)).squaredNorm() / 2.25);
    CAPTURE(n);
    CHECK(s / K <= std::exp(1.0) * 1.1);
  }
}

TEST_CASE("value noise is unbiased") {
  ZerothOrderOracle z(testutil::sphere(3), NoiseModel::bounded_variance(1.0), 0.3);
  RngStream rng(5, 0);
  const Vector x = vec({1.0, 2.0, -0.5});
  constexpr int K = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < K; ++i) {
    const double v = z.query(x, rng);
    s += v;
    s2 += v * v;
  }
  const double mean = s / K, se = std::sqrt((s2 / K - mean * mean) / K);
  CHECK(std::abs(mean - 0.5 * x.squaredNorm()) <= 4.0 * se);
}

TEST_CASE("errors on bad queries") {
  FirstOrderOracle o(testutil::sphere(2), NoiseModel::none());
  RngStream rng(1, 0);
  CHECK_THROWS_AS(o.query(vec({1, 2, 3}), rng), InputError);
  ProblemSpec p = testutil::sphere(2);
  p.grad = nullptr;
  FirstOrderOracle no_grad(p, NoiseModel::none());
  CHECK_THROWS_AS(no_grad.query(vec({1, 2}), rng), CapabilityError);
  ZerothOrderOracle z(p, NoiseModel::none());
  CHECK_THROWS_AS(z.query(vec({1}), rng), InputError);
  CHECK_THROWS_AS(NoiseModel::bounded_variance(-1.0).validate(), InputError);
}

TEST_CASE("call accounting") {
  FirstOrderOracle o(testutil::sphere(2), NoiseModel::bounded_variance(1.0));
  RngStream rng(1, 0);
  CHECK(o.call_count() == 0);
  for (int i = 0; i < 5; ++i) o.query(Vector::Zero(2), rng);
  CHECK(o.call_count() == 5);
  o.reset_accounting();
  CHECK(o.call_count() == 0);
  for (int i = 0; i < 3; ++i) o.query(Vector::Zero(2), rng);
  CHECK(o.call_count() == 3);
  o.query_value(Vector::Zero(2), rng);
  CHECK(o.call_count() == 4);
  // Drawing noise alone is not a query.
  o.draw(rng);
  CHECK(o.call_count() == 4);
}

TEST_CASE("identical streams reproduce identical queries") {
  FirstOrderOracle o(testutil::sphere(3), NoiseModel::light_tail(1.0));
  RngStream a(9, 2), b(9, 2);
  for (int i = 0; i < 20; ++i) CHECK(o.query(vec({1, 2, 3}), a) == o.query(vec({1, 2, 3}), b));
}

TEST_CASE("shared draws give common-random-number differences") {
  ZerothOrderOracle z(testutil::sphere(2), NoiseModel::bounded_variance(1.0), 0.5);
  RngStream rng(6, 0);
  const NoiseDraw xi = z.draw(rng);
  const Vector x = vec({1, 0}), y = vec({1, 0.1});
  // The value shift cancels and only the linear gradient noise remains.
  const double diff = z.query(y, xi) - z.query(x, xi);
  CHECK(diff == doctest::Approx(0.5 * (y.squaredNorm() - x.squaredNorm()) + xi.shift.dot(y - x)).epsilon(1e-12));
}

TEST_CASE("estimate_parameters") {
  RngStream rng(7, 0);
  SUBCASE("noiseless quadratic recovers L") {
    FirstOrderOracle o(testutil::sphere(3, 3.0), NoiseModel::none());
    std::vector<Vector> pts{vec({1, 0, 0}), vec({0, 2, -1})};
    const auto est = estimate_parameters(o, pts, 2, rng);
    CHECK(est.L_hat == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(est.sigma_hat == 0.0);
  }
  SUBCASE("linear function has L_hat 0") {
    FirstOrderOracle o(testutil::linear(vec({1, -2})), NoiseModel::none());
    std::vector<Vector> pts{vec({1, 0}), vec({0, 2}), vec({3, 3})};
    CHECK(estimate_parameters(o, pts, 2, rng).L_hat == 0.0);
  }
  SUBCASE("sigma estimate concentrates") {
    FirstOrderOracle o(testutil::sphere(4), NoiseModel::bounded_variance(1.0));
    std::vector<Vector> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(rng.normal_vector(4));
    const double s = estimate_parameters(o, pts, 200, rng).sigma_hat;
    CHECK(s >= 0.8);
    CHECK(s <= 1.2);
  }
  SUBCASE("coincident points") {
    FirstOrderOracle o(testutil::sphere(2), NoiseModel::none());
    std::vector<Vector> pts{vec({1, 1}), vec({1, 1})};
    CHECK_THROWS_AS(estimate_parameters(o, pts, 2, rng), DegenerateInputError);
  }
}
