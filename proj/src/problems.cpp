#include "randsg/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "randsg/errors.hpp"

namespace randsg {

QuadraticProblem QuadraticProblem::from_matrix(Matrix A, Vector b, double c) {
  if (A.rows() != A.cols() || A.rows() < 1) throw InputError("quadratic: A must be square and non-empty");
  if (b.size() != A.rows()) throw InputError("quadratic: b dimension mismatch");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()))
    throw InputError("quadratic: A is not symmetric");

  QuadraticProblem q;
  q.A = 0.5 * (A + A.transpose());
  q.b = std::move(b);
  q.c = c;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q.A);
  q.spectrum = eig.eigenvalues();
  const double scale = std::max(1.0, q.spectrum.cwiseAbs().maxCoeff());
  if (q.spectrum.minCoeff() < -1e-12 * scale) throw InputError("quadratic: A is not positive semidefinite");
  q.L = q.spectrum.maxCoeff();
  if (!(q.L > 0.0)) throw InputError("quadratic: A must be nonzero");

  if (q.spectrum.minCoeff() > 1e-12 * scale) {
    Vector xs = -(eig.eigenvectors() * (eig.eigenvectors().transpose() * q.b).cwiseQuotient(q.spectrum));
    q.f_star = q.value(xs);
    q.x_star = std::move(xs);
  } else if (q.b.isZero(0.0)) {
    q.x_star = Vector::Zero(q.dim());
    q.f_star = q.c;
  }
  return q;
}

std::optional<double> QuadraticProblem::smoothed_f_star(double mu) const {
  if (!f_star) return std::nullopt;
  return *f_star + 0.5 * mu * mu * trace();
}

ProblemSpec QuadraticProblem::spec() const {
  auto self = std::make_shared<const QuadraticProblem>(*this);
  ProblemSpec p;
  p.name = "quadratic";
  p.n = dim();
  p.value = [self](const Vector& x) { return self->value(x); };
  p.grad = [self](const Vector& x) { return self->grad(x); };
  p.lipschitz_L = L;
  p.f_star = f_star;
  p.x_star = x_star;
  p.is_convex = true;
  return p;
}

QuadraticProblem make_quadratic(std::span<const double> spectrum, RngStream& rng, bool rotate) {
  if (spectrum.empty()) throw InputError("make_quadratic: empty spectrum");
  for (double e : spectrum)
    if (!(e >= 0.0) || !std::isfinite(e)) throw InputError("make_quadratic: eigenvalues must be finite and >= 0");
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = spectrum[i];

  Matrix Q = Matrix::Identity(n, n);
  if (rotate) {
    Matrix G(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) G(i, j) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(G);
    Q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j)
      if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  Matrix A = Q * d.asDiagonal() * Q.transpose();
  A = 0.5 * (A + A.transpose()).eval();

  QuadraticProblem q = QuadraticProblem::from_matrix(std::move(A), Vector::Zero(n), 0.0);
  q.spectrum = d;
  q.L = d.maxCoeff();
  if (!(q.L > 0.0)) throw InputError("make_quadratic: spectrum must contain a positive eigenvalue");
  q.x_star = Vector::Zero(n);
  q.f_star = 0.0;
  return q;
}

// Least squares.

double LeastSquaresProblem::value(const Vector& x) const {
  const Vector d = x - x_bar;
  return d.dot(second_moment * d) + noise_sd * noise_sd;
}

Vector LeastSquaresProblem::population_gradient(const Vector& x) const {
  return 2.0 * second_moment * (x - x_bar);
}

std::pair<double, Vector> LeastSquaresProblem::sample_loss(const Vector& x, RngStream& rng) const {
  if (x.size() != n) throw InputError("least squares: dimension mismatch");
  Vector u(n);
  for (int i = 0; i < n; ++i) {
    const bool on = rng.uniform() < sparsity;
    const double mag = rng.uniform();
    u[i] = on ? mag : 0.0;
  }
  const double v = x_bar.dot(u) + noise_sd * rng.normal();
  const double r = x.dot(u) - v;
  return {r * r, 2.0 * r * u};
}

ProblemSpec LeastSquaresProblem::spec() const {
  auto self = std::make_shared<const LeastSquaresProblem>(*this);
  ProblemSpec p;
  p.name = "least_squares";
  p.n = n;
  p.value = [self](const Vector& x) { return self->value(x); };
  p.grad = [self](const Vector& x) { return self->population_gradient(x); };
  p.lipschitz_L = L;
  p.f_star = noise_sd * noise_sd;
  p.x_star = x_bar;
  p.is_convex = true;
  return p;
}

LeastSquaresProblem make_least_squares(int n, double sparsity, double noise_sd, RngStream& rng) {
  if (n < 1) throw InputError("least squares: n must be >= 1");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw InputError("least squares: sparsity must lie in (0, 1]");
  if (!(noise_sd >= 0.0)) throw InputError("least squares: noise_sd must be >= 0");
  LeastSquaresProblem p;
  p.n = n;
  p.sparsity = sparsity;
  p.noise_sd = noise_sd;
  p.x_bar = rng.normal_vector(n);
  // E[u_i^2] = p/3, E[u_i u_j] = (p/2)^2.
  p.second_moment = Matrix::Constant(n, n, sparsity * sparsity / 4.0);
  p.second_moment.diagonal().setConstant(sparsity / 3.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p.second_moment, Eigen::EigenvaluesOnly);
  p.L = 2.0 * eig.eigenvalues().maxCoeff();
  return p;
}

// Sigmoid SVM.

double SigmoidSvmProblem::value(const Vector& x) const {
  const Vector margins = labels.cwiseProduct(features * x);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) loss += 1.0 - std::tanh(margins[i]);
  return loss / samples() + lambda_reg * x.squaredNorm();
}

Vector SigmoidSvmProblem::grad(const Vector& x) const {
  const Vector margins = labels.cwiseProduct(features * x);
  Vector w(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double t = std::tanh(margins[i]);
    w[i] = -labels[i] * (1.0 - t * t);
  }
  return features.transpose() * w / samples() + 2.0 * lambda_reg * x;
}

std::pair<double, Vector> SigmoidSvmProblem::sample_loss(const Vector& x, RngStream& rng) const {
  if (x.size() != n) throw InputError("sigmoid svm: dimension mismatch");
  const auto i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(samples())));
  const Vector u = features.row(i).transpose();
  const double v = labels[i];
  const double t = std::tanh(v * x.dot(u));
  return {1.0 - t + lambda_reg * x.squaredNorm(), -v * (1.0 - t * t) * u + 2.0 * lambda_reg * x};
}

ProblemSpec SigmoidSvmProblem::spec() const {
  auto self = std::make_shared<const SigmoidSvmProblem>(*this);
  ProblemSpec p;
  p.name = "sigmoid_svm";
  p.n = n;
  p.value = [self](const Vector& x) { return self->value(x); };
  p.grad = [self](const Vector& x) { return self->grad(x); };
  p.lipschitz_L = L;
  p.is_convex = false;
  return p;
}

SigmoidSvmProblem make_sigmoid_svm(int n, int samples, double sparsity, double lambda_reg, double label_flip,
                                   RngStream& rng) {
  if (n < 1 || samples < 1) throw InputError("sigmoid svm: n and samples must be >= 1");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw InputError("sigmoid svm: sparsity must lie in (0, 1]");
  if (!(lambda_reg > 0.0)) throw InputError("sigmoid svm: lambda_reg must be positive");
  if (!(label_flip >= 0.0 && label_flip < 0.5)) throw InputError("sigmoid svm: label_flip must lie in [0, 0.5)");

  SigmoidSvmProblem p;
  p.n = n;
  p.lambda_reg = lambda_reg;
  p.sparsity = sparsity;
  p.label_flip = label_flip;
  const Vector w = rng.normal_vector(n);
  p.features.resize(samples, n);
  p.labels.resize(samples);
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool on = rng.uniform() < sparsity;
      const double z = rng.normal();
      p.features(i, j) = on ? z : 0.0;
    }
    double label = p.features.row(i).dot(w) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < label_flip) label = -label;
    p.labels[i] = label;
  }
  const Matrix gram = p.features.transpose() * p.features / static_cast<double>(samples);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double curvature_sup = 4.0 / (3.0 * std::sqrt(3.0));
  p.L = curvature_sup * eig.eigenvalues().maxCoeff() + 2.0 * lambda_reg;
  return p;
}

double svm_sampled_hessian_norm(const SigmoidSvmProblem& p, std::span<const Vector> points) {
  double best = 0.0;
  for (const Vector& x : points) {
    const Vector margins = p.labels.cwiseProduct(p.features * x);
    Vector c(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      const double t = std::tanh(margins[i]);
      c[i] = 2.0 * t * (1.0 - t * t);
    }
    Matrix H = p.features.transpose() * c.asDiagonal() * p.features / static_cast<double>(p.samples());
    H.diagonal().array() += 2.0 * p.lambda_reg;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(H, Eigen::EigenvaluesOnly);
    best = std::max(best, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  return best;
}

double SmoothnessReport::min_margin() const {
  double m = std::min(lipschitz_margin, upper_margin);
  if (convex_gap_margin) m = std::min(m, *convex_gap_margin);
  if (convex_monotone_margin) m = std::min(m, *convex_monotone_margin);
  return m;
}

SmoothnessReport validate_smoothness(const ProblemSpec& problem, int pairs, RngStream& rng, double radius) {
  problem.validate();
  if (!problem.has_grad()) throw CapabilityError("validate_smoothness requires the gradient");
  if (pairs < 1) throw InputError("validate_smoothness needs pairs >= 1");
  const double L = problem.lipschitz_L;
  const double inf = std::numeric_limits<double>::infinity();
  SmoothnessReport r;
  r.pairs = pairs;
  r.lipschitz_margin = inf;
  r.upper_margin = inf;
  if (problem.is_convex) {
    r.convex_gap_margin = inf;
    r.convex_monotone_margin = inf;
  }
  for (int i = 0; i < pairs; ++i) {
    const Vector x = radius * rng.normal_vector(problem.n);
    const Vector y = x + radius * rng.normal_vector(problem.n);
    const Vector gx = problem.grad(x), gy = problem.grad(y);
    const Vector d = y - x;
    const Vector dg = gy - gx;
    const double lin_gap = problem.value(y) - problem.value(x) - gx.dot(d);
    r.lipschitz_margin = std::min(r.lipschitz_margin, L * d.norm() - dg.norm());
    r.upper_margin = std::min(r.upper_margin, 0.5 * L * d.squaredNorm() - std::fabs(lin_gap));
    if (problem.is_convex) {
      r.convex_gap_margin = std::min(*r.convex_gap_margin, lin_gap - dg.squaredNorm() / (2.0 * L));
      r.convex_monotone_margin = std::min(*r.convex_monotone_margin, dg.dot(d) - dg.squaredNorm() / L);
    }
  }
  return r;
}

}  // namespace randsg
