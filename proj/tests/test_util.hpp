#pragma once

#include <cmath>
#include <memory>

#include "randsg/oracle.hpp"
#include "randsg/types.hpp"

namespace testutil {

using randsg::ProblemSpec;
using randsg::Vector;

/// f(x) = (L/2) ||x||^2
inline ProblemSpec sphere(int n, double L = 1.0) {
  ProblemSpec p;
  p.name = "sphere";
  p.n = n;
  p.value = [L](const Vector& x) { return 0.5 * L * x.squaredNorm(); };
  p.grad = [L](const Vector& x) { return Vector(L * x); };
  p.lipschitz_L = L;
  p.f_star = 0.0;
  p.x_star = Vector::Zero(n);
  p.is_convex = true;
  return p;
}

/// f(x) = <a, x>
inline ProblemSpec linear(const Vector& a) {
  ProblemSpec p;
  p.name = "linear";
  p.n = static_cast<int>(a.size());
  p.value = [a](const Vector& x) { return a.dot(x); };
  p.grad = [a](const Vector&) { return a; };
  p.lipschitz_L = 0.0;
  p.is_convex = true;
  return p;
}

inline ProblemSpec constant(int n, double c) {
  ProblemSpec p;
  p.name = "constant";
  p.n = n;
  p.value = [c](const Vector&) { return c; };
  p.grad = [n](const Vector&) { return Vector(Vector::Zero(n)); };
  p.lipschitz_L = 0.0;
  p.f_star = c;
  p.is_convex = true;
  return p;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vector unit(int n, int i) {
  Vector v = Vector::Zero(n);
  v[i] = 1.0;
  return v;
}

}  // namespace testutil
