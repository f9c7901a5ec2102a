// Shared fixtures and independent oracles for the test suites. Everything
// here is deliberately primitive (plain series, linear solves, quadrature)
// so failures implicate the library, not the tests.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <utility>

namespace test_support {

// Plain truncated Taylor series without scaling or squaring. Trustworthy for
// ||A|| up to about 3, where the largest term is e^3 and no significant
// cancellation occurs; used as an independent oracle for the library's
// scaled-and-squared exponential.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a, int terms = 80) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

inline Eigen::MatrixXd random_stochastic(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      p(i, j) = u(rng);
      row += p(i, j);
    }
    for (int j = 0; j < n; ++j) p(i, j) /= row;
  }
  return p;
}

inline Eigen::MatrixXd random_generator(std::mt19937_64& rng, int n,
                                        double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      q(i, j) = u(rng) * scale;
      off += q(i, j);
    }
    q(i, i) = -off;
  }
  return q;
}

inline Eigen::VectorXd random_distribution(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::VectorXd m(n);
  for (int i = 0; i < n; ++i) m(i) = u(rng);
  return m / m.sum();
}

// Stationary row vector of a stochastic matrix by direct linear solve:
// pi (P - I) = 0 with the last equation replaced by sum(pi) = 1.
inline Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd a = (p - Eigen::MatrixXd::Identity(n, n)).transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  return a.fullPivLu().solve(b);
}

template <typename F>
double trapezoid(F&& f, double a, double b, int n) {
  const double h = (b - a) / static_cast<double>(n - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i + 1 < n; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

// Closed form for the two-state chain with rates a (0->1) and b (1->0):
// P(t) = Pi + e^{-(a+b)t}(I - Pi), Pi rows = (b, a)/(a+b).
inline Eigen::MatrixXd two_state_transition(double a, double b, double t) {
  const double c = a + b;
  Eigen::MatrixXd pi(2, 2);
  pi << b / c, a / c, b / c, a / c;
  return pi + std::exp(-c * t) * (Eigen::MatrixXd::Identity(2, 2) - pi);
}

inline Eigen::MatrixXd two_state_transition_derivative(double a, double b,
                                                       double t) {
  const double c = a + b;
  Eigen::MatrixXd pi(2, 2);
  pi << b / c, a / c, b / c, a / c;
  return -c * std::exp(-c * t) * (Eigen::MatrixXd::Identity(2, 2) - pi);
}

// Symmetric commuting pair sharing a random orthonormal eigenbasis.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> commuting_pair(
    std::mt19937_64& rng, int n, double lo = 0.5, double hi = 2.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  }
  const Eigen::MatrixXd v =
      Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd d1(n);
  Eigen::VectorXd d2(n);
  for (int i = 0; i < n; ++i) {
    d1(i) = u(rng);
    d2(i) = u(rng);
  }
  return {v * d1.asDiagonal() * v.transpose(),
          v * d2.asDiagonal() * v.transpose()};
}

}  // namespace test_support
