// Dense matrix exponential by scaling-and-squaring with a truncated-Taylor
// core. Accuracy target: 1e-12 relative for ||A||_inf <= 50, which covers
// every continuous-time contract in this library.

#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace pbn {

inline Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();

  // Scale so the Taylor argument has infinity norm <= 0.5.
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);

  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  // With ||scaled|| <= 0.5 the term norms fall below 1e-20 well before k=30.
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled / static_cast<double>(k)).eval();
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20) break;
  }

  for (int s = 0; s < squarings; ++s) {
    result = (result * result).eval();
  }
  return result;
}

}  // namespace pbn
