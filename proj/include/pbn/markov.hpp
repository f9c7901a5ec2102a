// Homogeneous Markov chain evolution in both pictures.
//
// Conventions (used consistently, they are transposes of one another):
//   discrete time    u(k) = u(0) P^k          row-vector form
//   continuous time  d/dt m = L m, L = Q^T    column-mass form, m(t) = e^{Lt} m(0)
// dtmc_evolve implements the row form; the column form of the same step is
// (P^T)^k m. Helpers as_row / as_column convert between the two.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <iostream>
#include <string>
#include <utility>

#include "pbn/errors.hpp"
#include "pbn/matrix_exp.hpp"

namespace pbn {

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kMassTolerance = 1e-10;
inline constexpr double kNegativeMassClamp = 1e-12;

// Max absolute entry; the deviation measure for all semigroup/residual checks.
inline double max_abs(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().maxCoeff();
}

// Row-stochastic transition matrix: entries >= 0, rows sum to 1.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Eigen::MatrixXd entries)
      : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
      throw DimensionError("StochasticMatrix: matrix not square");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      double row_sum = 0.0;
      for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
        double& p = entries_(i, j);
        if (p < 0.0) {
          if (p < -kNegativeMassClamp) {
            throw NormalizationError("StochasticMatrix: negative entry " +
                                     std::to_string(p) + " at (" +
                                     std::to_string(i) + "," +
                                     std::to_string(j) + ")");
          }
          p = 0.0;  // rounding-level negative
        }
        row_sum += p;
      }
      if (std::abs(row_sum - 1.0) > kRowSumTolerance) {
        throw NormalizationError("StochasticMatrix: row " + std::to_string(i) +
                                 " sums to " + std::to_string(row_sum));
      }
    }
  }

  static StochasticMatrix identity(Eigen::Index n) {
    return StochasticMatrix(Eigen::MatrixXd::Identity(n, n));
  }

  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

 private:
  Eigen::MatrixXd entries_;
};

// Rate matrix Q: off-diagonal entries >= 0, rows sum to 0 (units 1/time).
class Generator {
 public:
  explicit Generator(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
      throw DimensionError("Generator: matrix not square");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      double row_sum = 0.0;
      for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
        double& q = entries_(i, j);
        if (i != j && q < 0.0) {
          if (q < -kNegativeMassClamp) {
            throw ModelError("Generator: negative off-diagonal rate " +
                             std::to_string(q));
          }
          q = 0.0;
        }
        row_sum += q;
      }
      if (std::abs(row_sum) > kRowSumTolerance) {
        throw ModelError("Generator: row " + std::to_string(i) + " sums to " +
                         std::to_string(row_sum) + ", expected 0");
      }
    }
  }

  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

  // L = Q^T, the operator of the column-mass master equation.
  Eigen::MatrixXd master_operator() const { return entries_.transpose(); }

 private:
  Eigen::MatrixXd entries_;
};

// Time-dependent system P-ket: a probability vector tagged with its time.
class SystemPKet {
 public:
  explicit SystemPKet(Eigen::VectorXd masses, double time = 0.0)
      : masses_(std::move(masses)), time_(time) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < masses_.size(); ++i) {
      double& m = masses_(i);
      if (m < 0.0) {
        if (m < -kNegativeMassClamp) {
          std::cerr << "pbn: clamping mass " << m << " at state " << i
                    << " to 0\n";
        }
        m = 0.0;
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > kMassTolerance) {
      throw NormalizationError("SystemPKet: masses sum to " +
                               std::to_string(sum));
    }
    masses_ /= sum;
  }

  static SystemPKet point_mass(Eigen::Index n, Eigen::Index state,
                               double time = 0.0) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    m(state) = 1.0;
    return SystemPKet(std::move(m), time);
  }

  const Eigen::VectorXd& masses() const { return masses_; }
  double time() const { return time_; }
  Eigen::Index size() const { return masses_.size(); }

 private:
  Eigen::VectorXd masses_;
  double time_;
};

inline Eigen::RowVectorXd as_row(const SystemPKet& pket) {
  return pket.masses().transpose();
}
inline Eigen::VectorXd as_column(const SystemPKet& pket) {
  return pket.masses();
}

// Complex state vector with unit 2-norm; the quantum side of the |c|^2 map.
class AmplitudeVector {
 public:
  explicit AmplitudeVector(Eigen::VectorXcd amplitudes)
      : amplitudes_(std::move(amplitudes)) {
    const double norm2 = amplitudes_.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-8) {
      throw NormalizationError("AmplitudeVector: |c|^2 sums to " +
                               std::to_string(norm2));
    }
  }

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::Index size() const { return amplitudes_.size(); }

 private:
  Eigen::VectorXcd amplitudes_;
};

// m(i) = |c(i)|^2, renormalized by the exact sum of squared moduli.
inline SystemPKet amplitude_to_mass(const AmplitudeVector& c,
                                    double time = 0.0) {
  Eigen::VectorXd masses = c.amplitudes().cwiseAbs2();
  masses /= masses.sum();
  return SystemPKet(std::move(masses), time);
}

namespace detail {

inline Eigen::MatrixXd matrix_power(Eigen::MatrixXd base, long k) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(base.rows(), base.cols());
  while (k > 0) {
    if (k & 1) result = (result * base).eval();
    base = (base * base).eval();
    k >>= 1;
  }
  return result;
}

}  // namespace detail

// u(k) = u(0) P^k, renormalized.
inline SystemPKet dtmc_evolve(const SystemPKet& u0, const StochasticMatrix& p,
                              long k) {
  if (u0.size() != p.size()) {
    throw DimensionError("dtmc_evolve: state/matrix size mismatch");
  }
  if (k < 0) {
    throw ModelError("dtmc_evolve: negative step count");
  }
  Eigen::RowVectorXd u = as_row(u0) * detail::matrix_power(p.entries(), k);
  return SystemPKet(u.transpose(), u0.time() + static_cast<double>(k));
}

// P(t) = exp(Qt); P(0) is the identity.
inline StochasticMatrix transition_matrix(const Generator& q, double t) {
  if (t < 0.0) {
    throw ModelError("transition_matrix: negative time");
  }
  return StochasticMatrix(matrix_exponential(q.entries() * t));
}

// m(t) = e^{Lt} m(0) with L = Q^T, renormalized.
inline SystemPKet ctmc_evolve(const SystemPKet& omega0, const Generator& q,
                              double t) {
  if (omega0.size() != q.size()) {
    throw DimensionError("ctmc_evolve: state/generator size mismatch");
  }
  if (t < 0.0) {
    throw ModelError("ctmc_evolve: negative time");
  }
  Eigen::VectorXd m =
      matrix_exponential(q.master_operator() * t) * as_column(omega0);
  return SystemPKet(std::move(m), omega0.time() + t);
}

// ||P^{m+n} - P^m P^n||, the discrete Chapman-Kolmogorov deviation.
inline double chapman_kolmogorov_check(const StochasticMatrix& p, long m,
                                           long n) {
  if (m < 0 || n < 0) {
    throw ModelError("chapman_kolmogorov_check: negative step count");
  }
  const Eigen::MatrixXd lhs = detail::matrix_power(p.entries(), m + n);
  const Eigen::MatrixXd rhs = detail::matrix_power(p.entries(), m) *
                              detail::matrix_power(p.entries(), n);
  return max_abs(lhs - rhs);
}

// ||P(t+s) - P(s) P(t)||, the continuous-time semigroup deviation.
inline double chapman_kolmogorov_check(const Generator& q, double s,
                                           double t) {
  if (s < 0.0 || t < 0.0) {
    throw ModelError("chapman_kolmogorov_check: negative time");
  }
  const Eigen::MatrixXd lhs = matrix_exponential(q.entries() * (t + s));
  const Eigen::MatrixXd rhs = matrix_exponential(q.entries() * s) *
                              matrix_exponential(q.entries() * t);
  return max_abs(lhs - rhs);
}

// Step for derivative checks; balances truncation against roundoff for the
// 1e-6 residual contract.
inline double derivative_step(double t) { return 1e-5 * std::max(1.0, t); }

// ||P'(t) - P(t) Q|| with P' by central finite difference.
inline double kolmogorov_forward_residual(const Generator& q, double t) {
  if (t < 0.0) {
    throw ModelError("kolmogorov_forward_residual: negative time");
  }
  const double h = derivative_step(t);
  const Eigen::MatrixXd p_dot =
      (matrix_exponential(q.entries() * (t + h)) -
       matrix_exponential(q.entries() * (t - h))) /
      (2.0 * h);
  const Eigen::MatrixXd p_t = matrix_exponential(q.entries() * t);
  return max_abs(p_dot - p_t * q.entries());
}

// ||P'(t) - Q P(t)||, the backward variant.
inline double kolmogorov_backward_residual(const Generator& q, double t) {
  if (t < 0.0) {
    throw ModelError("kolmogorov_backward_residual: negative time");
  }
  const double h = derivative_step(t);
  const Eigen::MatrixXd p_dot =
      (matrix_exponential(q.entries() * (t + h)) -
       matrix_exponential(q.entries() * (t - h))) /
      (2.0 * h);
  const Eigen::MatrixXd p_t = matrix_exponential(q.entries() * t);
  return max_abs(p_dot - q.entries() * p_t);
}

// Absolute probability distribution by explicit P-identity insertion:
// P(i,k) = sum_j p0(j) (P^k)_{ji}. Agrees with dtmc_evolve.
inline SystemPKet apd_evolution(const SystemPKet& p0,
                                const StochasticMatrix& p, long k) {
  if (p0.size() != p.size()) {
    throw DimensionError("apd_evolution: state/matrix size mismatch");
  }
  const Eigen::MatrixXd pk = detail::matrix_power(p.entries(), k);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p0.size());
  for (Eigen::Index i = 0; i < p0.size(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < p0.size(); ++j) {
      sum += p0.masses()(j) * pk(j, i);
    }
    out(i) = sum;
  }
  return SystemPKet(std::move(out), p0.time() + static_cast<double>(k));
}

// Continuous-time variant: P(i,t) = sum_j p0(j) P_{ji}(t).
inline SystemPKet apd_evolution(const SystemPKet& p0, const Generator& q,
                                double t) {
  if (p0.size() != q.size()) {
    throw DimensionError("apd_evolution: state/generator size mismatch");
  }
  const Eigen::MatrixXd pt = transition_matrix(q, t).entries();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p0.size());
  for (Eigen::Index i = 0; i < p0.size(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < p0.size(); ++j) {
      sum += p0.masses()(j) * pt(j, i);
    }
    out(i) = sum;
  }
  return SystemPKet(std::move(out), p0.time() + t);
}

// A diagonal observable moved into the Heisenberg picture:
// X(t) = U^{-1} X U for the column-mass propagator U.
class HeisenbergObservable {
 public:
  HeisenbergObservable(Eigen::VectorXd x_diag, Eigen::MatrixXd u,
                       Eigen::MatrixXd u_inv)
      : x_diag_(std::move(x_diag)), u_(std::move(u)), u_inv_(std::move(u_inv)) {
    if (x_diag_.size() != u_.rows() || u_.rows() != u_.cols() ||
        u_inv_.rows() != u_.rows() || u_inv_.cols() != u_.cols()) {
      throw DimensionError("HeisenbergObservable: size mismatch");
    }
  }

  // CTMC propagator e^{Lt} is always invertible; its inverse is e^{-Lt}.
  static HeisenbergObservable ctmc(Eigen::VectorXd x_diag, const Generator& q,
                                   double t) {
    const Eigen::MatrixXd l = q.master_operator();
    return HeisenbergObservable(std::move(x_diag), matrix_exponential(l * t),
                                matrix_exponential(-l * t));
  }

  // Discrete-time chains may have singular P; that is an error, not a
  // pseudo-inverse.
  static HeisenbergObservable dtmc(Eigen::VectorXd x_diag,
                                   const StochasticMatrix& p, long k) {
    const Eigen::MatrixXd u_step = p.entries().transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(u_step);
    if (!lu.isInvertible()) {
      throw SingularPropagatorError(
          "HeisenbergObservable: transition matrix is singular");
    }
    return HeisenbergObservable(std::move(x_diag),
                                detail::matrix_power(u_step, k),
                                detail::matrix_power(lu.inverse(), k));
  }

  const Eigen::VectorXd& base() const { return x_diag_; }
  const Eigen::MatrixXd& propagator() const { return u_; }

  // U^{-1} X U; reduces to diag(X) at t = 0.
  Eigen::MatrixXd evolved() const {
    return u_inv_ * x_diag_.asDiagonal() * u_;
  }

 private:
  Eigen::VectorXd x_diag_;
  Eigen::MatrixXd u_;
  Eigen::MatrixXd u_inv_;
};

// Schroedinger-picture expectation of a diagonal observable.
inline double schrodinger_expectation(const Eigen::VectorXd& x_diag,
                                      const SystemPKet& state) {
  if (x_diag.size() != state.size()) {
    throw DimensionError("schrodinger_expectation: size mismatch");
  }
  return x_diag.dot(state.masses());
}

// Heisenberg-picture expectation P(Omega| X(t) |Omega_0): the system P-bra is
// the all-ones row functional.
inline double heisenberg_expectation(const HeisenbergObservable& x,
                                     const SystemPKet& omega0) {
  if (x.base().size() != omega0.size()) {
    throw DimensionError("heisenberg_expectation: size mismatch");
  }
  const Eigen::RowVectorXd pbra =
      Eigen::RowVectorXd::Ones(omega0.size());
  return pbra * x.evolved() * as_column(omega0);
}

inline double heisenberg_expectation(const Eigen::VectorXd& x_diag,
                                     const Generator& q,
                                     const SystemPKet& omega0, double t) {
  return heisenberg_expectation(HeisenbergObservable::ctmc(x_diag, q, t),
                                omega0);
}

inline double heisenberg_expectation(const Eigen::VectorXd& x_diag,
                                     const StochasticMatrix& p,
                                     const SystemPKet& u0, long k) {
  return heisenberg_expectation(HeisenbergObservable::dtmc(x_diag, p, k), u0);
}

}  // namespace pbn
