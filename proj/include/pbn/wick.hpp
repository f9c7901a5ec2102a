// Wick-rotated dynamics: the induced micro-diffusion generator
// G = (1/2 mu_h) d2/dx2 - mu_h u(x) with mu_h = m/hbar, its free transition
// kernel with D_h = hbar/(2m), discretized path-integral kernel composition,
// and evolution under a commuting non-Hermitian split Hamiltonian
// H = H1 - i H2 (unitary factor times decaying diffusion factor).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <iostream>
#include <string>
#include <utility>

#include "pbn/errors.hpp"
#include "pbn/markov.hpp"
#include "pbn/matrix_exp.hpp"
#include "pbn/processes.hpp"

namespace pbn {

// Parameters of the induced diffusion; potential sampled on a grid.
struct InducedDiffusion {
  double mass;
  double hbar;
  Grid1D potential;

  InducedDiffusion(double m, double h, Grid1D u)
      : mass(m), hbar(h), potential(std::move(u)) {
    if (!(mass > 0.0) || !(hbar > 0.0)) {
      throw ModelError("InducedDiffusion: mass and hbar must be positive");
    }
  }

  double mu_h() const { return mass / hbar; }
  double diffusion_coeff() const { return hbar / (2.0 * mass); }
};

// Dense discretization of G on a grid; symmetric at u = 0, interior row sums
// vanish (Dirichlet boundary rows excepted).
class GridGenerator {
 public:
  GridGenerator(double x_min, double x_max, Eigen::MatrixXd matrix)
      : x_min_(x_min), x_max_(x_max), matrix_(std::move(matrix)) {}

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  Eigen::Index size() const { return matrix_.rows(); }
  double spacing() const {
    return (x_max_ - x_min_) / static_cast<double>(matrix_.rows() - 1);
  }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  double x_min_;
  double x_max_;
  Eigen::MatrixXd matrix_;
};

inline GridGenerator wick_generator(double mass, double hbar,
                                    const Grid1D& potential) {
  if (!(mass > 0.0) || !(hbar > 0.0)) {
    throw ModelError("wick_generator: mass and hbar must be positive");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(potential.size());
  const double mu = mass / hbar;
  const double dx = potential.spacing();
  const double lap = 1.0 / (2.0 * mu * dx * dx);

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = -2.0 * lap - mu * potential.values()[static_cast<std::size_t>(i)];
    if (i > 0) g(i, i - 1) = lap;
    if (i + 1 < n) g(i, i + 1) = lap;
  }
  return GridGenerator(potential.x_min(), potential.x_max(), std::move(g));
}

inline GridGenerator wick_generator(const InducedDiffusion& model) {
  return wick_generator(model.mass, model.hbar, model.potential);
}

// e^{Gt} applied to the grid state.
inline Grid1D wick_evolve(const GridGenerator& gen, const Grid1D& init,
                          double t) {
  if (static_cast<Eigen::Index>(init.size()) != gen.size()) {
    throw DimensionError("wick_evolve: grid size mismatch");
  }
  if (t < 0.0) {
    throw ModelError("wick_evolve: negative time");
  }
  Eigen::Map<const Eigen::VectorXd> v(init.values().data(),
                                      static_cast<Eigen::Index>(init.size()));
  const Eigen::VectorXd out = matrix_exponential(gen.matrix() * t) * v;
  return Grid1D(init.x_min(), init.x_max(),
                std::vector<double>(out.data(), out.data() + out.size()));
}

// Free transition probability of the Wick-rotated free particle:
// (4 pi D_h dt)^{-1/2} exp(-(xb-xa)^2 / (4 D_h dt)), D_h = hbar/(2m).
inline double free_kernel(double mass, double hbar, double xa, double ta,
                          double xb, double tb) {
  if (!(mass > 0.0) || !(hbar > 0.0)) {
    throw ModelError("free_kernel: mass and hbar must be positive");
  }
  if (!(tb > ta)) {
    throw TimeOrderError("free_kernel: tb must exceed ta");
  }
  const double d = hbar / (2.0 * mass);
  const double dt = tb - ta;
  const double dx = xb - xa;
  return std::exp(-dx * dx / (4.0 * d * dt)) /
         std::sqrt(4.0 * M_PI * d * dt);
}

// N intermediate integrations, each over grid_points nodes.
struct KernelSlice {
  int count;
  int grid_points;
  KernelSlice(int n, int points) : count(n), grid_points(points) {
    if (count < 0) {
      throw ConfigError("KernelSlice: negative slice count");
    }
    if (count > 0 && grid_points < 3) {
      throw ConfigError("KernelSlice: need at least 3 grid points");
    }
  }
};

struct ComposedKernel {
  double value;
  double lost_mass;  // 1 - quadrature mass of the last intermediate density
};

// Nested trapezoid quadrature of the N-fold kernel product. The grid spans
// 8 standard deviations of the total-time kernel beyond both endpoints, where
// Gaussian tails are below 1e-14.
inline ComposedKernel compose_kernels(double mass, double hbar, double xa,
                                      double ta, double xb, double tb,
                                      const KernelSlice& slices) {
  if (!(tb > ta)) {
    throw TimeOrderError("compose_kernels: tb must exceed ta");
  }
  if (slices.count == 0) {
    return ComposedKernel{free_kernel(mass, hbar, xa, ta, xb, tb), 0.0};
  }
  const double d = hbar / (2.0 * mass);
  const double dt = (tb - ta) / static_cast<double>(slices.count + 1);
  const double sigma_total = std::sqrt(2.0 * d * (tb - ta));
  const double lo = std::min(xa, xb) - 8.0 * sigma_total;
  const double hi = std::max(xa, xb) + 8.0 * sigma_total;
  const Eigen::Index n = slices.grid_points;
  const double dx = (hi - lo) / static_cast<double>(n - 1);

  auto node = [&](Eigen::Index i) {
    return lo + dx * static_cast<double>(i);
  };
  auto weight = [&](Eigen::Index i) {
    return (i == 0 || i == n - 1) ? 0.5 : 1.0;
  };
  auto slice_kernel = [&](double from, double to) {
    return std::exp(-(to - from) * (to - from) / (4.0 * d * dt)) /
           std::sqrt(4.0 * M_PI * d * dt);
  };

  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = slice_kernel(xa, node(i));

  if (slices.count > 1) {
    Eigen::MatrixXd step(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        step(i, j) = slice_kernel(node(j), node(i)) * weight(j) * dx;
      }
    }
    for (int s = 1; s < slices.count; ++s) {
      g = (step * g).eval();
    }
  }

  double value = 0.0;
  double mass_sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    value += weight(j) * slice_kernel(node(j), xb) * g(j) * dx;
    mass_sum += weight(j) * g(j) * dx;
  }
  const double lost = 1.0 - mass_sum;
  if (std::abs(lost) > 1e-6) {
    std::cerr << "pbn: compose_kernels grid truncates ~" << lost
              << " of the intermediate density; widen the grid\n";
  }
  return ComposedKernel{value, lost};
}

inline ComposedKernel compose_kernels(const InducedDiffusion& model, double xa,
                                      double ta, double xb, double tb,
                                      const KernelSlice& slices) {
  return compose_kernels(model.mass, model.hbar, xa, ta, xb, tb, slices);
}

// H = H1 - i H2 with symmetric commuting parts. Eigenvalues are sorted
// ascending; eigenvectors are orthonormal columns.
class SplitHamiltonian {
 public:
  SplitHamiltonian(Eigen::MatrixXd h1, Eigen::MatrixXd h2)
      : h1_(std::move(h1)), h2_(std::move(h2)) {
    if (h1_.rows() != h1_.cols() || h2_.rows() != h2_.cols() ||
        h1_.rows() != h2_.rows()) {
      throw DimensionError("SplitHamiltonian: parts must be square and equal");
    }
    if (max_abs(h1_ - h1_.transpose()) > 1e-12 ||
        max_abs(h2_ - h2_.transpose()) > 1e-12) {
      throw ModelError("SplitHamiltonian: parts must be symmetric");
    }
    const double commutator = max_abs(h1_ * h2_ - h2_ * h1_);
    if (commutator > 1e-10) {
      throw ModelError("SplitHamiltonian: parts do not commute (||[H1,H2]|| = " +
                       std::to_string(commutator) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s1(h1_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s2(h2_);
    eigval1_ = s1.eigenvalues();
    eigvec1_ = s1.eigenvectors();
    eigval2_ = s2.eigenvalues();
    eigvec2_ = s2.eigenvectors();
  }

  Eigen::Index size() const { return h1_.rows(); }
  const Eigen::MatrixXd& unitary_part() const { return h1_; }
  const Eigen::MatrixXd& diffusive_part() const { return h2_; }
  const Eigen::VectorXd& energies() const { return eigval1_; }
  const Eigen::MatrixXd& energy_modes() const { return eigvec1_; }
  const Eigen::VectorXd& decay_rates() const { return eigval2_; }
  const Eigen::MatrixXd& decay_modes() const { return eigvec2_; }

 private:
  Eigen::MatrixXd h1_;
  Eigen::MatrixXd h2_;
  Eigen::VectorXd eigval1_;
  Eigen::MatrixXd eigvec1_;
  Eigen::VectorXd eigval2_;
  Eigen::MatrixXd eigvec2_;
};

// psi_t = e^{-i H1 t/hbar} psi_0 (norm preserved) together with
// omega_t = e^{-H2 t/hbar} omega_0 (each H2 eigenmode decays by
// e^{-lambda t/hbar}). omega_mass is the raw total mass sum(omega_t); with
// renormalize the returned omega is divided by it.
struct SplitEvolution {
  Eigen::VectorXcd psi;
  Eigen::VectorXd omega;
  double omega_mass;
};

inline SplitEvolution split_evolve(const SplitHamiltonian& h, double hbar,
                                   const Eigen::VectorXcd& psi0,
                                   const Eigen::VectorXd& omega0, double t,
                                   bool renormalize = false) {
  if (!(hbar > 0.0)) {
    throw ModelError("split_evolve: hbar must be positive");
  }
  if (psi0.size() != h.size() || omega0.size() != h.size()) {
    throw DimensionError("split_evolve: state size mismatch");
  }
  if (t < 0.0) {
    throw ModelError("split_evolve: negative time");
  }

  const std::complex<double> minus_i(0.0, -1.0);
  Eigen::VectorXcd psi_modes = h.energy_modes().transpose() * psi0;
  for (Eigen::Index k = 0; k < psi_modes.size(); ++k) {
    psi_modes(k) *= std::exp(minus_i * h.energies()(k) * t / hbar);
  }

  Eigen::VectorXd omega_modes = h.decay_modes().transpose() * omega0;
  for (Eigen::Index k = 0; k < omega_modes.size(); ++k) {
    omega_modes(k) *= std::exp(-h.decay_rates()(k) * t / hbar);
  }

  SplitEvolution out;
  out.psi = h.energy_modes() * psi_modes;
  out.omega = h.decay_modes() * omega_modes;
  out.omega_mass = out.omega.sum();
  if (renormalize) {
    if (std::abs(out.omega_mass) < 1e-300) {
      throw ModelError("split_evolve: cannot renormalize zero-mass state");
    }
    out.omega /= out.omega_mass;
  }
  return out;
}

// Expectation on the product eigenstate (k of H1, mu of H2): the complex
// value eps_k - i lambda_mu and the Hermitian magnitude
// sqrt(eps_k^2 + lambda_mu^2) from H^dagger H.
struct SplitExpectation {
  std::complex<double> energy;
  double magnitude;
};

inline SplitExpectation split_expectation(const SplitHamiltonian& h,
                                          Eigen::Index k, Eigen::Index mu) {
  if (k < 0 || k >= h.size() || mu < 0 || mu >= h.size()) {
    throw DimensionError("split_expectation: eigenindex out of range");
  }
  const double eps = h.energies()(k);
  const double lambda = h.decay_rates()(mu);
  return SplitExpectation{std::complex<double>(eps, -lambda),
                          std::sqrt(eps * eps + lambda * lambda)};
}

}  // namespace pbn
