// The three canonical homogeneous processes: Poisson counting, Wiener-Levy,
// and Brownian motion with drift. Closed-form densities and transition
// kernels, an explicit FTCS solver for the drift-diffusion equation, and
// seeded path simulators.
//
// The Wiener marginal at time t is N(0, t sigma^2); the Brownian marginal is
// N(mu t, sigma^2 t). Both kernels depend only on (x2-x1, t2-t1). The
// drift-diffusion solver takes D = sigma^2/2 so its mu=0 solution reproduces
// the Brownian closed form.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pbn/errors.hpp"

namespace pbn {

struct PoissonSpec {
  double rate;  // events per unit time
  explicit PoissonSpec(double lambda) : rate(lambda) {
    if (!(rate > 0.0)) {
      throw ModelError("PoissonSpec: rate must be positive");
    }
  }
};

struct WienerSpec {
  double volatility;  // x-units per sqrt(time)
  explicit WienerSpec(double sigma) : volatility(sigma) {
    if (!(volatility > 0.0)) {
      throw ModelError("WienerSpec: volatility must be positive");
    }
  }
};

struct BrownianSpec {
  double drift;       // x-units per time
  double volatility;  // x-units per sqrt(time)
  BrownianSpec(double mu, double sigma) : drift(mu), volatility(sigma) {
    if (!(volatility > 0.0)) {
      throw ModelError("BrownianSpec: volatility must be positive");
    }
  }
};

inline double gaussian_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * variance)) /
         std::sqrt(2.0 * M_PI * variance);
}

// P(N(t) = k) = (lambda t)^k e^{-lambda t} / k!
inline double poisson_pmf(const PoissonSpec& spec, long k, double t) {
  if (k < 0) {
    throw ModelError("poisson_pmf: negative count");
  }
  if (!(t > 0.0)) {
    throw ModelError("poisson_pmf: time must be positive");
  }
  const double lt = spec.rate * t;
  if (k == 0) return std::exp(-lt);
  return std::exp(static_cast<double>(k) * std::log(lt) - lt -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

// p_ij(t): probability of j-i arrivals in time t; zero for j < i.
inline double poisson_transition(const PoissonSpec& spec, long i, long j,
                                 double t) {
  if (i < 0 || j < 0) {
    throw ModelError("poisson_transition: negative state");
  }
  if (!(t > 0.0)) {
    throw ModelError("poisson_transition: time must be positive");
  }
  if (j < i) return 0.0;
  return poisson_pmf(spec, j - i, t);
}

inline double wiener_density(const WienerSpec& spec, double x, double t) {
  if (!(t > 0.0)) {
    throw ModelError("wiener_density: time must be positive");
  }
  return gaussian_pdf(x, 0.0, t * spec.volatility * spec.volatility);
}

// Stationary-increment kernel: depends only on x2-x1 and t2-t1.
inline double wiener_kernel(const WienerSpec& spec, double x1, double t1,
                            double x2, double t2) {
  if (!(t2 > t1)) {
    throw TimeOrderError("wiener_kernel: t2 must exceed t1");
  }
  return gaussian_pdf(x2 - x1, 0.0,
                      (t2 - t1) * spec.volatility * spec.volatility);
}

inline double brownian_density(const BrownianSpec& spec, double x, double t) {
  if (!(t > 0.0)) {
    throw ModelError("brownian_density: time must be positive");
  }
  return gaussian_pdf(x, spec.drift * t,
                      t * spec.volatility * spec.volatility);
}

inline double brownian_kernel(const BrownianSpec& spec, double x1, double t1,
                              double x2, double t2) {
  if (!(t2 > t1)) {
    throw TimeOrderError("brownian_kernel: t2 must exceed t1");
  }
  const double dt = t2 - t1;
  return gaussian_pdf(x2 - x1, spec.drift * dt,
                      dt * spec.volatility * spec.volatility);
}

// Uniform 1-d grid with one value per node. For density grids the Riemann
// mass spacing*sum(values) should be 1.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::vector<double> values)
      : x_min_(x_min), x_max_(x_max), values_(std::move(values)) {
    if (values_.size() < 3) {
      throw DimensionError("Grid1D: need at least 3 nodes");
    }
    if (!(x_max_ > x_min_)) {
      throw DimensionError("Grid1D: x_max must exceed x_min");
    }
  }

  Grid1D(double x_min, double x_max, std::size_t n)
      : Grid1D(x_min, x_max, std::vector<double>(n, 0.0)) {}

  template <typename F>
  static Grid1D sample(double x_min, double x_max, std::size_t n, F&& f) {
    Grid1D g(x_min, x_max, n);
    for (std::size_t i = 0; i < n; ++i) g.values_[i] = f(g.x(i));
    return g;
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const {
    return (x_max_ - x_min_) / static_cast<double>(values_.size() - 1);
  }
  double x(std::size_t i) const {
    return x_min_ + spacing() * static_cast<double>(i);
  }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double total_mass() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return spacing() * sum;
  }

 private:
  double x_min_;
  double x_max_;
  std::vector<double> values_;
};

// Explicit FTCS step for  dP/dt = -mu dP/dx + D d2P/dx2  with absorbing
// (Dirichlet) boundaries. The domain must be wide enough that boundary mass
// stays negligible; then total mass is conserved to the advertised 1e-8.
inline Grid1D diffusion_solve(const Grid1D& init, double diffusion,
                              double drift, double total_time, int steps) {
  if (!(diffusion > 0.0)) {
    throw ConfigError("diffusion_solve: diffusion coefficient must be > 0");
  }
  if (total_time < 0.0) {
    throw ConfigError("diffusion_solve: negative time");
  }
  if (total_time == 0.0) return init;
  if (steps < 1) {
    throw ConfigError("diffusion_solve: need at least one step");
  }
  const double dx = init.spacing();
  const double dt = total_time / static_cast<double>(steps);
  const double r = diffusion * dt / (dx * dx);
  if (r > 0.5) {
    const double dt_max = 0.5 * dx * dx / diffusion;
    const int steps_needed =
        static_cast<int>(std::ceil(total_time / dt_max));
    throw ConfigError("diffusion_solve: unstable step (D*dt/dx^2 = " +
                      std::to_string(r) + " > 0.5); use dt <= " +
                      std::to_string(dt_max) + " (" +
                      std::to_string(steps_needed) + " steps)");
  }
  const double c = drift * dt / (2.0 * dx);

  Grid1D grid = init;
  std::vector<double> next(grid.size());
  for (int s = 0; s < steps; ++s) {
    const std::vector<double>& v = grid.values();
    next.front() = v.front();
    next.back() = v.back();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      next[i] = v[i] + r * (v[i + 1] - 2.0 * v[i] + v[i - 1]) -
                c * (v[i + 1] - v[i - 1]);
    }
    grid.values().swap(next);
  }
  return grid;
}

// One realization: strictly increasing times with a state per time, plus the
// derived seed that produced it.
struct SamplePath {
  std::vector<double> times;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

namespace detail {

// splitmix64; derives independent per-path seeds from (seed, path index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Poisson paths via exponential inter-arrival times. Each path starts at
// (t=0, count=0) and records one point per arrival before T.
inline std::vector<SamplePath> simulate(const PoissonSpec& spec, double total_time,
                                        int n_paths, std::uint64_t seed) {
  if (!(total_time > 0.0) || n_paths < 1) {
    throw ConfigError("simulate: need total_time > 0 and n_paths >= 1");
  }
  std::vector<SamplePath> paths;
  paths.reserve(static_cast<std::size_t>(n_paths));
  for (int p = 0; p < n_paths; ++p) {
    SamplePath path;
    path.seed = detail::derive_seed(seed, static_cast<std::uint64_t>(p));
    std::mt19937_64 rng(path.seed);
    std::exponential_distribution<double> gap(spec.rate);
    path.times.push_back(0.0);
    path.values.push_back(0.0);
    double t = gap(rng);
    double count = 0.0;
    while (t < total_time) {
      count += 1.0;
      path.times.push_back(t);
      path.values.push_back(count);
      t += gap(rng);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

namespace detail {

inline std::vector<SamplePath> gaussian_increment_paths(
    double drift, double volatility, double total_time, int n_paths,
    std::uint64_t seed, int steps) {
  if (!(total_time > 0.0) || n_paths < 1) {
    throw ConfigError("simulate: need total_time > 0 and n_paths >= 1");
  }
  if (steps < 1) {
    throw ConfigError("simulate: need at least one mesh step");
  }
  const double dt = total_time / static_cast<double>(steps);
  const double step_sd = volatility * std::sqrt(dt);
  std::vector<SamplePath> paths;
  paths.reserve(static_cast<std::size_t>(n_paths));
  for (int p = 0; p < n_paths; ++p) {
    SamplePath path;
    path.seed = derive_seed(seed, static_cast<std::uint64_t>(p));
    std::mt19937_64 rng(path.seed);
    std::normal_distribution<double> incr(drift * dt, step_sd);
    path.times.reserve(static_cast<std::size_t>(steps) + 1);
    path.values.reserve(static_cast<std::size_t>(steps) + 1);
    path.times.push_back(0.0);
    path.values.push_back(0.0);
    double x = 0.0;
    for (int s = 1; s <= steps; ++s) {
      x += incr(rng);
      path.times.push_back(dt * static_cast<double>(s));
      path.values.push_back(x);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace detail

inline std::vector<SamplePath> simulate(const WienerSpec& spec, double total_time,
                                        int n_paths, std::uint64_t seed,
                                        int steps = 128) {
  return detail::gaussian_increment_paths(0.0, spec.volatility, total_time,
                                          n_paths, seed, steps);
}

inline std::vector<SamplePath> simulate(const BrownianSpec& spec,
                                        double total_time, int n_paths,
                                        std::uint64_t seed, int steps = 128) {
  return detail::gaussian_increment_paths(spec.drift, spec.volatility,
                                          total_time, n_paths, seed, steps);
}

}  // namespace pbn
