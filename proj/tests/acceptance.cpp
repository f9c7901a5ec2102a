// Acceptance battery: one line per criterion, PASS/FAIL plus elapsed time.
// Exits nonzero when any criterion fails. Tolerances are pinned inline at
// each check.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pbn/pbn.hpp"
#include "test_support.hpp"

namespace ts = test_support;
using namespace pbn;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      ok = false;
      detail << what;
    }
  }
  void expect_near(double got, double want, double tol,
                   const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream msg;
      msg << what << " got " << got << " want " << want << " tol " << tol;
      expect(false, msg.str());
    }
  }
};

// ------------------------------------------------------------ criterion 1

void die_example(Outcome& out) {
  const auto space = SampleSpace::fair_die();
  const auto x = Observable::from(
      space, [](const std::string& label) { return std::stod(label); });
  const Event even({"2", "4", "6"});

  out.expect_near(expectation(x, space), 3.5, 1e-14, "mean");
  out.expect_near(event_mass(even, space), 0.5, 1e-14, "P(even)");
  for (const auto& face : {"2", "4", "6"}) {
    out.expect_near(p_bracket(Event({face}), even, space), 1.0 / 3.0, 1e-14,
                    std::string("P(") + face + "|even)");
  }
  const auto x2 = Observable::from(space, [](const std::string& label) {
    const double v = std::stod(label);
    return v * v;
  });
  out.expect_near(expectation(x2, space), 91.0 / 6.0, 1e-13, "E[X^2]");
  const double mean = expectation(x, space);
  out.expect_near(expectation(x2, space) - mean * mean, 35.0 / 12.0, 1e-13,
                  "variance");
  out.expect_near(conditional_expectation(x, even, space), 4.0, 1e-14,
                  "E[X|even]");
}

// ------------------------------------------------------------ criterion 2

void chapman_kolmogorov(Outcome& out) {
  std::mt19937_64 rng(4202);
  std::uniform_int_distribution<long> steps(1, 4);
  double worst_discrete = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const StochasticMatrix p(ts::random_stochastic(rng, 10));
    worst_discrete = std::max(
        worst_discrete,
        chapman_kolmogorov_check(p, steps(rng), steps(rng)));
  }
  out.expect_near(worst_discrete, 0.0, 1e-12, "discrete CK deviation");

  std::uniform_real_distribution<double> when(0.1, 1.5);
  double worst_continuous = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Generator q(ts::random_generator(rng, 6));
    worst_continuous = std::max(
        worst_continuous, chapman_kolmogorov_check(q, when(rng), when(rng)));
  }
  out.expect_near(worst_continuous, 0.0, 1e-10, "continuous CK deviation");
}

// ------------------------------------------------------------ criterion 3

void kolmogorov_equations(Outcome& out) {
  Eigen::MatrixXd two(2, 2);
  two << -1.0, 1.0, 2.0, -2.0;
  const Generator closed(two);
  for (double t : {0.2, 0.5, 1.0}) {
    out.expect_near(kolmogorov_forward_residual(closed, t), 0.0, 1e-6,
                    "2-state forward residual");
    out.expect_near(kolmogorov_backward_residual(closed, t), 0.0, 1e-6,
                    "2-state backward residual");
  }

  std::mt19937_64 rng(4203);
  for (int rep = 0; rep < 10; ++rep) {
    // rates below 1 on five states keep the infinity norm under 10
    const Generator q(ts::random_generator(rng, 5));
    for (double t : {0.3, 0.9}) {
      out.expect_near(kolmogorov_forward_residual(q, t), 0.0, 1e-6,
                      "random forward residual");
      out.expect_near(kolmogorov_backward_residual(q, t), 0.0, 1e-6,
                      "random backward residual");
    }
  }
}

// ------------------------------------------------------------ criterion 4

void picture_equivalence(Outcome& out) {
  std::mt19937_64 rng(4204);
  std::uniform_int_distribution<int> dim(3, 7);
  std::uniform_real_distribution<double> when(0.0, 2.0);
  std::uniform_real_distribution<double> level(-2.0, 2.0);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = dim(rng);
    const Generator q(ts::random_generator(rng, n));
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = level(rng);
    const SystemPKet omega0(ts::random_distribution(rng, n));
    const double t = when(rng);

    const double heis = heisenberg_expectation(x, q, omega0, t);
    const double schr = schrodinger_expectation(x, ctmc_evolve(omega0, q, t));
    worst = std::max(worst, std::abs(heis - schr));
  }
  out.expect_near(worst, 0.0, 1e-10, "picture gap over 50 triples");
}

// ------------------------------------------------------------ criterion 5

void poisson_family(Outcome& out) {
  const PoissonSpec spec(2.0);
  const double t = 3.0;
  const double lt = spec.rate * t;

  double mean = 0.0;
  double second = 0.0;
  for (long k = 0; k <= 200; ++k) {
    const double pk = poisson_pmf(spec, k, t);
    mean += static_cast<double>(k) * pk;
    second += static_cast<double>(k) * static_cast<double>(k) * pk;
  }
  out.expect_near(mean, lt, 1e-8, "pmf mean");
  out.expect_near(second - mean * mean, lt, 1e-8, "pmf variance");

  for (long i : {0L, 3L, 11L}) {
    double row = 0.0;
    for (long j = i; j <= i + 200; ++j) {
      row += poisson_transition(spec, i, j, t);
    }
    out.expect_near(row, 1.0, 1e-10, "transition row sum");
  }
  for (long i = 0; i <= 6; ++i) {
    for (long j = 0; j < i; ++j) {
      out.expect(poisson_transition(spec, i, j, t) == 0.0,
                 "decreasing transition not exactly zero");
    }
  }
}

// ------------------------------------------------------------ criterion 6

void gaussian_semigroup(Outcome& out) {
  const WienerSpec w(1.3);
  const BrownianSpec b(0.6, 0.8);

  const auto compose = [&](auto&& kernel, double y, double s, double tau,
                           double t, double x) {
    return ts::trapezoid(
        [&](double z) { return kernel(y, s, z, tau) * kernel(z, tau, x, t); },
        -16.0, 16.0, 6001);
  };
  const auto wk = [&](double y, double s, double x, double t) {
    return wiener_kernel(w, y, s, x, t);
  };
  const auto bk = [&](double y, double s, double x, double t) {
    return brownian_kernel(b, y, s, x, t);
  };

  const double triples[][5] = {{0.0, 0.0, 0.5, 1.3, 0.7},
                               {-0.4, 0.1, 0.8, 1.9, 0.2},
                               {1.1, 0.0, 0.6, 1.1, -0.3}};
  for (const auto& c : triples) {
    out.expect_near(compose(wk, c[0], c[1], c[2], c[3], c[4]),
                    wk(c[0], c[1], c[4], c[3]), 1e-6, "wiener semigroup");
    out.expect_near(compose(bk, c[0], c[1], c[2], c[3], c[4]),
                    bk(c[0], c[1], c[4], c[3]), 1e-6, "brownian semigroup");
  }

  // homogeneity: dyadic shifts of both endpoints leave the kernels bitwise
  // unchanged
  out.expect(wk(0.5, 0.25, 1.25, 1.0) == wk(0.875, 0.75, 1.625, 1.5),
             "wiener shift invariance not exact");
  out.expect(bk(0.5, 0.25, 1.25, 1.0) == bk(0.875, 0.75, 1.625, 1.5),
             "brownian shift invariance not exact");
}

// ------------------------------------------------------------ criterion 7

void diffusion_pde(Outcome& out) {
  const double d = 0.5;  // sigma^2/2 with sigma = 1
  const double horizon = 1.0;
  for (double mu : {0.0, 1.0}) {
    const auto init = Grid1D::sample(-8.0, 8.0, 801, [](double x) {
      return gaussian_pdf(x, 0.0, 0.01);
    });
    const auto got = diffusion_solve(init, d, mu, horizon, 3000);
    double l1 = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      l1 += std::abs(got.values()[i] -
                     gaussian_pdf(got.x(i), mu * horizon,
                                  0.01 + 2.0 * d * horizon));
    }
    l1 *= got.spacing();
    std::ostringstream what;
    what << "L1 error at mu=" << mu;
    out.expect_near(l1, 0.0, 1e-2, what.str());
  }
}

// ------------------------------------------------------------ criterion 8

void wick_kernel(Outcome& out) {
  const double m = 1.0;
  const double hbar = 1.0;
  const double target = free_kernel(m, hbar, 0.0, 0.0, 0.5, 1.0);
  const auto coarse =
      compose_kernels(m, hbar, 0.0, 0.0, 0.5, 1.0, KernelSlice(4, 200));
  const auto fine =
      compose_kernels(m, hbar, 0.0, 0.0, 0.5, 1.0, KernelSlice(4, 400));
  const double rel_coarse = std::abs(coarse.value - target) / target;
  const double rel_fine = std::abs(fine.value - target) / target;

  out.expect_near(rel_coarse, 0.0, 0.02, "relative error at 200 points");
  {
    std::ostringstream what;
    what << "refinement 200->400 not strictly decreasing (rel200="
         << rel_coarse << ", rel400=" << rel_fine << ")";
    out.expect(rel_fine < rel_coarse, what.str());
  }

  const double m2 = 2.0;
  const double dh = 1.0 / (2.0 * m2);  // hbar = 1
  const double dt = 0.8;
  const double sd = std::sqrt(2.0 * dh * dt);
  const auto k = [&](double x) {
    return free_kernel(m2, 1.0, 0.0, 0.0, x, dt);
  };
  out.expect_near(ts::trapezoid(k, -10.0 * sd, 10.0 * sd, 4001), 1.0, 1e-8,
                  "free kernel normalization");
  out.expect_near(
      ts::trapezoid([&](double x) { return x * x * k(x); }, -10.0 * sd,
                    10.0 * sd, 4001),
      2.0 * dh * dt, 1e-6, "free kernel variance");
}

// ------------------------------------------------------------ criterion 9

void split_hamiltonian(Outcome& out) {
  {
    Eigen::MatrixXd d1 = Eigen::Vector3d(3.0, 1.0, 4.0).asDiagonal();
    Eigen::MatrixXd d2 = Eigen::Vector3d(1.0, 2.0, 5.0).asDiagonal();
    const SplitHamiltonian h(d1, d2);
    Eigen::VectorXd omega0 = Eigen::VectorXd::Zero(3);
    omega0(1) = 1.0;  // the lambda = 2 eigenmode
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(3);
    psi0(0) = 1.0;
    const auto evolved = split_evolve(h, 1.0, psi0, omega0, 1.0);
    out.expect_near(evolved.omega(1), std::exp(-2.0), 1e-10,
                    "eigenmode decay factor");
  }
  {
    std::mt19937_64 rng(4209);
    const auto [h1, h2] = ts::commuting_pair(rng, 4);
    const SplitHamiltonian h(h1, h2);
    const double gap = h.decay_rates()(3) - h.decay_rates()(0);
    const double t = 20.0 / gap;
    Eigen::VectorXd omega0 = h.decay_modes().col(0) + h.decay_modes().col(3);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(4);
    psi0(0) = 1.0;
    const auto evolved = split_evolve(h, 1.0, psi0, omega0, t);
    const double overlap =
        std::abs(h.decay_modes().col(0).dot(evolved.omega)) /
        evolved.omega.norm();
    out.expect(overlap >= 1.0 - 1e-6, "slow-mode dominance overlap");
  }
  {
    Eigen::MatrixXd d1 = Eigen::Vector2d(3.0, 7.0).asDiagonal();
    Eigen::MatrixXd d2 = Eigen::Vector2d(4.0, 9.0).asDiagonal();
    const auto e = split_expectation(SplitHamiltonian(d1, d2), 0, 0);
    out.expect(std::abs(e.energy - std::complex<double>(3.0, -4.0)) <= 1e-12,
               "complex expectation (3 - 4i)");
    out.expect_near(e.magnitude, 5.0, 1e-12, "Hermitian magnitude");
  }
}

// ------------------------------------------------------------ criterion 10

void clustering(Outcome& out) {
  // sparse accumulation against the quadratic-loop oracle on a 50-doc corpus
  std::mt19937_64 rng(4210);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<long long> level(1, 9);
  std::vector<SparseCorpus::Triple> triples;
  for (int d = 0; d < 50; ++d) {
    bool any = false;
    for (int k = 0; k < 40; ++k) {
      if (coin(rng) < 0.2) {
        triples.push_back({"d" + std::to_string(d), "t" + std::to_string(k),
                           level(rng)});
        any = true;
      }
    }
    if (!any) {
      triples.push_back({"d" + std::to_string(d), "t0", level(rng)});
    }
  }
  const auto corpus = SparseCorpus::from_triples(triples);
  const auto sparse = relevance(corpus).to_dense();
  double worst = 0.0;
  for (int mu = 0; mu < 50; ++mu) {
    for (int nu = 0; nu < 50; ++nu) {
      const double direct =
          mu == nu
              ? 1.0
              : 0.5 * (doc_given_doc(corpus, mu, nu) +
                       doc_given_doc(corpus, nu, mu));
      worst = std::max(worst, std::abs(sparse(mu, nu) - direct));
    }
  }
  out.expect_near(worst, 0.0, 1e-14, "sparse vs dense relevance");

  // worked two-document example
  const auto hand = SparseCorpus::from_triples(
      {{"q1", "a", 2}, {"q1", "b", 2}, {"q2", "b", 1}, {"q2", "c", 3}});
  out.expect_near(doc_given_doc(hand, "q1", "q2"), 0.25, 0.0, "P(Q1|Q2)");
  out.expect_near(relevance(hand).entry(0, 1), 0.375, 0.0, "R12");

  // three isolated blobs with a shared anchor term each
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<long long> small(1, 3);
  std::vector<SparseCorpus::Triple> blob;
  for (int g = 0; g < 3; ++g) {
    for (int d = 0; d < 6; ++d) {
      const std::string doc =
          "g" + std::to_string(g) + "d" + std::to_string(d);
      blob.push_back({doc, "anchor" + std::to_string(g), 3});
      for (int j = 0; j < 3; ++j) {
        blob.push_back({doc,
                        "g" + std::to_string(g) + "t" +
                            std::to_string(pick(rng)),
                        small(rng)});
      }
    }
  }
  const auto blobs = cluster(relevance(SparseCorpus::from_triples(blob)), 0.2);
  out.expect(blobs.clusters.size() == 3, "blob corpus cluster count");

  // row-normalized similarity: stochastic rows, real spectrum
  const auto markov = row_stochastic(corpus).markov_dense();
  double worst_row = 0.0;
  for (Eigen::Index i = 0; i < markov.rows(); ++i) {
    worst_row = std::max(worst_row, std::abs(markov.row(i).sum() - 1.0));
  }
  out.expect_near(worst_row, 0.0, 1e-12, "similarity row sums");
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(markov);
  out.expect_near(solver.eigenvalues().imag().cwiseAbs().maxCoeff(), 0.0,
                  1e-10, "spectrum imaginary part");
}

// ------------------------------------------------------------ criterion 11

void monte_carlo(Outcome& out) {
  const auto counts = simulate(PoissonSpec(2.0), 10.0, 10000, 42);
  double mean = 0.0;
  for (const auto& path : counts) mean += path.values.back();
  mean /= static_cast<double>(counts.size());
  out.expect(mean >= 19.4 && mean <= 20.6, "poisson mean count window");

  const auto walks = simulate(WienerSpec(1.0), 4.0, 10000, 42);
  double first = 0.0;
  double second = 0.0;
  for (const auto& path : walks) {
    first += path.values.back();
    second += path.values.back() * path.values.back();
  }
  first /= 10000.0;
  second /= 10000.0;
  const double var = second - first * first;
  out.expect(std::abs(var - 4.0) <= 0.05 * 4.0, "wiener variance window");
}

struct Criterion {
  int id;
  const char* label;
  double budget_ms;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "die worked example", 1.0, die_example},
      {2, "chapman-kolmogorov semigroup", 1000.0, chapman_kolmogorov},
      {3, "kolmogorov forward/backward residuals", 1000.0,
       kolmogorov_equations},
      {4, "heisenberg/schroedinger equivalence", 1000.0, picture_equivalence},
      {5, "poisson pmf and transition kernel", 1000.0, poisson_family},
      {6, "wiener/brownian semigroup and homogeneity", 5000.0,
       gaussian_semigroup},
      {7, "diffusion pde closed form", 10000.0, diffusion_pde},
      {8, "wick kernel composition", 30000.0, wick_kernel},
      {9, "split hamiltonian evolution", 1000.0, split_hamiltonian},
      {10, "document clustering", 5000.0, clustering},
      {11, "seeded monte carlo windows", 30000.0, monte_carlo},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    c.body(out);
    const auto stop = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    if (ms > c.budget_ms) {
      std::ostringstream what;
      what << "runtime " << ms << " ms over budget " << c.budget_ms << " ms";
      out.expect(false, what.str());
    }
    if (!out.ok) ++failures;
    std::printf("%s  criterion %2d  %-45s  (%.2f ms)%s%s\n",
                out.ok ? "PASS" : "FAIL", c.id, c.label, ms,
                out.ok ? "" : ": ", out.ok ? "" : out.detail.str().c_str());
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
