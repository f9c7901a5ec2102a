// pbn: probability-bracket toolkit CLI.
//
// Subcommands: die, expect, evolve, simulate, kernel, cluster, check.
// Every run emits a JSON report (sorted keys, fixed 17-digit floats) so that
// identical argv and seed give byte-identical output. Exit 0 when all checks
// pass, 1 when a check fails, 2 on bad usage or unreadable input.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pbn/pbn.hpp"

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

double parse_field(const std::string& field, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw pbn::ConfigError(what + ": bad number '" + field + "'");
  }
  if (used != field.size()) {
    throw pbn::ConfigError(what + ": bad number '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(s);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

template <typename F>
double trapezoid(F&& f, double a, double b, int n) {
  const double h = (b - a) / static_cast<double>(n - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i + 1 < n; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

Eigen::MatrixXd random_stochastic(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      p(i, j) = u(rng);
      row_sum += p(i, j);
    }
    for (int j = 0; j < n; ++j) p(i, j) /= row_sum;
  }
  return p;
}

Eigen::MatrixXd random_generator_matrix(std::mt19937_64& rng, int n,
                                        double scale) {
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

Eigen::VectorXd random_pket_masses(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::VectorXd m(n);
  for (int i = 0; i < n; ++i) m(i) = u(rng);
  m /= m.sum();
  return m;
}

// ---------------------------------------------------------------- die

pbn::Report run_die(long long seed, const std::string& space_out) {
  pbn::Report r;
  r.command = "die";
  r.seed = seed;

  const auto space = pbn::SampleSpace::fair_die();
  const auto x = pbn::Observable::from(
      space, [](const std::string& s) { return std::stod(s); });
  const auto x2 = pbn::Observable::from(space, [](const std::string& s) {
    const double v = std::stod(s);
    return v * v;
  });
  const pbn::Event even{"2", "4", "6"};

  const double mean = pbn::expectation(x, space);
  const double second = pbn::expectation(x2, space);
  const double variance = second - mean * mean;
  const double p_even = pbn::event_mass(even, space);
  const double p_two_given_even = pbn::p_bracket({"2"}, even, space);
  const double mean_given_even = pbn::conditional_expectation(x, even, space);

  r.outputs["mean"] = mean;
  r.outputs["second_moment"] = second;
  r.outputs["variance"] = variance;
  r.outputs["p_even"] = p_even;
  r.outputs["p_face_given_even"] = p_two_given_even;
  r.outputs["mean_given_even"] = mean_given_even;

  r.add_check("mean", 3.5, mean, 1e-14);
  r.add_check("p_even", 0.5, p_even, 1e-14);
  r.add_check("p_face_given_even", 1.0 / 3.0, p_two_given_even, 1e-14);
  r.add_check("second_moment", 91.0 / 6.0, second, 1e-13);
  r.add_check("variance", 35.0 / 12.0, variance, 1e-13);

  if (!space_out.empty()) {
    pbn::write_sample_space_json(space_out, space);
    r.outputs["space_file"] = space_out;
  }
  return r;
}

// ---------------------------------------------------------------- expect

pbn::Report run_expect(long long seed, const std::string& space_file,
                       const std::string& values_csv,
                       const std::string& given_csv) {
  pbn::Report r;
  r.command = "expect";
  r.seed = seed;
  r.inputs["space"] = space_file;

  const auto space = pbn::read_sample_space_json(space_file);
  pbn::Observable obs = [&] {
    if (!values_csv.empty()) {
      std::vector<double> values;
      for (const auto& f : split_csv(values_csv)) {
        values.push_back(parse_field(f, "--values"));
      }
      return pbn::Observable(std::move(values));
    }
    try {
      return pbn::Observable::from(space, [](const std::string& label) {
        std::size_t used = 0;
        const double v = std::stod(label, &used);
        if (used != label.size()) throw std::invalid_argument(label);
        return v;
      });
    } catch (const std::exception&) {
      throw pbn::ConfigError(
          "expect: labels are not numeric; pass --values explicitly");
    }
  }();

  r.outputs["expectation"] = pbn::expectation(obs, space);
  if (!given_csv.empty()) {
    std::set<std::string> members;
    for (const auto& label : split_csv(given_csv)) members.insert(label);
    const pbn::Event h(std::move(members));
    r.inputs["given"] = given_csv;
    r.outputs["event_probability"] = pbn::event_mass(h, space);
    r.outputs["conditional_expectation"] =
        pbn::conditional_expectation(obs, h, space);
  }
  return r;
}

// ---------------------------------------------------------------- evolve

pbn::Report run_evolve(long long seed, const std::string& mode,
                       const std::string& matrix_file,
                       const std::string& init_file, std::optional<double> t,
                       std::optional<long> k) {
  pbn::Report r;
  r.command = "evolve";
  r.seed = seed;
  r.inputs["mode"] = mode;
  r.inputs["matrix"] = matrix_file;
  r.inputs["init"] = init_file;

  const Eigen::MatrixXd m = pbn::read_matrix(matrix_file);
  const Eigen::VectorXd v = pbn::read_vector(init_file);

  if (mode == "dtmc") {
    if (!k.has_value()) {
      throw pbn::ConfigError("evolve: --mode dtmc requires --k");
    }
    r.inputs["k"] = static_cast<long long>(*k);
    const pbn::StochasticMatrix p(m);
    const pbn::SystemPKet u0(v);
    const auto u = pbn::dtmc_evolve(u0, p, *k);
    r.outputs["final"] = to_std(u.masses());
    r.outputs["time"] = u.time();
    const double raw_sum =
        (pbn::as_row(u0) * pbn::detail::matrix_power(p.entries(), *k)).sum();
    r.add_check("mass_conservation", 1.0, raw_sum, 1e-12);
  } else {
    if (!t.has_value()) {
      throw pbn::ConfigError("evolve: --mode ctmc requires --t");
    }
    r.inputs["t"] = *t;
    const pbn::Generator q(m);
    const pbn::SystemPKet omega0(v);
    const auto omega = pbn::ctmc_evolve(omega0, q, *t);
    r.outputs["final"] = to_std(omega.masses());
    r.outputs["time"] = omega.time();
    const double raw_sum =
        (pbn::matrix_exponential(q.master_operator() * *t) * omega0.masses())
            .sum();
    r.add_check("mass_conservation", 1.0, raw_sum, 1e-12);
  }
  return r;
}

// ---------------------------------------------------------------- simulate

pbn::Report run_simulate(long long seed, const std::string& process,
                         std::optional<double> lambda,
                         std::optional<double> sigma, std::optional<double> mu,
                         double total_time, int n_paths, int steps,
                         const std::string& out_file) {
  pbn::Report r;
  r.command = "simulate";
  r.seed = seed;
  r.inputs["process"] = process;
  r.inputs["T"] = total_time;
  r.inputs["paths"] = static_cast<long long>(n_paths);

  std::vector<pbn::SamplePath> paths;
  if (process == "poisson") {
    if (!lambda.has_value()) {
      throw pbn::ConfigError("simulate: --process poisson requires --lambda");
    }
    r.inputs["lambda"] = *lambda;
    paths = pbn::simulate(pbn::PoissonSpec(*lambda), total_time, n_paths,
                          static_cast<std::uint64_t>(seed));
  } else if (process == "wiener") {
    if (!sigma.has_value()) {
      throw pbn::ConfigError("simulate: --process wiener requires --sigma");
    }
    r.inputs["sigma"] = *sigma;
    r.inputs["steps"] = static_cast<long long>(steps);
    paths = pbn::simulate(pbn::WienerSpec(*sigma), total_time, n_paths,
                          static_cast<std::uint64_t>(seed), steps);
  } else {
    if (!sigma.has_value() || !mu.has_value()) {
      throw pbn::ConfigError(
          "simulate: --process brownian requires --mu and --sigma");
    }
    r.inputs["mu"] = *mu;
    r.inputs["sigma"] = *sigma;
    r.inputs["steps"] = static_cast<long long>(steps);
    paths = pbn::simulate(pbn::BrownianSpec(*mu, *sigma), total_time, n_paths,
                          static_cast<std::uint64_t>(seed), steps);
  }

  double mean = 0.0;
  double mean_sq = 0.0;
  for (const auto& path : paths) {
    mean += path.values.back();
    mean_sq += path.values.back() * path.values.back();
  }
  mean /= static_cast<double>(paths.size());
  mean_sq /= static_cast<double>(paths.size());
  r.outputs["final_mean"] = mean;
  r.outputs["final_variance"] = mean_sq - mean * mean;

  if (!out_file.empty()) {
    pbn::write_paths_csv(out_file, paths);
    r.outputs["out"] = out_file;
  }
  return r;
}

// ---------------------------------------------------------------- kernel

pbn::Report run_kernel(long long seed, double m, double hbar, double xa,
                       double ta, double xb, double tb, int slices, int grid,
                       bool compare) {
  pbn::Report r;
  r.command = "kernel";
  r.seed = seed;
  r.inputs["m"] = m;
  r.inputs["hbar"] = hbar;
  r.inputs["xa"] = xa;
  r.inputs["ta"] = ta;
  r.inputs["xb"] = xb;
  r.inputs["tb"] = tb;
  r.inputs["slices"] = static_cast<long long>(slices);
  r.inputs["grid"] = static_cast<long long>(grid);

  const auto composed = pbn::compose_kernels(m, hbar, xa, ta, xb, tb,
                                             pbn::KernelSlice(slices, grid));
  const double closed = pbn::free_kernel(m, hbar, xa, ta, xb, tb);
  const double rel_error = std::abs(composed.value - closed) / closed;

  r.outputs["value"] = composed.value;
  r.outputs["closed_form"] = closed;
  r.outputs["rel_error"] = rel_error;
  r.outputs["lost_mass"] = composed.lost_mass;
  if (compare) {
    r.add_check("rel_error_within_2pct", 0.0, rel_error, 0.02);
  }
  return r;
}

// ---------------------------------------------------------------- cluster

pbn::Report run_cluster(long long seed, const std::string& input,
                        double threshold, const std::string& matrix_out,
                        const std::string& clusters_out) {
  pbn::Report r;
  r.command = "cluster";
  r.seed = seed;
  r.inputs["input"] = input;
  r.inputs["threshold"] = threshold;

  const auto corpus = pbn::ingest(input);
  const auto rel = pbn::relevance(corpus);
  const auto clustering = pbn::cluster(rel, threshold);
  const auto rs = pbn::row_stochastic(corpus);

  r.outputs["n_docs"] = static_cast<long long>(corpus.doc_count());
  r.outputs["n_terms"] = static_cast<long long>(corpus.term_count());
  r.outputs["n_clusters"] = static_cast<long long>(clustering.clusters.size());
  std::vector<double> sizes;
  for (const auto& c : clustering.clusters) {
    sizes.push_back(static_cast<double>(c.size()));
  }
  r.outputs["cluster_sizes"] = sizes;

  double max_row_dev = 0.0;
  for (int i = 0; i < static_cast<int>(rs.size()); ++i) {
    double row = 0.0;
    for (int j = 0; j < static_cast<int>(rs.size()); ++j) {
      row += rs.markov_entry(i, j);
    }
    max_row_dev = std::max(max_row_dev, std::abs(row - 1.0));
  }
  r.add_check("row_stochastic_row_sums", 0.0, max_row_dev, 1e-12);

  double max_diag_dev = 0.0;
  for (int i = 0; i < static_cast<int>(rel.size()); ++i) {
    max_diag_dev = std::max(max_diag_dev, std::abs(rel.entry(i, i) - 1.0));
  }
  r.add_check("relevance_diagonal", 0.0, max_diag_dev, 1e-14);

  if (!matrix_out.empty()) {
    pbn::write_relevance_csv(matrix_out, rel);
    r.outputs["matrix_out"] = matrix_out;
  }
  if (!clusters_out.empty()) {
    pbn::write_clusters_json(clusters_out, clustering, corpus.docs());
    r.outputs["clusters_out"] = clusters_out;
  }
  return r;
}

// ---------------------------------------------------------------- check

void check_core(pbn::Report& r, long long seed) {
  const auto space = pbn::SampleSpace::fair_die();
  const auto x = pbn::Observable::from(
      space, [](const std::string& s) { return std::stod(s); });
  const auto x2 = pbn::Observable::from(space, [](const std::string& s) {
    const double v = std::stod(s);
    return v * v;
  });
  const pbn::Event even{"2", "4", "6"};
  r.add_check("core.die_mean", 3.5, pbn::expectation(x, space), 1e-14);
  r.add_check("core.die_second_moment", 91.0 / 6.0,
              pbn::expectation(x2, space), 1e-13);
  r.add_check("core.die_p_even", 0.5, pbn::event_mass(even, space), 1e-14);
  r.add_check("core.die_p_face_given_even", 1.0 / 3.0,
              pbn::p_bracket({"4"}, even, space), 1e-14);

  // Bayes route vs direct bracket on a seeded random 8-outcome space.
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed) ^ 0xC0FEULL);
  std::vector<std::string> labels;
  for (int i = 0; i < 8; ++i) labels.push_back("s" + std::to_string(i));
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> masses(8);
  double total = 0.0;
  for (auto& m : masses) {
    m = u(rng);
    total += m;
  }
  for (auto& m : masses) m /= total;
  const pbn::SampleSpace rnd(labels, masses);
  const pbn::Event a{"s0", "s2", "s3", "s5"};
  const pbn::Event b{"s1", "s2", "s5", "s6"};
  r.add_check("core.bayes_consistency", pbn::p_bracket(a, b, rnd),
              pbn::bayes(a, b, rnd), 1e-15);

  // Independent product: factored expectation vs brute force over the
  // flattened joint space.
  const auto coin = pbn::SampleSpace::uniform({"H", "T"});
  const pbn::Observable y({1.0, 2.0});
  const pbn::ProductSpace ps({space, coin});
  const double joint = pbn::joint_expectation({x, y}, ps);
  const auto flat = ps.flatten();
  const auto xy = pbn::Observable::from(flat, [](const std::string& label) {
    const auto comma = label.find(',');
    const double xv = std::stod(label.substr(0, comma));
    const double yv = label.substr(comma + 1) == "H" ? 1.0 : 2.0;
    return xv * yv;
  });
  r.add_check("core.product_expectation", pbn::expectation(xy, flat), joint,
              1e-14);
}

void check_markov(pbn::Report& r, long long seed) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed) ^ 0x3A2BULL);
  const pbn::StochasticMatrix p(random_stochastic(rng, 8));
  r.add_check("markov.dtmc_chapman_kolmogorov", 0.0,
              pbn::chapman_kolmogorov_check(p, 3, 4), 1e-12);

  const pbn::Generator q(random_generator_matrix(rng, 5, 1.0));
  r.add_check("markov.ctmc_chapman_kolmogorov", 0.0,
              pbn::chapman_kolmogorov_check(q, 0.7, 1.3), 1e-10);
  r.add_check("markov.kolmogorov_forward", 0.0,
              pbn::kolmogorov_forward_residual(q, 0.8), 1e-6);
  r.add_check("markov.kolmogorov_backward", 0.0,
              pbn::kolmogorov_backward_residual(q, 0.8), 1e-6);

  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  Eigen::VectorXd x_diag(5);
  for (int i = 0; i < 5; ++i) x_diag(i) = ux(rng);
  const pbn::SystemPKet omega0(random_pket_masses(rng, 5));
  const double schro = pbn::schrodinger_expectation(
      x_diag, pbn::ctmc_evolve(omega0, q, 0.9));
  const double heis = pbn::heisenberg_expectation(x_diag, q, omega0, 0.9);
  r.add_check("markov.picture_equivalence", schro, heis, 1e-10);

  // Two-state chain with rates a=1, b=2 against the closed form
  // p_1(t) = b/(a+b) + (1 - b/(a+b)) e^{-(a+b)t}.
  Eigen::MatrixXd q2(2, 2);
  q2 << -1.0, 1.0, 2.0, -2.0;
  const auto evolved =
      pbn::ctmc_evolve(pbn::SystemPKet::point_mass(2, 0), pbn::Generator(q2),
                       1.0);
  const double closed = 2.0 / 3.0 + (1.0 / 3.0) * std::exp(-3.0);
  r.add_check("markov.two_state_closed_form", closed, evolved.masses()(0),
              1e-12);
}

void check_processes(pbn::Report& r, long long seed) {
  const pbn::PoissonSpec pois(2.0);
  double mass = 0.0;
  double mean = 0.0;
  for (long k = 0; k <= 60; ++k) {
    const double pk = pbn::poisson_pmf(pois, k, 3.0);
    mass += pk;
    mean += static_cast<double>(k) * pk;
  }
  r.add_check("processes.poisson_pmf_mass", 1.0, mass, 1e-10);
  r.add_check("processes.poisson_mean", 6.0, mean, 1e-8);

  double lower = 0.0;
  for (long i = 0; i < 6; ++i) {
    for (long j = 0; j < i; ++j) {
      lower = std::max(lower, std::abs(pbn::poisson_transition(pois, i, j, 1.0)));
    }
  }
  r.add_check("processes.poisson_lower_triangle", 0.0, lower, 0.0);

  const pbn::WienerSpec wiener(1.0);
  const double direct = pbn::wiener_kernel(wiener, 0.0, 0.0, 0.7, 1.2);
  const double composed = trapezoid(
      [&](double x) {
        return pbn::wiener_kernel(wiener, 0.0, 0.0, x, 0.5) *
               pbn::wiener_kernel(wiener, x, 0.5, 0.7, 1.2);
      },
      -12.0, 12.0, 4001);
  r.add_check("processes.wiener_semigroup", direct, composed, 1e-6);

  const pbn::BrownianSpec brown(0.5, 1.0);
  const double base = pbn::brownian_kernel(brown, 0.5, 0.25, 1.25, 1.0);
  const double shifted = pbn::brownian_kernel(brown, 0.75, 0.25, 1.5, 1.0);
  r.add_check("processes.brownian_homogeneity", base, shifted, 0.0);

  // FTCS diffusion against the Gaussian closed form, with and without drift.
  for (const double drift : {0.0, 1.0}) {
    const double d = 0.5;
    const double var0 = 0.01;
    const double t_final = 0.5;
    const auto init = pbn::Grid1D::sample(-6.0, 6.0, 601, [&](double x) {
      return pbn::gaussian_pdf(x, 0.0, var0);
    });
    const auto num = pbn::diffusion_solve(init, d, drift, t_final, 2500);
    double l1 = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
      const double exact = pbn::gaussian_pdf(num.x(i), drift * t_final,
                                             var0 + 2.0 * d * t_final);
      l1 += std::abs(num.values()[i] - exact);
    }
    l1 *= num.spacing();
    r.add_check(drift == 0.0 ? "processes.diffusion_l1_mu0"
                             : "processes.diffusion_l1_mu1",
                0.0, l1, 1e-2);
  }

  // Seeded Monte Carlo smoke tests; windows are several standard errors wide.
  const auto ppaths = pbn::simulate(pbn::PoissonSpec(2.0), 10.0, 1000,
                                    static_cast<std::uint64_t>(seed));
  double pmean = 0.0;
  for (const auto& path : ppaths) pmean += path.values.back();
  pmean /= static_cast<double>(ppaths.size());
  r.add_check("processes.poisson_mc_mean", 20.0, pmean, 1.0);

  const auto wpaths = pbn::simulate(pbn::WienerSpec(1.0), 4.0, 1000,
                                    static_cast<std::uint64_t>(seed));
  double wmean = 0.0;
  double wsq = 0.0;
  for (const auto& path : wpaths) {
    wmean += path.values.back();
    wsq += path.values.back() * path.values.back();
  }
  wmean /= static_cast<double>(wpaths.size());
  wsq /= static_cast<double>(wpaths.size());
  r.add_check("processes.wiener_mc_variance", 4.0, wsq - wmean * wmean, 1.0);
}

void check_wick(pbn::Report& r, long long seed) {
  // Free kernel at m = hbar = 1: D_h = 1/2, so unit mass and unit variance
  // over dt = 1.
  const auto kernel = [](double x) {
    return pbn::free_kernel(1.0, 1.0, 0.0, 0.0, x, 1.0);
  };
  r.add_check("wick.free_kernel_mass", 1.0,
              trapezoid(kernel, -10.0, 10.0, 2001), 1e-8);
  r.add_check("wick.free_kernel_variance", 1.0,
              trapezoid([&](double x) { return x * x * kernel(x); }, -10.0,
                        10.0, 2001),
              1e-6);

  const auto composed = pbn::compose_kernels(1.0, 1.0, 0.0, 0.0, 0.5, 1.0,
                                             pbn::KernelSlice(4, 200));
  const double closed = pbn::free_kernel(1.0, 1.0, 0.0, 0.0, 0.5, 1.0);
  r.add_check("wick.compose_rel_error", 0.0,
              std::abs(composed.value - closed) / closed, 0.02);

  // Commuting split Hamiltonian from a shared random eigenbasis.
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed) ^ 0x51C3ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a(i, j) = gauss(rng);
  }
  const Eigen::MatrixXd v =
      Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  std::uniform_real_distribution<double> spec_u(0.5, 2.0);
  Eigen::VectorXd d1(4);
  Eigen::VectorXd d2(4);
  for (int i = 0; i < 4; ++i) {
    d1(i) = spec_u(rng);
    d2(i) = spec_u(rng);
  }
  const pbn::SplitHamiltonian h(v * d1.asDiagonal() * v.transpose(),
                                v * d2.asDiagonal() * v.transpose());
  const double t = 0.5;
  const Eigen::VectorXd omega0 = h.decay_modes().col(1);
  const auto ev = pbn::split_evolve(h, 1.0, Eigen::VectorXcd::Unit(4, 0),
                                    omega0, t);
  const double overlap = h.decay_modes().col(1).dot(ev.omega);
  r.add_check("wick.split_decay_factor", std::exp(-h.decay_rates()(1) * t),
              overlap, 1e-10);

  Eigen::MatrixXd h1 = Eigen::VectorXd{{1.0, 3.0}}.asDiagonal();
  Eigen::MatrixXd h2 = Eigen::VectorXd{{2.0, 4.0}}.asDiagonal();
  const auto se = pbn::split_expectation(pbn::SplitHamiltonian(h1, h2), 1, 1);
  r.add_check("wick.split_energy_real", 3.0, se.energy.real(), 1e-12);
  r.add_check("wick.split_energy_imag", -4.0, se.energy.imag(), 1e-12);
  r.add_check("wick.split_magnitude", 5.0, se.magnitude, 1e-12);
}

void check_cluster(pbn::Report& r, long long seed) {
  const auto hand = pbn::SparseCorpus::from_triples({{"Q1", "t1", 1},
                                                     {"Q1", "t2", 1},
                                                     {"Q2", "t2", 1},
                                                     {"Q2", "t3", 2},
                                                     {"Q2", "t4", 1}});
  r.add_check("cluster.hand_p12", 0.25, pbn::doc_given_doc(hand, "Q1", "Q2"),
              1e-15);
  r.add_check("cluster.hand_p21", 0.5, pbn::doc_given_doc(hand, "Q2", "Q1"),
              1e-15);
  r.add_check("cluster.hand_relevance", 0.375,
              pbn::relevance(hand).entry(0, 1), 1e-15);

  // Seeded random corpus: sparse relevance vs the dense pairwise oracle.
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed) ^ 0xD0C5ULL);
  std::uniform_int_distribution<int> n_terms(3, 8);
  std::uniform_int_distribution<int> term_pick(0, 29);
  std::uniform_int_distribution<long long> count_pick(1, 5);
  std::vector<pbn::SparseCorpus::Triple> triples;
  for (int d = 0; d < 20; ++d) {
    std::set<int> terms;
    const int want = n_terms(rng);
    while (static_cast<int>(terms.size()) < want) terms.insert(term_pick(rng));
    for (int k : terms) {
      triples.push_back({"d" + std::to_string(d), "t" + std::to_string(k),
                         count_pick(rng)});
    }
  }
  const auto corpus = pbn::SparseCorpus::from_triples(triples);
  const auto rel = pbn::relevance(corpus);
  double max_dev = 0.0;
  const int n = static_cast<int>(corpus.doc_count());
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const double dense = mu == nu ? 1.0
                                    : 0.5 * (pbn::doc_given_doc(corpus, mu, nu) +
                                             pbn::doc_given_doc(corpus, nu, mu));
      max_dev = std::max(max_dev, std::abs(rel.entry(mu, nu) - dense));
    }
  }
  r.add_check("cluster.sparse_dense_agreement", 0.0, max_dev, 1e-14);

  const auto rs = pbn::row_stochastic(corpus);
  double max_row_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += rs.markov_entry(i, j);
    max_row_dev = std::max(max_row_dev, std::abs(row - 1.0));
  }
  r.add_check("cluster.row_stochastic_row_sums", 0.0, max_row_dev, 1e-12);
}

pbn::Report run_check(long long seed) {
  pbn::Report r;
  r.command = "check";
  r.seed = seed;
  check_core(r, seed);
  check_markov(r, seed);
  check_processes(r, seed);
  check_wick(r, seed);
  check_cluster(r, seed);
  long long failed = 0;
  for (const auto& c : r.checks) {
    if (!c.pass()) ++failed;
  }
  r.outputs["checks_run"] = static_cast<long long>(r.checks.size());
  r.outputs["checks_failed"] = failed;
  return r;
}

int finalize(const pbn::Report& r, const std::string& report_file,
             bool quiet) {
  if (!report_file.empty()) {
    std::ofstream out(report_file);
    if (!out) {
      std::cerr << "error: cannot open report file '" << report_file << "'\n";
      return 2;
    }
    r.write(out);
  }
  if (!quiet) r.write(std::cout);
  return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probability-bracket toolkit"};
  app.require_subcommand(1);

  std::string report_file;
  long long seed = 42;
  bool quiet = false;
  app.add_option("--report", report_file, "Write the JSON report to FILE");
  app.add_option("--seed", seed, "Seed for all randomized fixtures");
  app.add_flag("--quiet", quiet, "Suppress the report on stdout");

  auto* die = app.add_subcommand("die", "Fair-die worked example");
  std::string space_out;
  die->add_option("--space-out", space_out, "Write the die sample space JSON");

  auto* expect = app.add_subcommand("expect", "Expectation over a sample space");
  std::string space_file;
  std::string values_csv;
  std::string given_csv;
  expect->add_option("--space", space_file, "Sample space JSON file")
      ->required();
  expect->add_option("--values", values_csv,
                     "Observable values, comma separated (default: labels)");
  expect->add_option("--given", given_csv,
                     "Conditioning event labels, comma separated");

  auto* evolve = app.add_subcommand("evolve", "Markov chain evolution");
  std::string mode;
  std::string matrix_file;
  std::string init_file;
  std::optional<double> t_opt;
  std::optional<long> k_opt;
  evolve->add_option("--mode", mode, "dtmc or ctmc")
      ->required()
      ->check(CLI::IsMember({"dtmc", "ctmc"}));
  evolve->add_option("--matrix", matrix_file, "Transition/rate matrix file")
      ->required();
  evolve->add_option("--init", init_file, "Initial distribution file")
      ->required();
  auto* t_flag = evolve->add_option("--t", t_opt, "Evolution time (ctmc)");
  evolve->add_option("--k", k_opt, "Step count (dtmc)")->excludes(t_flag);

  auto* simulate = app.add_subcommand("simulate", "Sample process paths");
  std::string process;
  std::optional<double> lambda;
  std::optional<double> sigma;
  std::optional<double> mu;
  double total_time = 0.0;
  int n_paths = 0;
  int steps = 128;
  std::string out_file;
  simulate->add_option("--process", process, "poisson, wiener, or brownian")
      ->required()
      ->check(CLI::IsMember({"poisson", "wiener", "brownian"}));
  simulate->add_option("--lambda", lambda, "Poisson rate");
  simulate->add_option("--sigma", sigma, "Volatility");
  simulate->add_option("--mu", mu, "Drift (brownian)");
  simulate->add_option("--T", total_time, "Horizon")->required();
  simulate->add_option("--paths", n_paths, "Number of paths")->required();
  simulate->add_option("--steps", steps, "Mesh steps per path (wiener/brownian)");
  simulate->add_option("--out", out_file, "CSV output: path_id,t,value");

  auto* kernel = app.add_subcommand("kernel", "Path-integral kernel composition");
  double m_val = 1.0;
  double hbar = 1.0;
  double xa = 0.0;
  double ta = 0.0;
  double xb = 0.0;
  double tb = 0.0;
  int slices = 0;
  int grid = 200;
  bool compare = false;
  kernel->add_option("--m", m_val, "Mass");
  kernel->add_option("--hbar", hbar, "Reduced Planck constant");
  kernel->add_option("--xa", xa, "Start position");
  kernel->add_option("--ta", ta, "Start time");
  kernel->add_option("--xb", xb, "End position")->required();
  kernel->add_option("--tb", tb, "End time")->required();
  kernel->add_option("--slices", slices, "Intermediate time slices");
  kernel->add_option("--grid", grid, "Quadrature grid points");
  kernel->add_flag("--compare-closed-form", compare,
                   "Check against the closed-form kernel (2% tolerance)");

  auto* cluster_cmd = app.add_subcommand("cluster", "Document clustering");
  std::string input;
  double threshold = 0.0;
  std::string matrix_out;
  std::string clusters_out;
  cluster_cmd->add_option("--input", input, "Corpus TSV: doc<TAB>term<TAB>count")
      ->required();
  cluster_cmd->add_option("--threshold", threshold, "Relevance threshold in (0,1)")
      ->required();
  cluster_cmd->add_option("--matrix-out", matrix_out, "Relevance matrix CSV");
  cluster_cmd->add_option("--clusters-out", clusters_out, "Clusters JSON");

  auto* check = app.add_subcommand("check", "Run the built-in invariant suite");

  // let --report/--seed/--quiet appear after the subcommand name
  for (auto* sub : {die, expect, evolve, simulate, kernel, cluster_cmd, check}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    pbn::Report report;
    if (die->parsed()) {
      report = run_die(seed, space_out);
    } else if (expect->parsed()) {
      report = run_expect(seed, space_file, values_csv, given_csv);
    } else if (evolve->parsed()) {
      report = run_evolve(seed, mode, matrix_file, init_file, t_opt, k_opt);
    } else if (simulate->parsed()) {
      report = run_simulate(seed, process, lambda, sigma, mu, total_time,
                            n_paths, steps, out_file);
    } else if (kernel->parsed()) {
      report = run_kernel(seed, m_val, hbar, xa, ta, xb, tb, slices, grid,
                          compare);
    } else if (cluster_cmd->parsed()) {
      report = run_cluster(seed, input, threshold, matrix_out, clusters_out);
    } else if (check->parsed()) {
      report = run_check(seed);
    }
    return finalize(report, report_file, quiet);
  } catch (const pbn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
