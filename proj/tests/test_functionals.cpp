#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "chemoflow/config.hpp"
#include "chemoflow/errors.hpp"
#include "chemoflow/functionals.hpp"
#include "chemoflow/solver.hpp"
#include "oracles.hpp"

using namespace chemoflow;

namespace {

LyapunovSample sample_at(double t, double energy, double dissipation) {
  LyapunovSample s;
  s.t = t;
  s.energy = energy;
  s.dissipation = dissipation;
  return s;
}

State uniform_state(const DomainSpec& dom, double n1, double n2, double c) {
  State s = State::zeros(dom);
  for (auto& v : s.n1.values()) v = n1;
  for (auto& v : s.n2.values()) v = n2;
  for (auto& v : s.c.values()) v = c;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("functionals");

TEST_CASE("norms of a constant field against its own value vanish") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  const ScalarField f(dom, 0.37);
  CHECK(norm(f, NormKind::L1, 0.37) == 0.0);
  CHECK(norm(f, NormKind::L2sq, 0.37) == 0.0);
  CHECK(norm(f, NormKind::Linf, 0.37) == 0.0);
}

TEST_CASE("unit constant on the unit square has unit norms") {
  const DomainSpec dom{1.0, 1.0, 16, 16};
  const ScalarField f(dom, 1.0);
  CHECK(norm(f, NormKind::L1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm(f, NormKind::L2sq) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm(f, NormKind::Linf) == 1.0);
}

TEST_CASE("norms match a direct quadrature oracle on a random field") {
  const DomainSpec dom{1.5, 0.7, 4, 4};
  std::mt19937 rng(91);
  const ScalarField f = oracle::random_field(dom, rng, -2.0, 2.0);
  const double shift = 0.3;
  double l1 = 0.0, l2 = 0.0, li = 0.0;
  for (int j = 0; j < dom.ny; ++j) {
    for (int i = 0; i < dom.nx; ++i) {
      const double d = f.at(i, j) - shift;
      l1 += std::abs(d) * dom.dx() * dom.dy();
      l2 += d * d * dom.dx() * dom.dy();
      li = std::max(li, std::abs(d));
    }
  }
  CHECK(norm(f, NormKind::L1, shift) == doctest::Approx(l1).epsilon(1e-14));
  CHECK(norm(f, NormKind::L2sq, shift) == doctest::Approx(l2).epsilon(1e-14));
  CHECK(norm(f, NormKind::Linf, shift) == li);
}

TEST_CASE("lyapunov pair vanishes exactly at equilibrium in every regime") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  const struct {
    double a1, a2;
    Regime regime;
  } cases[] = {{0.5, 0.5, Regime::Coexistence},
               {1.2, 0.5, Regime::FirstExcluded},
               {0.5, 1.2, Regime::SecondExcluded}};
  for (const auto& cs : cases) {
    CAPTURE(cs.a1);
    ModelParams p;
    p.a1 = cs.a1;
    p.a2 = cs.a2;
    const Equilibrium eq = equilibrium(p, cs.regime);
    const State s = uniform_state(dom, eq.n1_star, eq.n2_star, 0.0);
    const LyapunovSample sample = lyapunov(s, p, cs.regime);
    CHECK(std::abs(sample.energy) <= 1e-15);
    CHECK(std::abs(sample.dissipation) <= 1e-15);
    CHECK(sample.log_floor_hits == 0);
  }
}

TEST_CASE("coexistence energy with only the chemical term alive") {
  const DomainSpec dom{1.0, 1.0, 16, 16};
  ModelParams p;
  p.a1 = p.a2 = 0.5;
  p.chi1 = p.chi2 = 0.5;
  const Equilibrium eq = equilibrium(p, Regime::Coexistence);
  const double c0 = 0.3;
  const State s = uniform_state(dom, eq.n1_star, eq.n2_star, c0);
  const LyapunovSample sample = lyapunov(s, p, Regime::Coexistence);
  // weight = (N1 chi1^2/4 + N2 chi2^2/4 + 1)/2 = 13/24 for these parameters
  const double expected = 13.0 / 24.0 * c0 * c0;
  CHECK(sample.energy == doctest::Approx(expected).epsilon(1e-13));
  CHECK(sample.dissipation == doctest::Approx(0.0));
}

TEST_CASE("first-excluded energy and dissipation match hand arithmetic") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  ModelParams p;
  p.a1 = 1.2;
  p.a2 = 0.5;
  p.mu1 = p.mu2 = 1.0;
  const State s = uniform_state(dom, 0.1, 1.0, 0.0);
  const LyapunovSample sample = lyapunov(s, p, Regime::FirstExcluded);
  CHECK(sample.energy == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(sample.dissipation == doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("energy scales linearly with the domain area for uniform states") {
  ModelParams p;
  p.a1 = p.a2 = 0.5;
  const DomainSpec small{1.0, 1.0, 8, 8};
  const DomainSpec big{2.0, 3.0, 8, 8};
  const State ss = uniform_state(small, 0.5, 0.7, 0.2);
  const State sb = uniform_state(big, 0.5, 0.7, 0.2);
  const LyapunovSample a = lyapunov(ss, p, Regime::Coexistence);
  const LyapunovSample b = lyapunov(sb, p, Regime::Coexistence);
  CHECK(b.energy == doctest::Approx(6.0 * a.energy).epsilon(1e-13));
  CHECK(b.dissipation == doctest::Approx(6.0 * a.dissipation).epsilon(1e-13));
}

TEST_CASE("log floor activations are counted") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  ModelParams p;
  p.a1 = p.a2 = 0.5;
  State s = uniform_state(dom, 0.5, 0.5, 0.0);
  s.n1.at(2, 2) = 0.0;  // would send the log to -inf without the floor
  const LyapunovSample sample = lyapunov(s, p, Regime::Coexistence, 1e-14);
  CHECK(sample.log_floor_hits == 1);
  CHECK(std::isfinite(sample.energy));
}

TEST_CASE("dissipation check on synthetic series") {
  SUBCASE("identically zero series passes with zero residual") {
    std::vector<LyapunovSample> samples;
    for (int k = 0; k < 10; ++k) samples.push_back(sample_at(0.1 * k, 0.0, 0.0));
    const DissipationReport rep = check_dissipation(samples, 1.0);
    CHECK(rep.pass);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_residual == doctest::Approx(0.0));
  }
  SUBCASE("E = F = exp(-2t) with rate 1 passes") {
    std::vector<LyapunovSample> samples;
    for (int k = 0; k < 60; ++k) {
      const double t = 0.1 * k;
      samples.push_back(sample_at(t, std::exp(-2.0 * t), std::exp(-2.0 * t)));
    }
    const DissipationReport rep = check_dissipation(samples, 1.0);
    CHECK(rep.pass);
    CHECK(rep.worst_residual < 0.0);
  }
  SUBCASE("E = exp(-t), F = 2 exp(-t) with rate 1 fails everywhere") {
    std::vector<LyapunovSample> samples;
    for (int k = 0; k < 30; ++k) {
      const double t = 0.1 * k;
      samples.push_back(sample_at(t, std::exp(-t), 2.0 * std::exp(-t)));
    }
    const DissipationReport rep = check_dissipation(samples, 1.0);
    CHECK(!rep.pass);
    CHECK(rep.violations == rep.samples_checked);
    // residual = dE/dt + F ~ +exp(-t), largest at the first checked sample
    CHECK(rep.worst_time == doctest::Approx(0.1));
    CHECK(rep.worst_residual == doctest::Approx(std::exp(-0.1)).epsilon(0.01));
  }
  SUBCASE("unsorted times are rejected") {
    std::vector<LyapunovSample> samples = {sample_at(0.0, 1.0, 1.0), sample_at(0.2, 0.9, 1.0),
                                           sample_at(0.1, 0.8, 1.0)};
    CHECK_THROWS_AS(check_dissipation(samples, 1.0), InputError);
  }
  SUBCASE("fewer than three samples are rejected") {
    std::vector<LyapunovSample> samples = {sample_at(0.0, 1.0, 1.0), sample_at(0.1, 0.9, 1.0)};
    CHECK_THROWS_AS(check_dissipation(samples, 1.0), InputError);
  }
}

TEST_CASE("energy increase counting honors the window and tolerance") {
  std::vector<LyapunovSample> samples;
  samples.push_back(sample_at(0.0, 1.0, 0.0));
  samples.push_back(sample_at(1.0, 1.5, 0.0));   // increase before the window
  samples.push_back(sample_at(2.0, 1.2, 0.0));
  samples.push_back(sample_at(3.0, 1.2 * (1.0 + 1e-10), 0.0));  // inside tolerance
  samples.push_back(sample_at(4.0, 1.4, 0.0));   // real increase
  CHECK(count_energy_increases(samples, 1.5, 1e-8) == 1);
  CHECK(count_energy_increases(samples, 0.0, 1e-8) == 2);
}

TEST_CASE("quadratic sandwich holds near the coexistence equilibrium") {
  const DomainSpec dom{1.0, 1.0, 16, 16};
  ModelParams p;
  p.a1 = p.a2 = 0.5;
  p.chi1 = p.chi2 = 0.5;
  const Equilibrium eq = equilibrium(p, Regime::Coexistence);
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> pert{-0.4, 0.4};
  State s = State::zeros(dom);
  for (int j = 0; j < dom.ny; ++j) {
    for (int i = 0; i < dom.nx; ++i) {
      s.n1.at(i, j) = eq.n1_star * (1.0 + pert(rng));
      s.n2.at(i, j) = eq.n2_star * (1.0 + pert(rng));
      s.c.at(i, j) = 0.05;
    }
  }
  const LyapunovSample sample = lyapunov(s, p, Regime::Coexistence);
  const SandwichCheck check = check_quadratic_sandwich(sample, p, eq);
  CHECK(check.applicable);
  CHECK(check.pass);
  CHECK(check.lower <= sample.energy);
  CHECK(sample.energy <= check.upper);
}

TEST_CASE("quadratic sandwich holds at every recorded sample of a short run") {
  Config cfg = parse_config(R"({"a1": 0.5, "a2": 0.5, "domain": {"nx": 16, "ny": 16},
                                "time": {"t_end": 3.0, "record_every": 2}})");
  const State init = make_initial_state(cfg, Regime::Coexistence);
  const TimeSeries series = run(init, cfg.params, cfg.time);
  const Equilibrium eq = equilibrium(cfg.params, Regime::Coexistence);
  int applicable = 0;
  for (const auto& sample : series.samples) {
    const SandwichCheck check = check_quadratic_sandwich(sample, cfg.params, eq);
    if (!check.applicable) continue;
    ++applicable;
    CHECK(check.pass);
  }
  CHECK(applicable >= 5);
}

TEST_CASE("sandwich check is inapplicable outside the bracket") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  ModelParams p;
  p.a1 = p.a2 = 0.5;
  const Equilibrium eq = equilibrium(p, Regime::Coexistence);
  const State s = uniform_state(dom, 2.0 * eq.n1_star, eq.n2_star, 0.0);
  const LyapunovSample sample = lyapunov(s, p, Regime::Coexistence);
  CHECK(!check_quadratic_sandwich(sample, p, eq).applicable);
}

TEST_SUITE_END();
