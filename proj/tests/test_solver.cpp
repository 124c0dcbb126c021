#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "chemoflow/errors.hpp"
#include "chemoflow/operators.hpp"
#include "chemoflow/solver.hpp"
#include "oracles.hpp"

using namespace chemoflow;

namespace {

ModelParams case1_params() {
  ModelParams p;
  p.a1 = 0.5;
  p.a2 = 0.5;
  p.chi1 = 0.5;
  p.chi2 = 0.5;
  return p;
}

State random_positive_state(const DomainSpec& dom, std::mt19937& rng) {
  State s = State::zeros(dom);
  s.n1 = oracle::random_field(dom, rng, 0.2, 1.0);
  s.n2 = oracle::random_field(dom, rng, 0.2, 1.0);
  s.c = oracle::random_field(dom, rng, 0.05, 0.4);
  s.vel = oracle::divfree_vel(dom, rng, 0.05);
  return s;
}

State uniform_equilibrium_state(const DomainSpec& dom, const ModelParams& p, Regime regime) {
  const Equilibrium eq = equilibrium(p, regime);
  State s = State::zeros(dom);
  for (auto& v : s.n1.values()) v = eq.n1_star;
  for (auto& v : s.n2.values()) v = eq.n2_star;
  return s;
}

// Full IMEX step rebuilt from scratch on dense linear algebra and explicit
// flux loops; shares no code with Stepper::step.
State reference_step(const State& s, const ModelParams& P, double dt, double floor_value) {
  const DomainSpec dom = s.n1.domain();
  const int nx = dom.nx, ny = dom.ny;
  const double dx = dom.dx(), dy = dom.dy();

  // Explicit scalar terms.
  const ScalarField adv1 = oracle::advect_reference(s.n1, s.vel);
  const ScalarField adv2 = oracle::advect_reference(s.n2, s.vel);
  const ScalarField advc = oracle::advect_reference(s.c, s.vel);
  const ScalarField chem1 = oracle::chemotaxis_reference(s.n1, s.c, P.chi1);
  const ScalarField chem2 = oracle::chemotaxis_reference(s.n2, s.c, P.chi2);

  ScalarField n1s(dom), n2s(dom), cs(dom);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double r1 = P.mu1 * s.n1.at(i, j) * (1.0 - s.n1.at(i, j) - P.a1 * s.n2.at(i, j));
      const double r2 = P.mu2 * s.n2.at(i, j) * (1.0 - P.a2 * s.n1.at(i, j) - s.n2.at(i, j));
      const double rc = -(P.alpha * s.n1.at(i, j) + P.beta * s.n2.at(i, j)) * s.c.at(i, j);
      n1s.at(i, j) = s.n1.at(i, j) + dt * (-adv1.at(i, j) - chem1.at(i, j) + r1);
      n2s.at(i, j) = s.n2.at(i, j) + dt * (-adv2.at(i, j) - chem2.at(i, j) + r2);
      cs.at(i, j) = s.c.at(i, j) + dt * (-advc.at(i, j) + rc);
    }
  }

  // Dense implicit diffusion.
  const oracle::Dense L = oracle::neumann_laplacian_dense(dom);
  State out = State::zeros(dom);
  out.n1.values() = oracle::helmholtz_dense(L, n1s.values(), dt);
  out.n2.values() = oracle::helmholtz_dense(L, n2s.values(), dt);
  out.c.values() = oracle::helmholtz_dense(L, cs.values(), dt);

  // Velocity: explicit convection.
  VectorField vel = s.vel;
  if (P.convective != 0) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 1; i < nx; ++i) {
        const double uc = s.vel.u(i, j);
        const double dudx =
            uc >= 0 ? (uc - s.vel.u(i - 1, j)) / dx : (s.vel.u(i + 1, j) - uc) / dx;
        const double vbar = 0.25 * (s.vel.v(i - 1, j) + s.vel.v(i, j) + s.vel.v(i - 1, j + 1) +
                                    s.vel.v(i, j + 1));
        const double ud = j > 0 ? s.vel.u(i, j - 1) : -uc;
        const double uu = j < ny - 1 ? s.vel.u(i, j + 1) : -uc;
        const double dudy = vbar >= 0 ? (uc - ud) / dy : (uu - uc) / dy;
        vel.u(i, j) -= dt * (uc * dudx + vbar * dudy);
      }
    }
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double vc = s.vel.v(i, j);
        const double dvdy =
            vc >= 0 ? (vc - s.vel.v(i, j - 1)) / dy : (s.vel.v(i, j + 1) - vc) / dy;
        const double ubar = 0.25 * (s.vel.u(i, j - 1) + s.vel.u(i + 1, j - 1) + s.vel.u(i, j) +
                                    s.vel.u(i + 1, j));
        const double vl = i > 0 ? s.vel.v(i - 1, j) : -vc;
        const double vr = i < nx - 1 ? s.vel.v(i + 1, j) : -vc;
        const double dvdx = ubar >= 0 ? (vc - vl) / dx : (vr - vc) / dx;
        vel.v(i, j) -= dt * (ubar * dvdx + vc * dvdy);
      }
    }
  }

  // Dense implicit viscosity.
  {
    const oracle::Dense Lu = oracle::u_laplacian_dense(dom);
    std::vector<double> b(static_cast<size_t>(nx - 1) * ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) b[static_cast<size_t>(j) * (nx - 1) + (i - 1)] = vel.u(i, j);
    const std::vector<double> x = oracle::helmholtz_dense(Lu, b, dt);
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) vel.u(i, j) = x[static_cast<size_t>(j) * (nx - 1) + (i - 1)];
  }
  {
    const oracle::Dense Lv = oracle::v_laplacian_dense(dom);
    std::vector<double> b(static_cast<size_t>(nx) * (ny - 1));
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) b[static_cast<size_t>(j - 1) * nx + i] = vel.v(i, j);
    const std::vector<double> x = oracle::helmholtz_dense(Lv, b, dt);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) vel.v(i, j) = x[static_cast<size_t>(j - 1) * nx + i];
  }

  // Buoyancy on the input densities.
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      vel.u(i, j) += dt * (P.gamma * 0.5 * (s.n1.at(i - 1, j) + s.n1.at(i, j)) +
                           P.delta * 0.5 * (s.n2.at(i - 1, j) + s.n2.at(i, j))) *
                     P.phi.gx;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      vel.v(i, j) += dt * (P.gamma * 0.5 * (s.n1.at(i, j - 1) + s.n1.at(i, j)) +
                           P.delta * 0.5 * (s.n2.at(i, j - 1) + s.n2.at(i, j))) *
                     P.phi.gy;

  // Dense projection.
  std::vector<double> rhs(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      rhs[static_cast<size_t>(j) * nx + i] =
          ((vel.u(i + 1, j) - vel.u(i, j)) / dx + (vel.v(i, j + 1) - vel.v(i, j)) / dy) / dt;
  const std::vector<double> p = oracle::neumann_poisson_dense(dom, rhs);
  out.pressure.values() = p;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      vel.u(i, j) -= dt *
                     (p[static_cast<size_t>(j) * nx + i] - p[static_cast<size_t>(j) * nx + i - 1]) /
                     dx;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      vel.v(i, j) -= dt *
                     (p[static_cast<size_t>(j) * nx + i] - p[static_cast<size_t>(j - 1) * nx + i]) /
                     dy;
  out.vel = vel;

  for (ScalarField* f : {&out.n1, &out.n2}) {
    for (auto& v : f->values())
      if (v < floor_value && v != 0.0) v = floor_value;
  }
  out.t = s.t + dt;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("kinetics vanish at equilibria and match hand arithmetic") {
  const DomainSpec dom{1.0, 1.0, 4, 4};
  SUBCASE("coexistence equilibrium annihilates both terms") {
    ModelParams p = case1_params();
    const Equilibrium eq = equilibrium(p, Regime::Coexistence);
    ScalarField n1(dom, eq.n1_star), n2(dom, eq.n2_star);
    const auto [k1, k2] = kinetics(n1, n2, p);
    for (double v : k1.values()) CHECK(std::abs(v) <= 1e-16);
    for (double v : k2.values()) CHECK(std::abs(v) <= 1e-16);
  }
  SUBCASE("semi-trivial state (1,0)") {
    ModelParams p = case1_params();
    p.a1 = 1.7;
    ScalarField n1(dom, 1.0), n2(dom, 0.0);
    const auto [k1, k2] = kinetics(n1, n2, p);
    for (double v : k1.values()) CHECK(v == 0.0);
    for (double v : k2.values()) CHECK(v == 0.0);
  }
  SUBCASE("hand-evaluated interior point") {
    ModelParams p;
    p.a1 = 0.25;
    p.a2 = 0.75;
    ScalarField n1(dom, 0.5), n2(dom, 0.5);
    const auto [k1, k2] = kinetics(n1, n2, p);
    for (double v : k1.values()) CHECK(v == doctest::Approx(0.1875).epsilon(1e-15));
    for (double v : k2.values()) CHECK(v == doctest::Approx(0.0625).epsilon(1e-15));
  }
}

TEST_CASE("consumption is the pointwise sink") {
  const DomainSpec dom{1.0, 1.0, 4, 4};
  ModelParams p = case1_params();
  SUBCASE("zero chemical") {
    ScalarField c(dom, 0.0), n1(dom, 0.7), n2(dom, 0.7);
    const ScalarField out = consumption(c, n1, n2, p);
    for (double v : out.values()) CHECK(v == 0.0);
  }
  SUBCASE("zero densities") {
    ScalarField c(dom, 0.4), n1(dom, 0.0), n2(dom, 0.0);
    const ScalarField out = consumption(c, n1, n2, p);
    for (double v : out.values()) CHECK(v == 0.0);
  }
  SUBCASE("hand arithmetic") {
    p.alpha = 1.0;
    p.beta = 2.0;
    ScalarField c(dom, 0.25), n1(dom, 1.0), n2(dom, 0.5);
    const ScalarField out = consumption(c, n1, n2, p);
    for (double v : out.values()) CHECK(v == doctest::Approx(-0.5).epsilon(1e-15));
  }
}

TEST_CASE("stable_dt picks the binding bound") {
  const DomainSpec dom{1.0, 1.0, 16, 16};
  SolverConfig cfg;
  SUBCASE("reaction bound with quiescent fluid") {
    ModelParams p = case1_params();
    p.chi1 = p.chi2 = 0.0;
    p.alpha = p.beta = 0.25;  // keep the consumption bound above the reaction bound
    State s = State::zeros(dom);
    for (auto& v : s.n1.values()) v = 1.0;
    for (auto& v : s.n2.values()) v = 1.0;
    cfg.cfl_safety = 0.45;
    CHECK(stable_dt(s, p, cfg) == 0.45 * 0.5);
  }
  SUBCASE("advective bound halves when velocity doubles") {
    ModelParams p = case1_params();
    p.chi1 = p.chi2 = 0.0;
    State s = State::zeros(dom);
    for (auto& v : s.n1.values()) v = 0.1;
    for (auto& v : s.n2.values()) v = 0.1;
    for (int j = 0; j < dom.ny; ++j) s.vel.u(4, j) = 2.0;
    const double dt1 = stable_dt(s, p, cfg);
    for (int j = 0; j < dom.ny; ++j) s.vel.u(4, j) = 4.0;
    const double dt2 = stable_dt(s, p, cfg);
    CHECK(dt1 / dt2 == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("random state equals the hand-evaluated min of the bounds") {
    std::mt19937 rng(67);
    ModelParams p = case1_params();
    State s = random_positive_state(dom, rng);
    cfg.cfl_safety = 0.8;

    const double chi = std::max(p.chi1, p.chi2);
    double sx = 0.0, sy = 0.0;
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i <= dom.nx; ++i) {
        double drift = 0.0;
        if (i > 0 && i < dom.nx)
          drift = chi * std::abs(s.c.at(i, j) - s.c.at(i - 1, j)) / dom.dx();
        sx = std::max(sx, std::abs(s.vel.u(i, j)) + drift);
      }
    for (int j = 0; j <= dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i) {
        double drift = 0.0;
        if (j > 0 && j < dom.ny)
          drift = chi * std::abs(s.c.at(i, j) - s.c.at(i, j - 1)) / dom.dy();
        sy = std::max(sy, std::abs(s.vel.v(i, j)) + drift);
      }
    double n1max = 0.0, n2max = 0.0;
    for (double v : s.n1.values()) n1max = std::max(n1max, v);
    for (double v : s.n2.values()) n2max = std::max(n2max, v);
    const double advective = 1.0 / (sx / dom.dx() + sy / dom.dy());
    const double reaction = 1.0 / (std::max(p.mu1, p.mu2) * (1.0 + std::max(n1max, n2max)));
    const double sink = 1.0 / (p.alpha * n1max + p.beta * n2max);
    const double expected = 0.8 * std::min({advective, reaction, sink});
    CHECK(stable_dt(s, p, cfg) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("uniform equilibrium is a discrete fixed point in every regime") {
  const DomainSpec dom{1.0, 1.0, 16, 16};
  SolverConfig cfg;
  cfg.dt = 0.1;
  cfg.cfl_safety = 1.0;
  const struct {
    double a1, a2;
    Regime regime;
  } cases[] = {{0.5, 0.5, Regime::Coexistence},
               {1.2, 0.5, Regime::FirstExcluded},
               {0.5, 1.2, Regime::SecondExcluded}};
  for (const auto& cs : cases) {
    CAPTURE(cs.a1);
    ModelParams p = case1_params();
    p.a1 = cs.a1;
    p.a2 = cs.a2;
    const State s0 = uniform_equilibrium_state(dom, p, cs.regime);
    const State s1 = step(s0, p, cfg);
    CHECK(oracle::max_abs_diff(s1.n1, s0.n1) <= 1e-13);
    CHECK(oracle::max_abs_diff(s1.n2, s0.n2) <= 1e-13);
    CHECK(oracle::max_abs_diff(s1.c, s0.c) <= 1e-13);
    CHECK(oracle::max_abs_diff(s1.vel, s0.vel) <= 1e-13);
  }
}

TEST_CASE("pure Neumann diffusion conserves mass per step") {
  const DomainSpec dom{1.0, 1.0, 16, 16};
  ModelParams p = case1_params();
  p.chi1 = p.chi2 = 0.0;
  p.mu1 = p.mu2 = 1e-30;  // kinetics negligible, diffusion alone moves mass
  std::mt19937 rng(71);
  State s = State::zeros(dom);
  s.n1 = oracle::random_field(dom, rng, 0.2, 1.0);
  s.n2 = oracle::random_field(dom, rng, 0.2, 1.0);
  s.c = ScalarField(dom, 0.1);
  SolverConfig cfg;
  cfg.dt = 0.2;
  cfg.cfl_safety = 1.0;
  double mass0 = 0.0;
  for (double v : s.n1.values()) mass0 += v * dom.cell_area();
  const State s1 = step(s, p, cfg);
  double mass1 = 0.0;
  for (double v : s1.n1.values()) mass1 += v * dom.cell_area();
  CHECK(mass1 == doctest::Approx(mass0).epsilon(1e-12));
}

TEST_CASE("one step matches the dense-operator reference step") {
  const DomainSpec dom{1.0, 1.0, 4, 4};
  std::mt19937 rng(73);
  ModelParams p = case1_params();
  p.chi1 = 0.4;
  p.chi2 = 0.6;
  p.alpha = 0.8;
  p.beta = 1.3;
  p.gamma = 0.9;
  p.delta = 1.1;
  const double dt = 0.01;
  for (int rep = 0; rep < 5; ++rep) {
    State s = random_positive_state(dom, rng);
    s.vel = oracle::random_noslip_vel(dom, rng, 0.05);
    const State want = reference_step(s, p, dt, 1e-14);
    Stepper stepper(dom, p);
    State got = s;
    stepper.step(got, dt, 1e-14);
    CHECK(oracle::max_abs_diff(got.n1, want.n1) <= 1e-10);
    CHECK(oracle::max_abs_diff(got.n2, want.n2) <= 1e-10);
    CHECK(oracle::max_abs_diff(got.c, want.c) <= 1e-10);
    CHECK(oracle::max_abs_diff(got.vel, want.vel) <= 1e-10);
    CHECK(oracle::max_abs_diff(got.pressure, want.pressure) <= 1e-9);
  }
}

TEST_CASE("the Stokes variant (convective = 0) also matches the reference") {
  const DomainSpec dom{1.0, 1.0, 4, 4};
  std::mt19937 rng(79);
  ModelParams p = case1_params();
  p.convective = 0;
  State s = random_positive_state(dom, rng);
  s.vel = oracle::random_noslip_vel(dom, rng, 0.05);
  const State want = reference_step(s, p, 0.02, 1e-14);
  Stepper stepper(dom, p);
  State got = s;
  stepper.step(got, 0.02, 1e-14);
  CHECK(oracle::max_abs_diff(got.n1, want.n1) <= 1e-10);
  CHECK(oracle::max_abs_diff(got.vel, want.vel) <= 1e-10);
}

TEST_CASE("blow-up reporting names the offending field") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  ModelParams p = case1_params();
  State s = State::zeros(dom);
  for (auto& v : s.n1.values()) v = 0.5;
  for (auto& v : s.n2.values()) v = 0.5;
  s.n1.at(3, 3) = std::numeric_limits<double>::quiet_NaN();
  Stepper stepper(dom, p);
  try {
    stepper.step(s, 0.01, 1e-14);
    FAIL("expected BlowupError");
  } catch (const BlowupError& e) {
    CHECK(e.field == "n1");
  }
}

TEST_CASE("oversized dt is rejected") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  ModelParams p = case1_params();
  State s = State::zeros(dom);
  for (auto& v : s.n1.values()) v = 1.0;
  for (auto& v : s.n2.values()) v = 1.0;
  SolverConfig cfg;
  cfg.dt = 10.0;
  CHECK_THROWS_AS(step(s, p, cfg), StepRejectionError);
}

TEST_CASE("chemical max norm is nonincreasing and densities stay positive") {
  const DomainSpec dom{1.0, 1.0, 16, 16};
  std::mt19937 rng(83);
  ModelParams p = case1_params();
  State s = random_positive_state(dom, rng);
  Stepper stepper(dom, p);
  SolverConfig cfg;
  double cmax = norm(s.c, NormKind::Linf);
  for (int k = 0; k < 25; ++k) {
    const double dt = stepper.stable_dt(s, cfg);
    stepper.step(s, dt, 1e-14);
    const double cnew = norm(s.c, NormKind::Linf);
    CHECK(cnew <= cmax * (1.0 + 1e-12));
    cmax = cnew;
    double nmin = std::numeric_limits<double>::infinity();
    for (double v : s.n1.values()) nmin = std::min(nmin, v);
    for (double v : s.n2.values()) nmin = std::min(nmin, v);
    CHECK(nmin > 0.0);
  }
}

TEST_CASE("run with t_end = 0 returns only the initial sample") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  ModelParams p = case1_params();
  State s = uniform_equilibrium_state(dom, p, Regime::Coexistence);
  SolverConfig cfg;
  cfg.t_end = 0.0;
  const TimeSeries series = run(s, p, cfg);
  CHECK(series.samples.size() == 1);
  CHECK(series.samples[0].t == 0.0);
}

TEST_CASE("run from equilibrium keeps all distance norms at zero") {
  const DomainSpec dom{1.0, 1.0, 8, 8};
  ModelParams p = case1_params();
  State s = uniform_equilibrium_state(dom, p, Regime::Coexistence);
  SolverConfig cfg;
  cfg.t_end = 1.0;
  cfg.dt = 0.05;
  cfg.cfl_safety = 1.0;
  cfg.record_every = 2;
  const TimeSeries series = run(s, p, cfg);
  CHECK(series.samples.size() >= 3);
  for (const auto& sample : series.samples) {
    CHECK(sample.norms.at("n1_linf") <= 1e-12);
    CHECK(sample.norms.at("n2_linf") <= 1e-12);
    CHECK(sample.norms.at("c_linf") <= 1e-12);
    CHECK(sample.norms.at("u_linf") <= 1e-12);
    CHECK(std::abs(sample.energy) <= 1e-12);
  }
  CHECK(series.counters.positivity_violations == 0);
  CHECK(series.counters.div_violations == 0);
}

TEST_CASE("short perturbed run keeps the structural counters clean") {
  const DomainSpec dom{1.0, 1.0, 16, 16};
  ModelParams p = case1_params();
  std::mt19937 rng(89);
  State s = random_positive_state(dom, rng);
  s.vel = VectorField(dom);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  cfg.record_every = 3;
  const TimeSeries ts = run(s, p, cfg);
  CHECK(ts.counters.floor_activations == 0);
  CHECK(ts.counters.c_monotonicity_violations == 0);
  CHECK(ts.counters.positivity_violations == 0);
  CHECK(ts.counters.div_violations == 0);
  CHECK(ts.counters.max_mass_residual <= 1e-8);
  CHECK(ts.samples.back().t == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_SUITE_END();
