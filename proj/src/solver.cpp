#include "chemoflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chemoflow/errors.hpp"
#include "chemoflow/operators.hpp"

namespace chemoflow {

std::pair<ScalarField, ScalarField> kinetics(const ScalarField& n1, const ScalarField& n2,
                                             const ModelParams& params) {
  ScalarField k1(n1.domain()), k2(n1.domain());
  const double* p1 = n1.data();
  const double* p2 = n2.data();
  double* o1 = k1.data();
  double* o2 = k2.data();
  const long long total = static_cast<long long>(n1.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long q = 0; q < total; ++q) {
    o1[q] = params.mu1 * p1[q] * (1.0 - p1[q] - params.a1 * p2[q]);
    o2[q] = params.mu2 * p2[q] * (1.0 - params.a2 * p1[q] - p2[q]);
  }
  return {std::move(k1), std::move(k2)};
}

ScalarField consumption(const ScalarField& c, const ScalarField& n1, const ScalarField& n2,
                        const ModelParams& params) {
  ScalarField out(c.domain());
  const double* pc = c.data();
  const double* p1 = n1.data();
  const double* p2 = n2.data();
  double* o = out.data();
  const long long total = static_cast<long long>(c.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long q = 0; q < total; ++q)
    o[q] = -(params.alpha * p1[q] + params.beta * p2[q]) * pc[q];
  return out;
}

Stepper::Stepper(const DomainSpec& dom, const ModelParams& params)
    : dom_(dom), params_(params), spectral_(dom) {
  params_.validate();
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_value(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

double Stepper::stable_dt(const State& s, const SolverConfig& cfg) const {
  const int nx = dom_.nx, ny = dom_.ny;
  const double idx = 1.0 / dom_.dx();
  const double idy = 1.0 / dom_.dy();
  const double chi = std::max(params_.chi1, params_.chi2);
  const double inf = std::numeric_limits<double>::infinity();

  // Fastest combined transport+drift speed per direction, face by face.
  double sx = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      double drift = 0.0;
      if (i > 0 && i < nx) drift = chi * std::abs(s.c.at(i, j) - s.c.at(i - 1, j)) * idx;
      sx = std::max(sx, std::abs(s.vel.u(i, j)) + drift);
    }
  }
  double sy = 0.0;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double drift = 0.0;
      if (j > 0 && j < ny) drift = chi * std::abs(s.c.at(i, j) - s.c.at(i, j - 1)) * idy;
      sy = std::max(sy, std::abs(s.vel.v(i, j)) + drift);
    }
  }
  const double courant = sx * idx + sy * idy;
  const double advective = courant > 0.0 ? 1.0 / courant : inf;

  const double n_max = std::max(max_value(s.n1.values()), max_value(s.n2.values()));
  const double reaction = 1.0 / (std::max(params_.mu1, params_.mu2) * (1.0 + n_max));

  const double sink = params_.alpha * max_value(s.n1.values()) +
                      params_.beta * max_value(s.n2.values());
  const double consumption_bound = sink > 0.0 ? 1.0 / sink : inf;

  return cfg.cfl_safety * std::min({advective, reaction, consumption_bound});
}

void Stepper::step(State& s, double dt, double positivity_floor, StepStats* stats) const {
  const long long total = static_cast<long long>(s.n1.size());

  // All explicit terms are evaluated on the input state.
  ScalarField adv1 = advect_scalar(s.n1, s.vel);
  ScalarField adv2 = advect_scalar(s.n2, s.vel);
  ScalarField advc = advect_scalar(s.c, s.vel);
  ScalarField chem1 = chemotaxis_divergence(s.n1, s.c, params_.chi1);
  ScalarField chem2 = chemotaxis_divergence(s.n2, s.c, params_.chi2);
  auto [kin1, kin2] = kinetics(s.n1, s.n2, params_);
  ScalarField sink = consumption(s.c, s.n1, s.n2, params_);

  ScalarField n1s(dom_), n2s(dom_), cs(dom_);
  {
    const double *pn1 = s.n1.data(), *pn2 = s.n2.data(), *pc = s.c.data();
    const double *a1 = adv1.data(), *a2 = adv2.data(), *ac = advc.data();
    const double *h1 = chem1.data(), *h2 = chem2.data();
    const double *r1 = kin1.data(), *r2 = kin2.data(), *rc = sink.data();
    double *q1 = n1s.data(), *q2 = n2s.data(), *qc = cs.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long q = 0; q < total; ++q) {
      q1[q] = pn1[q] + dt * (-a1[q] - h1[q] + r1[q]);
      q2[q] = pn2[q] + dt * (-a2[q] - h2[q] + r2[q]);
      qc[q] = pc[q] + dt * (-ac[q] + rc[q]);
    }
  }

  if (!all_finite(n1s.values())) throw BlowupError("n1", s.t + dt);
  if (!all_finite(n2s.values())) throw BlowupError("n2", s.t + dt);
  if (!all_finite(cs.values())) throw BlowupError("c", s.t + dt);

  // Implicit diffusion.
  ScalarField n1n = spectral_.helmholtz_neumann(n1s, dt);
  ScalarField n2n = spectral_.helmholtz_neumann(n2s, dt);
  ScalarField cn = spectral_.helmholtz_neumann(cs, dt);

  // Velocity: explicit convection, implicit viscosity, buoyancy, projection.
  VectorField vel = s.vel;
  if (params_.convective != 0) {
    VectorField conv = convective_derivative(s.vel);
    const int nx = dom_.nx, ny = dom_.ny;
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) vel.u(i, j) -= dt * conv.u(i, j);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) vel.v(i, j) -= dt * conv.v(i, j);
  }
  spectral_.helmholtz_no_slip(vel, dt);

  {
    // Buoyancy (gamma n1 + delta n2) grad(phi) at interior faces, n averaged
    // to the face; evaluated on the input densities.
    const int nx = dom_.nx, ny = dom_.ny;
    const double dx = dom_.dx(), dy = dom_.dy();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < ny; ++j) {
      const double yc = (j + 0.5) * dy;
      for (int i = 1; i < nx; ++i) {
        const double nf1 = 0.5 * (s.n1.at(i - 1, j) + s.n1.at(i, j));
        const double nf2 = 0.5 * (s.n2.at(i - 1, j) + s.n2.at(i, j));
        vel.u(i, j) += dt * (params_.gamma * nf1 + params_.delta * nf2) *
                       params_.phi.grad_x(i * dx, yc);
      }
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 1; j < ny; ++j) {
      const double yf = j * dy;
      for (int i = 0; i < nx; ++i) {
        const double nf1 = 0.5 * (s.n1.at(i, j - 1) + s.n1.at(i, j));
        const double nf2 = 0.5 * (s.n2.at(i, j - 1) + s.n2.at(i, j));
        vel.v(i, j) += dt * (params_.gamma * nf1 + params_.delta * nf2) *
                       params_.phi.grad_y((i + 0.5) * dx, yf);
      }
    }
  }

  if (!all_finite(vel.u_values()) || !all_finite(vel.v_values()))
    throw BlowupError("vel", s.t + dt);

  // Chorin projection.
  ScalarField div = divergence(vel);
  {
    double* d = div.data();
    const double inv_dt = 1.0 / dt;
    for (long long q = 0; q < total; ++q) d[q] *= inv_dt;
  }
  ScalarField p = spectral_.poisson_neumann(div);
  {
    VectorField gp = gradient(p);
    const int nx = dom_.nx, ny = dom_.ny;
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) vel.u(i, j) -= dt * gp.u(i, j);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) vel.v(i, j) -= dt * gp.v(i, j);
  }

  // Density floor; exact zeros are valid extinct states and stay untouched.
  long long floored = 0;
  for (ScalarField* f : {&n1n, &n2n}) {
    double* d = f->data();
    for (long long q = 0; q < total; ++q) {
      if (d[q] < positivity_floor && d[q] != 0.0) {
        d[q] = positivity_floor;
        ++floored;
      }
    }
  }
  if (stats) stats->floor_activations += floored;

  s.n1 = std::move(n1n);
  s.n2 = std::move(n2n);
  s.c = std::move(cn);
  s.vel = std::move(vel);
  s.pressure = std::move(p);
  s.t += dt;

  if (!all_finite(s.n1.values())) throw BlowupError("n1", s.t);
  if (!all_finite(s.n2.values())) throw BlowupError("n2", s.t);
  if (!all_finite(s.c.values())) throw BlowupError("c", s.t);
  if (!all_finite(s.vel.u_values()) || !all_finite(s.vel.v_values()))
    throw BlowupError("vel", s.t);
}

State step(const State& s, const ModelParams& params, const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ParameterError("dt: must be > 0 for a single step");
  Stepper stepper(s.n1.domain(), params);
  const double limit = stepper.stable_dt(s, cfg);
  if (cfg.dt > limit)
    throw StepRejectionError("step rejected: dt=" + std::to_string(cfg.dt) +
                             " exceeds stable_dt=" + std::to_string(limit));
  State next = s;
  stepper.step(next, cfg.dt, cfg.positivity_floor);
  return next;
}

double stable_dt(const State& s, const ModelParams& params, const SolverConfig& cfg) {
  return Stepper(s.n1.domain(), params).stable_dt(s, cfg);
}

TimeSeries run(const State& initial, const ModelParams& params, const SolverConfig& cfg,
               const SampleProbe& probe) {
  params.validate();
  if (cfg.t_end < 0.0) throw ParameterError("t_end: must be >= 0");
  if (cfg.record_every < 1) throw ParameterError("record_every: must be >= 1");
  const Regime regime = classify_regime(params.a1, params.a2);
  if (regime == Regime::Unsupported)
    throw UnsupportedRegimeError("run: regime is unsupported");

  const DomainSpec dom = initial.n1.domain();
  Stepper stepper(dom, params);

  TimeSeries series;
  series.params = params;
  series.regime = regime;
  series.eq = equilibrium(params, regime);
  series.domain = dom;
  series.dt_nominal = cfg.dt > 0.0 ? cfg.dt : 0.0;

  State s = initial;
  const double area = dom.cell_area();

  auto record = [&](const State& st) {
    LyapunovSample sample = lyapunov(st, params, regime, cfg.positivity_floor);
    // Invariant re-checks at sampling times.
    double n1min = std::numeric_limits<double>::infinity();
    double n2min = n1min, cmin = n1min;
    for (double x : st.n1.values()) n1min = std::min(n1min, x);
    for (double x : st.n2.values()) n2min = std::min(n2min, x);
    for (double x : st.c.values()) cmin = std::min(cmin, x);
    if (n1min < 0.0 || n2min < 0.0 || cmin < 0.0) ++series.counters.positivity_violations;
    const double dmax = max_abs(divergence(st.vel).values());
    series.counters.max_div = std::max(series.counters.max_div, dmax);
    const double uscale = std::max(1.0, norm(st.vel, NormKind::Linf));
    if (dmax > 1e-9 * uscale / std::min(dom.dx(), dom.dy())) ++series.counters.div_violations;
    series.samples.push_back(sample);
    if (probe) probe(sample);
  };

  record(s);

  StepStats stats;
  long long steps_since_record = 0;
  double prev_c_linf = norm(s.c, NormKind::Linf);
  const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);

  while (s.t < cfg.t_end - t_eps) {
    const double limit = stepper.stable_dt(s, cfg);
    double dt;
    if (cfg.dt > 0.0) {
      if (cfg.dt > limit)
        throw StepRejectionError("run: dt=" + std::to_string(cfg.dt) +
                                 " exceeds stable_dt=" + std::to_string(limit) +
                                 " at t=" + std::to_string(s.t));
      dt = cfg.dt;
    } else {
      dt = limit;
    }
    dt = std::min(dt, cfg.t_end - s.t);

    const double mass_before = std::accumulate(s.n1.values().begin(), s.n1.values().end(), 0.0);
    auto [kin1, kin2] = kinetics(s.n1, s.n2, params);
    const double kin_total = std::accumulate(kin1.values().begin(), kin1.values().end(), 0.0);

    stepper.step(s, dt, cfg.positivity_floor, &stats);
    ++series.counters.steps;

    // Mass identity: the kinetic term is the only mass source for n1.
    const double mass_after = std::accumulate(s.n1.values().begin(), s.n1.values().end(), 0.0);
    const double residual =
        std::abs((mass_after - mass_before) / dt - kin_total) * area /
        std::max(1.0, std::abs(kin_total) * area);
    series.counters.max_mass_residual = std::max(series.counters.max_mass_residual, residual);

    const double c_linf = norm(s.c, NormKind::Linf);
    if (c_linf > prev_c_linf * (1.0 + 1e-12)) ++series.counters.c_monotonicity_violations;
    prev_c_linf = c_linf;

    if (++steps_since_record >= cfg.record_every || !(s.t < cfg.t_end - t_eps)) {
      record(s);
      steps_since_record = 0;
    }
  }

  series.counters.floor_activations = stats.floor_activations;
  return series;
}

}  // namespace chemoflow
