#include "chemoflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemoflow/errors.hpp"

namespace chemoflow {

double norm(const ScalarField& f, NormKind kind, double shift) {
  const double area = f.domain().cell_area();
  double acc = 0.0;
  switch (kind) {
    case NormKind::L1:
      for (double x : f.values()) acc += std::abs(x - shift);
      return acc * area;
    case NormKind::L2sq:
      for (double x : f.values()) acc += (x - shift) * (x - shift);
      return acc * area;
    case NormKind::Linf:
      for (double x : f.values()) acc = std::max(acc, std::abs(x - shift));
      return acc;
  }
  return 0.0;
}

double norm(const VectorField& f, NormKind kind) {
  const double area = f.domain().cell_area();
  double acc = 0.0;
  switch (kind) {
    case NormKind::L1:
      for (double x : f.u_values()) acc += std::abs(x);
      for (double x : f.v_values()) acc += std::abs(x);
      return acc * area;
    case NormKind::L2sq:
      for (double x : f.u_values()) acc += x * x;
      for (double x : f.v_values()) acc += x * x;
      return acc * area;
    case NormKind::Linf:
      for (double x : f.u_values()) acc = std::max(acc, std::abs(x));
      for (double x : f.v_values()) acc = std::max(acc, std::abs(x));
      return acc;
  }
  return 0.0;
}

const std::vector<std::string>& norm_keys() {
  static const std::vector<std::string> keys = {
      "n1_l1", "n1_l2sq", "n1_linf", "n2_l1", "n2_l2sq", "n2_linf",
      "c_linf", "c_l2sq", "u_l2sq", "u_linf"};
  return keys;
}

namespace {

// Integrand of the entropy term: n - N - N log(n/N), evaluated through log1p
// so near-equilibrium values keep full relative accuracy.
double entropy_term(double n, double n_star, double floor_value, long long& floor_hits) {
  double nf = n;
  if (nf < floor_value) {
    nf = floor_value;
    ++floor_hits;
  }
  const double d_raw = n - n_star;
  const double d_floored = nf - n_star;
  return d_raw - n_star * std::log1p(d_floored / n_star);
}

}  // namespace

LyapunovSample lyapunov(const State& s, const ModelParams& params, Regime regime,
                        double positivity_floor) {
  if (regime == Regime::Unsupported)
    throw UnsupportedRegimeError("lyapunov: regime is unsupported");

  const Equilibrium eq = equilibrium(params, regime);
  const double area = s.n1.domain().cell_area();
  const size_t total = s.n1.size();

  LyapunovSample out;
  out.t = s.t;

  double energy = 0.0;
  double dissipation = 0.0;
  long long floor_hits = 0;
  const double* n1 = s.n1.data();
  const double* n2 = s.n2.data();
  const double* c = s.c.data();

  switch (regime) {
    case Regime::Coexistence: {
      const double w2 = params.a1 * params.mu1 / (params.a2 * params.mu2);
      const double cw = 0.5 * (eq.n1_star * params.chi1 * params.chi1 / 4.0 +
                               params.a1 * params.mu1 * eq.n2_star * params.chi2 * params.chi2 /
                                   (4.0 * params.a2 * params.mu2) +
                               1.0);
      double e1 = 0.0, e2 = 0.0, ec = 0.0, fsum = 0.0;
      for (size_t q = 0; q < total; ++q) {
        e1 += entropy_term(n1[q], eq.n1_star, positivity_floor, floor_hits);
        e2 += entropy_term(n2[q], eq.n2_star, positivity_floor, floor_hits);
        ec += c[q] * c[q];
        const double d1 = n1[q] - eq.n1_star;
        const double d2 = n2[q] - eq.n2_star;
        fsum += d1 * d1 + d2 * d2;
      }
      energy = (e1 + w2 * e2 + cw * ec) * area;
      dissipation = fsum * area;
      break;
    }
    case Regime::FirstExcluded: {
      const double w2 = params.mu1 / (params.a2 * params.mu2);
      const double cw = params.mu1 * params.chi2 * params.chi2 / (8.0 * params.a2 * params.mu2);
      double e1 = 0.0, e2 = 0.0, ec = 0.0, fsum = 0.0;
      for (size_t q = 0; q < total; ++q) {
        e1 += n1[q];
        e2 += entropy_term(n2[q], 1.0, positivity_floor, floor_hits);
        ec += c[q] * c[q];
        const double d2 = n2[q] - 1.0;
        fsum += n1[q] * n1[q] + d2 * d2;
      }
      energy = (e1 + w2 * e2 + cw * ec) * area;
      dissipation = fsum * area;
      break;
    }
    case Regime::SecondExcluded: {
      const double w2 = params.a1 * params.mu1 / params.mu2;
      const double cw = params.chi1 * params.chi1 / 8.0;
      double e1 = 0.0, e2 = 0.0, ec = 0.0, fsum = 0.0;
      for (size_t q = 0; q < total; ++q) {
        e1 += entropy_term(n1[q], 1.0, positivity_floor, floor_hits);
        e2 += n2[q];
        ec += c[q] * c[q];
        const double d1 = n1[q] - 1.0;
        fsum += d1 * d1 + n2[q] * n2[q];
      }
      energy = (e1 + w2 * e2 + cw * ec) * area;
      dissipation = fsum * area;
      break;
    }
    case Regime::Unsupported:
      break;
  }

  if (!std::isfinite(energy)) throw NumericError("lyapunov: non-finite energy integrand");
  if (!std::isfinite(dissipation)) throw NumericError("lyapunov: non-finite dissipation integrand");

  out.energy = energy;
  out.dissipation = dissipation;
  out.log_floor_hits = floor_hits;

  out.norms["n1_l1"] = norm(s.n1, NormKind::L1, eq.n1_star);
  out.norms["n1_l2sq"] = norm(s.n1, NormKind::L2sq, eq.n1_star);
  out.norms["n1_linf"] = norm(s.n1, NormKind::Linf, eq.n1_star);
  out.norms["n2_l1"] = norm(s.n2, NormKind::L1, eq.n2_star);
  out.norms["n2_l2sq"] = norm(s.n2, NormKind::L2sq, eq.n2_star);
  out.norms["n2_linf"] = norm(s.n2, NormKind::Linf, eq.n2_star);
  out.norms["c_linf"] = norm(s.c, NormKind::Linf);
  out.norms["c_l2sq"] = norm(s.c, NormKind::L2sq);
  out.norms["u_l2sq"] = norm(s.vel, NormKind::L2sq);
  out.norms["u_linf"] = norm(s.vel, NormKind::Linf);
  return out;
}

DissipationReport check_dissipation(std::span<const LyapunovSample> samples, double rate,
                                    double tol_abs, double tol_rel, double t_start) {
  if (samples.size() < 3) throw InputError("check_dissipation: need at least 3 samples");
  for (size_t k = 1; k < samples.size(); ++k)
    if (!(samples[k].t > samples[k - 1].t))
      throw InputError("check_dissipation: times must be strictly increasing");

  DissipationReport rep;
  rep.rate = rate;
  rep.tol_abs = tol_abs;
  rep.tol_rel = tol_rel;
  rep.worst_residual = -std::numeric_limits<double>::infinity();

  for (size_t k = 1; k + 1 < samples.size(); ++k) {
    if (samples[k].t < t_start) continue;
    const double hp = samples[k + 1].t - samples[k].t;
    const double hm = samples[k].t - samples[k - 1].t;
    const double dEdt = (hm * hm * samples[k + 1].energy +
                         (hp * hp - hm * hm) * samples[k].energy -
                         hp * hp * samples[k - 1].energy) /
                        (hp * hm * (hp + hm));
    const double residual = dEdt + rate * samples[k].dissipation;
    const double threshold = tol_abs + tol_rel * std::abs(dEdt);
    ++rep.samples_checked;
    if (residual > rep.worst_residual) {
      rep.worst_residual = residual;
      rep.worst_time = samples[k].t;
    }
    if (residual > threshold) ++rep.violations;
  }
  if (rep.samples_checked == 0) rep.worst_residual = 0.0;
  rep.pass = rep.violations == 0;
  return rep;
}

int count_energy_increases(std::span<const LyapunovSample> samples, double t_start,
                           double rel_tol) {
  // Quadrature noise floor: energies from double-precision fields on O(1)
  // data are pure roundoff below ~1e-26; jitter down there is not a
  // monotonicity violation.
  double e_max = 0.0;
  for (const auto& s : samples) e_max = std::max(e_max, std::abs(s.energy));
  const double floor_value = std::max(1e-26, 1e-26 * e_max);
  int count = 0;
  for (size_t k = 1; k < samples.size(); ++k) {
    if (samples[k - 1].t < t_start) continue;
    const double prev = samples[k - 1].energy;
    if (samples[k].energy > std::max(prev + rel_tol * std::abs(prev), floor_value)) ++count;
  }
  return count;
}

SandwichCheck check_quadratic_sandwich(const LyapunovSample& sample, const ModelParams& params,
                                       const Equilibrium& eq) {
  SandwichCheck res;
  res.energy = sample.energy;

  const double d1 = sample.norms.at("n1_linf");
  const double d2 = sample.norms.at("n2_linf");
  const bool bracketed = (eq.n1_star == 0.0 || d1 <= 0.5 * eq.n1_star) &&
                         (eq.n2_star == 0.0 || d2 <= 0.5 * eq.n2_star);
  res.applicable = bracketed && eq.n1_star > 0.0 && eq.n2_star > 0.0;
  if (!res.applicable) return res;

  const double ratio = params.a1 * params.mu1 / (params.a2 * params.mu2);
  const double wmin = std::min(1.0 / eq.n1_star, ratio / eq.n2_star);
  const double wmax = std::max(1.0 / eq.n1_star, ratio / eq.n2_star);
  const double dist = sample.norms.at("n1_l2sq") + sample.norms.at("n2_l2sq");
  const double cw = 0.5 * (eq.n1_star * params.chi1 * params.chi1 / 4.0 +
                           params.a1 * params.mu1 * eq.n2_star * params.chi2 * params.chi2 /
                               (4.0 * params.a2 * params.mu2) +
                           1.0);
  res.lower = (2.0 / 9.0) * wmin * dist;
  res.upper = 2.0 * wmax * dist + cw * sample.norms.at("c_l2sq");
  const double slack = 1e-12 * std::max(1.0, std::abs(sample.energy));
  res.pass = res.lower <= sample.energy + slack && sample.energy <= res.upper + slack;
  return res;
}

}  // namespace chemoflow
