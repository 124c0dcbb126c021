#include "chemoflow/model.hpp"

#include <cmath>

#include "chemoflow/errors.hpp"

namespace chemoflow {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

void ModelParams::validate() const {
  require(chi1 >= 0.0, "chi1: must be >= 0");
  require(chi2 >= 0.0, "chi2: must be >= 0");
  require(mu1 > 0.0, "mu1: must be > 0");
  require(mu2 > 0.0, "mu2: must be > 0");
  require(a1 >= 0.0, "a1: must be >= 0");
  require(a2 >= 0.0, "a2: must be >= 0");
  require(alpha > 0.0, "alpha: must be > 0");
  require(beta > 0.0, "beta: must be > 0");
  require(gamma > 0.0, "gamma: must be > 0");
  require(delta > 0.0, "delta: must be > 0");
  require(convective == 0 || convective == 1, "convective: must be 0 or 1");
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Coexistence: return "coexistence";
    case Regime::FirstExcluded: return "first_excluded";
    case Regime::SecondExcluded: return "second_excluded";
    case Regime::Unsupported: return "unsupported";
  }
  return "unsupported";
}

Regime classify_regime(double a1, double a2) {
  if (a1 < 0.0) throw ParameterError("a1: must be >= 0");
  if (a2 < 0.0) throw ParameterError("a2: must be >= 0");
  if (a1 == 0.0 || a2 == 0.0) return Regime::Unsupported;
  if (a1 >= 1.0 && a2 >= 1.0) return Regime::Unsupported;
  if (a1 < 1.0 && a2 < 1.0) return Regime::Coexistence;
  if (a1 >= 1.0) return Regime::FirstExcluded;
  return Regime::SecondExcluded;
}

Equilibrium equilibrium(const ModelParams& params, Regime regime) {
  switch (regime) {
    case Regime::Coexistence: {
      const double denom = 1.0 - params.a1 * params.a2;
      return {(1.0 - params.a1) / denom, (1.0 - params.a2) / denom};
    }
    case Regime::FirstExcluded:
      return {0.0, 1.0};
    case Regime::SecondExcluded:
      return {1.0, 0.0};
    case Regime::Unsupported:
      break;
  }
  throw UnsupportedRegimeError("equilibrium: regime is unsupported");
}

RateConstants rate_constants(const ModelParams& params, Regime regime, const DomainSpec& domain,
                             int dim, double eps) {
  if (regime == Regime::Unsupported)
    throw UnsupportedRegimeError("rate_constants: regime is unsupported");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps: must lie in (0,1)");
  if (dim < 2) throw ParameterError("dim: must be >= 2");
  if (!(domain.Lx > 0.0 && domain.Ly > 0.0)) throw ParameterError("domain: side lengths must be > 0");

  const double a1 = params.a1, a2 = params.a2;
  const double mu1 = params.mu1, mu2 = params.mu2;
  const Equilibrium eq = equilibrium(params, regime);

  RateConstants rc;
  rc.regime = regime;
  rc.dim = dim;
  rc.eps = eps;
  const double pi = M_PI;
  rc.lambda_p = pi * pi * (1.0 / (domain.Lx * domain.Lx) + 1.0 / (domain.Ly * domain.Ly));
  rc.c_rate = (params.alpha * eq.n1_star + params.beta * eq.n2_star) / 2.0;

  const double d = static_cast<double>(dim);
  switch (regime) {
    case Regime::Coexistence: {
      rc.tau = (1.0 - a1 * a2) * mu1 * std::min(0.5, a1 / ((1.0 + a1 * a2) * a2));
      const double comp = std::max(1.0 / eq.n1_star, a1 * mu1 / (a2 * mu2 * eq.n2_star));
      rc.kappa =
          0.5 * std::min(*rc.tau / comp, params.alpha * eq.n1_star + params.beta * eq.n2_star);
      rc.n1_pred = {DecayBound::Form::Exponential, *rc.kappa / (d + 2.0)};
      rc.n2_pred = rc.n1_pred;
      rc.u_pred = {DecayBound::Form::Exponential,
                   eps / (d + 2.0) * std::min(rc.lambda_p, *rc.kappa / 2.0)};
      break;
    }
    case Regime::FirstExcluded: {
      rc.sigma = (1.0 - a2) * mu1 * std::min(1.0 / (2.0 * a2), 1.0 / (1.0 + a2));
      rc.n1_pred = {DecayBound::Form::Algebraic, 1.0 / (d + 1.0)};
      rc.n2_pred = {DecayBound::Form::Algebraic, 1.0 / (d + 2.0)};
      rc.u_pred = {DecayBound::Form::Algebraic, eps / (d + 2.0)};
      break;
    }
    case Regime::SecondExcluded: {
      rc.rho = (1.0 - a1) * mu1 * std::min(0.5, a1 / (1.0 + a1));
      rc.n1_pred = {DecayBound::Form::Algebraic, 1.0 / (d + 2.0)};
      rc.n2_pred = {DecayBound::Form::Algebraic, 1.0 / (d + 1.0)};
      rc.u_pred = {DecayBound::Form::Algebraic, eps / (d + 2.0)};
      break;
    }
    case Regime::Unsupported:
      break;
  }
  return rc;
}

}  // namespace chemoflow
