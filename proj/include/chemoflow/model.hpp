#pragma once

#include <optional>
#include <string>

#include "chemoflow/grid.hpp"

namespace chemoflow {

// Gravitational potential phi; only the analytic gradient enters the solver.
// Linear: phi = gx*x + gy*y, so grad phi = (gx, gy) everywhere.
struct PhiSpec {
  enum class Kind { Linear };
  Kind kind = Kind::Linear;
  double gx = 0.0;
  double gy = -1.0;

  double grad_x(double /*x*/, double /*y*/) const { return gx; }
  double grad_y(double /*x*/, double /*y*/) const { return gy; }

  bool operator==(const PhiSpec&) const = default;
};

struct ModelParams {
  double chi1 = 0.5;  // chemotactic sensitivity of species 1 (>= 0)
  double chi2 = 0.5;
  double mu1 = 1.0;  // kinetic rate of species 1 (> 0)
  double mu2 = 1.0;
  double a1 = 0.5;  // competition felt by species 1 from species 2 (>= 0)
  double a2 = 0.5;
  double alpha = 1.0;  // chemical consumption by species 1 (> 0)
  double beta = 1.0;
  double gamma = 1.0;  // buoyancy coupling of species 1 (> 0)
  double delta = 1.0;
  int convective = 1;  // 0: Stokes flow, 1: full Navier-Stokes convection
  PhiSpec phi{};

  // Throws ParameterError naming the offending field.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

enum class Regime {
  Coexistence,     // a1, a2 in (0,1): both species persist
  FirstExcluded,   // a1 >= 1 > a2: species 1 dies out, limit (0,1)
  SecondExcluded,  // a2 >= 1 > a1: species 2 dies out, limit (1,0)
  Unsupported,     // a1,a2 both >= 1, or a degenerate zero coefficient
};

std::string regime_name(Regime r);

struct Equilibrium {
  double n1_star = 0.0;
  double n2_star = 0.0;
  bool operator==(const Equilibrium&) const = default;
};

// Predicted sup-norm decay of one solution component: exponential rate or
// algebraic exponent, both lower bounds on the true decay speed.
struct DecayBound {
  enum class Form { Exponential, Algebraic } form = Form::Exponential;
  double value = 0.0;
};

// The closed-form rate constants of the active regime. Regime-specific
// entries are unset outside their regime.
struct RateConstants {
  Regime regime = Regime::Unsupported;
  int dim = 2;
  double eps = 0.9;  // interpolation slack used in the u sup-norm bound

  double lambda_p = 0.0;  // first Dirichlet eigenvalue of -Laplace on the rectangle
  double c_rate = 0.0;    // (alpha*N1_hat + beta*N2_hat)/2, sup-norm rate of c

  std::optional<double> tau;    // coexistence: dE1/dt <= -tau * F1
  std::optional<double> kappa;  // coexistence: L2 decay rate of the density distances
  std::optional<double> sigma;  // first excluded: dE2/dt <= -sigma * F2
  std::optional<double> rho;    // second excluded: dE3/dt <= -rho * F3

  // Informational sup-norm predictions (never used as pass/fail bounds).
  DecayBound n1_pred{};
  DecayBound n2_pred{};
  DecayBound u_pred{};
};

// Total, mutually exclusive classification of admissible (a1, a2).
// Throws ParameterError on negative input.
Regime classify_regime(double a1, double a2);

// Limiting state of (n1, n2); throws UnsupportedRegimeError for Unsupported.
Equilibrium equilibrium(const ModelParams& params, Regime regime);

// All closed-form rates for the given regime on the given rectangle.
// eps must lie in (0,1); dim >= 2.
RateConstants rate_constants(const ModelParams& params, Regime regime, const DomainSpec& domain,
                             int dim = 2, double eps = 0.9);

}  // namespace chemoflow
