#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chemoflow/functionals.hpp"
#include "chemoflow/model.hpp"

namespace chemoflow {

// First sample time after which every positive-equilibrium component stays
// within half its equilibrium value in sup norm (components with N_hat = 0
// are exempt). Throws NoSandwichError when the bracketing is never reached.
double sandwich_time(const TimeSeries& series, const Equilibrium& eq);

// Least-squares slope of -log y versus t over [t_lo, t_hi].
// Requires >= 5 in-window samples and positive values.
double fit_exponential(std::span<const double> t, std::span<const double> y, double t_lo,
                       double t_hi, double* residual_rms = nullptr);

// Least-squares slope of -log y versus log(t + t_offset) over [t_lo, t_hi].
double fit_algebraic(std::span<const double> t, std::span<const double> y, double t_offset,
                     double t_lo, double t_hi, double* residual_rms = nullptr);

struct RateFit {
  std::string label;
  std::string kind;  // "exponential" or "algebraic"
  double window_lo = 0.0;
  double window_hi = 0.0;
  int samples_used = 0;
  std::optional<double> fitted;
  double residual_rms = 0.0;
  std::optional<double> bound;  // predicted lower bound on the decay speed
  bool pass = false;
  bool informational = false;  // reported but never gated on
};

struct RateReport {
  std::vector<RateFit> entries;
  double t0 = 0.0;        // measured sandwich time
  double t_offset = 1.0;  // offset used by algebraic fits, max(1, t0)
  bool complete = true;   // false when a quantity could not be fitted
  bool all_pass = false;
};

// Fits the regime's quantities over the tail window and renders verdicts
// against the predicted lower bounds; PASS when fitted >= bound*(1-slack).
// Fit windows are truncated where a squared-norm quantity falls below its
// numerical noise floor.
RateReport verdicts(const TimeSeries& series, const RateConstants& rc, Regime regime,
                    double slack = 0.1);

}  // namespace chemoflow
