#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "chemoflow/model.hpp"
#include "chemoflow/state.hpp"

namespace chemoflow {

enum class NormKind { L1, L2sq, Linf };

// Midpoint-quadrature norm of (f - shift).
double norm(const ScalarField& f, NormKind kind, double shift = 0.0);
// Norm over both staggered components (reference state is 0).
double norm(const VectorField& f, NormKind kind);

// One time-stamped evaluation of the regime's Lyapunov pair plus the
// distance-to-equilibrium norm set.
struct LyapunovSample {
  double t = 0.0;
  double energy = 0.0;       // E of the active regime
  double dissipation = 0.0;  // F of the active regime
  std::map<std::string, double> norms;
  long long log_floor_hits = 0;  // times a log argument had to be floored
};

// Fixed column order of the norm set, shared by CSV output and tests.
const std::vector<std::string>& norm_keys();

// Evaluates (E, F) for the regime's Lyapunov functional together with the
// norm set. Logarithm arguments are floored at positivity_floor; activations
// of the floor are counted in the sample.
LyapunovSample lyapunov(const State& s, const ModelParams& params, Regime regime,
                        double positivity_floor = 1e-14);

struct DissipationReport {
  bool pass = false;
  int violations = 0;
  double worst_residual = 0.0;  // max of dE/dt + rate*F over checked samples
  double worst_time = 0.0;
  int samples_checked = 0;
  double rate = 0.0;
  double tol_abs = 0.0;
  double tol_rel = 0.0;
};

// Verifies dE/dt <= -rate*F at every interior sample with t >= t_start,
// using the 3-point nonuniform centered difference for dE/dt. A sample
// passes when dE/dt + rate*F <= tol_abs + tol_rel*|dE/dt|.
// Throws InputError on unsorted times or fewer than 3 samples.
DissipationReport check_dissipation(std::span<const LyapunovSample> samples, double rate,
                                    double tol_abs = 1e-10, double tol_rel = 0.02,
                                    double t_start = 0.0);

// Counts samples with t >= t_start where E increased by more than
// rel_tol * max(|E_k|, floor_scale).
int count_energy_increases(std::span<const LyapunovSample> samples, double t_start,
                           double rel_tol = 1e-8);

// Case-I quadratic comparison between E1 and the squared L2 distances,
// valid while the trajectory stays inside the equilibrium bracket.
struct SandwichCheck {
  bool applicable = false;  // bracketing held at this sample
  bool pass = false;
  double lower = 0.0;  // (2/9) min{1/N1, a1 mu1/(a2 mu2 N2)} * F1
  double upper = 0.0;  // 2 max{...} * F1 + c-term of E1
  double energy = 0.0;
};
SandwichCheck check_quadratic_sandwich(const LyapunovSample& sample, const ModelParams& params,
                                       const Equilibrium& eq);

// Run-level counters maintained by the integrator.
struct RunCounters {
  long long steps = 0;
  long long floor_activations = 0;
  long long c_monotonicity_violations = 0;
  long long positivity_violations = 0;
  long long div_violations = 0;
  double max_div = 0.0;
  double max_mass_residual = 0.0;
};

// Discrete trace of one run: samples plus the metadata needed to audit it.
struct TimeSeries {
  std::vector<LyapunovSample> samples;
  ModelParams params{};
  Regime regime = Regime::Unsupported;
  Equilibrium eq{};
  DomainSpec domain{};
  double dt_nominal = 0.0;  // 0 when adaptive
  RunCounters counters{};
};

}  // namespace chemoflow
