#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "chemoflow/functionals.hpp"
#include "chemoflow/model.hpp"
#include "chemoflow/spectral.hpp"
#include "chemoflow/state.hpp"

namespace chemoflow {

struct SolverConfig {
  double dt = 0.0;        // <= 0: choose stable_dt every step
  double t_end = 60.0;
  double cfl_safety = 0.45;        // factor in (0,1]
  double positivity_floor = 1e-14; // density floor; activations are counted
  int record_every = 5;            // sampling stride in steps

  bool operator==(const SolverConfig&) const = default;
};

// Pointwise Lotka-Volterra reaction terms:
//   mu1 n1 (1 - n1 - a1 n2),  mu2 n2 (1 - a2 n1 - n2).
std::pair<ScalarField, ScalarField> kinetics(const ScalarField& n1, const ScalarField& n2,
                                             const ModelParams& params);

// Pointwise chemical sink -(alpha n1 + beta n2) c.
ScalarField consumption(const ScalarField& c, const ScalarField& n1, const ScalarField& n2,
                        const ModelParams& params);

// Per-step diagnostics filled by Stepper::step.
struct StepStats {
  long long floor_activations = 0;
};

// IMEX advance of the coupled system: upwind transport, chemotaxis, kinetics
// and consumption explicit; diffusion and viscosity implicit via transform
// solves; buoyancy forcing then Chorin projection. Owns the spectral tables
// for its grid.
class Stepper {
 public:
  Stepper(const DomainSpec& dom, const ModelParams& params);

  // Advance by dt; throws BlowupError naming the first non-finite field.
  void step(State& s, double dt, double positivity_floor, StepStats* stats = nullptr) const;

  // cfl_safety * min(advective bound, reaction bound, consumption bound).
  // Diffusion is implicit and imposes no constraint.
  double stable_dt(const State& s, const SolverConfig& cfg) const;

  const SpectralWorkspace& spectral() const { return spectral_; }

 private:
  DomainSpec dom_;
  ModelParams params_;
  SpectralWorkspace spectral_;
};

// Convenience one-shot step: dt = cfg.dt (must be > 0), rejected when it
// exceeds stable_dt.
State step(const State& s, const ModelParams& params, const SolverConfig& cfg);

double stable_dt(const State& s, const ModelParams& params, const SolverConfig& cfg);

// Integrates to cfg.t_end, sampling the Lyapunov functionals and norms every
// record_every steps (plus the initial and final states). The probe, when
// set, sees each sample as soon as it is taken, so partial output survives a
// blow-up. Invariants are re-checked at each sample; violations are counted
// in the returned series.
using SampleProbe = std::function<void(const LyapunovSample&)>;
TimeSeries run(const State& initial, const ModelParams& params, const SolverConfig& cfg,
               const SampleProbe& probe = {});

}  // namespace chemoflow
