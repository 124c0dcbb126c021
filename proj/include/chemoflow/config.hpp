#pragma once

#include <string>

#include "chemoflow/model.hpp"
#include "chemoflow/solver.hpp"
#include "chemoflow/state.hpp"

namespace chemoflow {

// Initial data builder. "perturbed" follows the default experiment setup:
//   n_i = N_hat_i (1 + amplitude cos(pi x/Lx) cos(pi y/Ly)) clipped at clip_floor,
//   extinct components (N_hat_i = 0) start at extinct_level,
//   c = c0_level (1 + c0_modulation cos(pi x/Lx)),  u = 0.
// "equilibrium" starts exactly at (N_hat_1, N_hat_2, 0, 0).
struct IcSpec {
  enum class Kind { Perturbed, Equilibrium };
  Kind kind = Kind::Perturbed;
  double amplitude = 0.2;
  double extinct_level = 0.2;
  double clip_floor = 0.01;
  double c0_level = 0.5;
  double c0_modulation = 0.5;

  bool operator==(const IcSpec&) const = default;
};

struct RateCheckOptions {
  double eps = 0.9;   // interpolation slack in (0,1)
  double slack = 0.1; // verdict slack fraction
  bool operator==(const RateCheckOptions&) const = default;
};

struct Config {
  ModelParams params{};
  DomainSpec domain{};
  SolverConfig time{};
  IcSpec ic{};
  RateCheckOptions rates{};
  std::string out_dir;

  bool operator==(const Config&) const = default;
};

// Parses a JSON document into a validated Config. Unknown keys are rejected;
// errors carry the key path. Only a1 and a2 are required.
Config parse_config(const std::string& text);
Config parse_config_file(const std::string& path);

// Canonical JSON serialization; parse(serialize(c)) == c.
std::string serialize_config(const Config& cfg);

// Builds the initial State for the config's regime.
State make_initial_state(const Config& cfg, Regime regime);

}  // namespace chemoflow
