#include "chemoflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chemoflow/errors.hpp"

namespace chemoflow {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key()))
      throw ConfigError(path.empty() ? it.key() + ": unknown key"
                                     : path + "." + it.key() + ": unknown key");
  }
}

double get_num(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(path.empty() ? std::string(key) + ": expected a number"
                                   : path + "." + key + ": expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(path.empty() ? std::string(key) + ": expected an integer"
                                   : path + "." + key + ": expected an integer");
  return v.get<int>();
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

namespace {
Config parse_config_checked(const json& doc);
}

Config parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config document: ") + e.what());
  }
  try {
    return parse_config_checked(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
}

namespace {
Config parse_config_checked(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");

  reject_unknown(doc, "", {"a1", "a2", "chi1", "chi2", "mu1", "mu2", "alpha", "beta", "gamma",
                           "delta", "convective", "phi", "domain", "time", "ic", "rates",
                           "out_dir"});

  Config cfg;
  if (!doc.contains("a1")) throw ConfigError("a1: required key is missing");
  if (!doc.contains("a2")) throw ConfigError("a2: required key is missing");
  cfg.params.a1 = get_num(doc, "", "a1", 0.0);
  cfg.params.a2 = get_num(doc, "", "a2", 0.0);
  cfg.params.chi1 = get_num(doc, "", "chi1", cfg.params.chi1);
  cfg.params.chi2 = get_num(doc, "", "chi2", cfg.params.chi2);
  cfg.params.mu1 = get_num(doc, "", "mu1", cfg.params.mu1);
  cfg.params.mu2 = get_num(doc, "", "mu2", cfg.params.mu2);
  cfg.params.alpha = get_num(doc, "", "alpha", cfg.params.alpha);
  cfg.params.beta = get_num(doc, "", "beta", cfg.params.beta);
  cfg.params.gamma = get_num(doc, "", "gamma", cfg.params.gamma);
  cfg.params.delta = get_num(doc, "", "delta", cfg.params.delta);
  cfg.params.convective = get_int(doc, "", "convective", cfg.params.convective);

  if (doc.contains("phi")) {
    const auto& p = doc.at("phi");
    if (!p.is_object()) throw ConfigError("phi: expected an object");
    reject_unknown(p, "phi", {"kind", "gx", "gy"});
    if (p.contains("kind")) {
      const std::string kind = p.at("kind").get<std::string>();
      check(kind == "linear", "phi.kind: unknown potential kind '" + kind + "'");
    }
    cfg.params.phi.gx = get_num(p, "phi", "gx", cfg.params.phi.gx);
    cfg.params.phi.gy = get_num(p, "phi", "gy", cfg.params.phi.gy);
  }

  if (doc.contains("domain")) {
    const auto& d = doc.at("domain");
    if (!d.is_object()) throw ConfigError("domain: expected an object");
    reject_unknown(d, "domain", {"Lx", "Ly", "nx", "ny"});
    cfg.domain.Lx = get_num(d, "domain", "Lx", cfg.domain.Lx);
    cfg.domain.Ly = get_num(d, "domain", "Ly", cfg.domain.Ly);
    cfg.domain.nx = get_int(d, "domain", "nx", cfg.domain.nx);
    cfg.domain.ny = get_int(d, "domain", "ny", cfg.domain.ny);
  }

  if (doc.contains("time")) {
    const auto& t = doc.at("time");
    if (!t.is_object()) throw ConfigError("time: expected an object");
    reject_unknown(t, "time", {"dt", "t_end", "cfl_safety", "positivity_floor", "record_every"});
    cfg.time.dt = get_num(t, "time", "dt", cfg.time.dt);
    cfg.time.t_end = get_num(t, "time", "t_end", cfg.time.t_end);
    cfg.time.cfl_safety = get_num(t, "time", "cfl_safety", cfg.time.cfl_safety);
    cfg.time.positivity_floor = get_num(t, "time", "positivity_floor", cfg.time.positivity_floor);
    cfg.time.record_every = get_int(t, "time", "record_every", cfg.time.record_every);
  }

  if (doc.contains("ic")) {
    const auto& c = doc.at("ic");
    if (!c.is_object()) throw ConfigError("ic: expected an object");
    reject_unknown(c, "ic",
                   {"kind", "amplitude", "extinct_level", "clip_floor", "c0_level",
                    "c0_modulation"});
    if (c.contains("kind")) {
      const std::string kind = c.at("kind").get<std::string>();
      if (kind == "perturbed")
        cfg.ic.kind = IcSpec::Kind::Perturbed;
      else if (kind == "equilibrium")
        cfg.ic.kind = IcSpec::Kind::Equilibrium;
      else
        throw ConfigError("ic.kind: must be 'perturbed' or 'equilibrium'");
    }
    cfg.ic.amplitude = get_num(c, "ic", "amplitude", cfg.ic.amplitude);
    cfg.ic.extinct_level = get_num(c, "ic", "extinct_level", cfg.ic.extinct_level);
    cfg.ic.clip_floor = get_num(c, "ic", "clip_floor", cfg.ic.clip_floor);
    cfg.ic.c0_level = get_num(c, "ic", "c0_level", cfg.ic.c0_level);
    cfg.ic.c0_modulation = get_num(c, "ic", "c0_modulation", cfg.ic.c0_modulation);
  }

  if (doc.contains("rates")) {
    const auto& r = doc.at("rates");
    if (!r.is_object()) throw ConfigError("rates: expected an object");
    reject_unknown(r, "rates", {"eps", "slack"});
    cfg.rates.eps = get_num(r, "rates", "eps", cfg.rates.eps);
    cfg.rates.slack = get_num(r, "rates", "slack", cfg.rates.slack);
  }

  if (doc.contains("out_dir")) {
    if (!doc.at("out_dir").is_string()) throw ConfigError("out_dir: expected a string");
    cfg.out_dir = doc.at("out_dir").get<std::string>();
  }

  // Semantic validation; ModelParams::validate already names its keys.
  try {
    cfg.params.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  check(cfg.domain.Lx > 0.0, "domain.Lx: must be > 0");
  check(cfg.domain.Ly > 0.0, "domain.Ly: must be > 0");
  check(cfg.domain.nx >= 8, "domain.nx: must be >= 8");
  check(cfg.domain.ny >= 8, "domain.ny: must be >= 8");
  check(cfg.time.dt >= 0.0, "time.dt: must be >= 0 (0 selects the stable step)");
  check(cfg.time.t_end >= 0.0, "time.t_end: must be >= 0");
  check(cfg.time.cfl_safety > 0.0 && cfg.time.cfl_safety <= 1.0,
        "time.cfl_safety: must lie in (0,1]");
  check(cfg.time.positivity_floor > 0.0, "time.positivity_floor: must be > 0");
  check(cfg.time.record_every >= 1, "time.record_every: must be >= 1");
  check(cfg.ic.amplitude >= 0.0, "ic.amplitude: must be >= 0");
  check(cfg.ic.extinct_level > 0.0, "ic.extinct_level: must be > 0");
  check(cfg.ic.clip_floor > 0.0, "ic.clip_floor: must be > 0");
  check(cfg.ic.c0_level > 0.0, "ic.c0_level: must be > 0");
  check(std::abs(cfg.ic.c0_modulation) < 1.0, "ic.c0_modulation: must lie in (-1,1)");
  check(cfg.rates.eps > 0.0 && cfg.rates.eps < 1.0, "rates.eps: must lie in (0,1)");
  check(cfg.rates.slack >= 0.0 && cfg.rates.slack < 1.0, "rates.slack: must lie in [0,1)");
  return cfg;
}
}  // namespace

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const Config& cfg) {
  json doc;
  doc["a1"] = cfg.params.a1;
  doc["a2"] = cfg.params.a2;
  doc["chi1"] = cfg.params.chi1;
  doc["chi2"] = cfg.params.chi2;
  doc["mu1"] = cfg.params.mu1;
  doc["mu2"] = cfg.params.mu2;
  doc["alpha"] = cfg.params.alpha;
  doc["beta"] = cfg.params.beta;
  doc["gamma"] = cfg.params.gamma;
  doc["delta"] = cfg.params.delta;
  doc["convective"] = cfg.params.convective;
  doc["phi"] = {{"kind", "linear"}, {"gx", cfg.params.phi.gx}, {"gy", cfg.params.phi.gy}};
  doc["domain"] = {{"Lx", cfg.domain.Lx},
                   {"Ly", cfg.domain.Ly},
                   {"nx", cfg.domain.nx},
                   {"ny", cfg.domain.ny}};
  doc["time"] = {{"dt", cfg.time.dt},
                 {"t_end", cfg.time.t_end},
                 {"cfl_safety", cfg.time.cfl_safety},
                 {"positivity_floor", cfg.time.positivity_floor},
                 {"record_every", cfg.time.record_every}};
  doc["ic"] = {{"kind", cfg.ic.kind == IcSpec::Kind::Perturbed ? "perturbed" : "equilibrium"},
               {"amplitude", cfg.ic.amplitude},
               {"extinct_level", cfg.ic.extinct_level},
               {"clip_floor", cfg.ic.clip_floor},
               {"c0_level", cfg.ic.c0_level},
               {"c0_modulation", cfg.ic.c0_modulation}};
  doc["rates"] = {{"eps", cfg.rates.eps}, {"slack", cfg.rates.slack}};
  doc["out_dir"] = cfg.out_dir;
  return doc.dump(2);
}

State make_initial_state(const Config& cfg, Regime regime) {
  const DomainSpec& dom = cfg.domain;
  const Equilibrium eq = equilibrium(cfg.params, regime);
  State s = State::zeros(dom);

  if (cfg.ic.kind == IcSpec::Kind::Equilibrium) {
    for (int j = 0; j < dom.ny; ++j) {
      for (int i = 0; i < dom.nx; ++i) {
        s.n1.at(i, j) = eq.n1_star;
        s.n2.at(i, j) = eq.n2_star;
      }
    }
    return s;
  }

  const double pi = M_PI;
  for (int j = 0; j < dom.ny; ++j) {
    const double y = (j + 0.5) * dom.dy();
    for (int i = 0; i < dom.nx; ++i) {
      const double x = (i + 0.5) * dom.dx();
      const double bump = std::cos(pi * x / dom.Lx) * std::cos(pi * y / dom.Ly);
      s.n1.at(i, j) = eq.n1_star > 0.0
                          ? std::max(eq.n1_star * (1.0 + cfg.ic.amplitude * bump),
                                     cfg.ic.clip_floor)
                          : cfg.ic.extinct_level;
      s.n2.at(i, j) = eq.n2_star > 0.0
                          ? std::max(eq.n2_star * (1.0 + cfg.ic.amplitude * bump),
                                     cfg.ic.clip_floor)
                          : cfg.ic.extinct_level;
      s.c.at(i, j) = cfg.ic.c0_level * (1.0 + cfg.ic.c0_modulation * std::cos(pi * x / dom.Lx));
    }
  }
  return s;
}

}  // namespace chemoflow
