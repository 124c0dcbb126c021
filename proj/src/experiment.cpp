#include "chemoflow/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "chemoflow/errors.hpp"
#include "chemoflow/rates.hpp"
#include "chemoflow/solver.hpp"

namespace chemoflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_row(const LyapunovSample& s) {
  std::string row = fmt(s.t) + "," + fmt(s.energy) + "," + fmt(s.dissipation);
  for (const auto& key : norm_keys()) row += "," + fmt(s.norms.at(key));
  return row + "\n";
}

json counters_json(const RunCounters& c) {
  return json{{"steps", c.steps},
              {"floor_activations", c.floor_activations},
              {"c_monotonicity_violations", c.c_monotonicity_violations},
              {"positivity_violations", c.positivity_violations},
              {"div_violations", c.div_violations},
              {"max_div_linf", c.max_div},
              {"max_mass_residual", c.max_mass_residual}};
}

json rate_report_json(const RateReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json item{{"label", e.label},
              {"kind", e.kind},
              {"informational", e.informational},
              {"pass", e.pass}};
    if (e.fitted) {
      item["fitted"] = *e.fitted;
      item["window"] = {e.window_lo, e.window_hi};
      item["samples_used"] = e.samples_used;
      item["residual_rms"] = e.residual_rms;
    }
    if (e.bound) item["bound"] = *e.bound;
    entries.push_back(item);
  }
  return json{{"entries", entries},
              {"t0", r.t0},
              {"t_offset", r.t_offset},
              {"complete", r.complete},
              {"all_pass", r.all_pass}};
}

json dissipation_json(const DissipationReport& d) {
  return json{{"pass", d.pass},
              {"violations", d.violations},
              {"worst_residual", d.worst_residual},
              {"worst_time", d.worst_time},
              {"samples_checked", d.samples_checked},
              {"rate", d.rate},
              {"tol_abs", d.tol_abs},
              {"tol_rel", d.tol_rel}};
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Log-scale decay plots for one run: reads series.csv and summary.json
from this script's directory and writes decay.png next to them."""
import csv
import json
import math
import os
import sys

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "series.csv"))))
summary = json.load(open(os.path.join(here, "summary.json")))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required to render the plot")

t = [float(r["t"]) for r in rows]
series = {
    "E": [float(r["E"]) for r in rows],
    "|n1-N1|_2^2 + |n2-N2|_2^2": [float(r["n1_l2sq"]) + float(r["n2_l2sq"]) for r in rows],
    "|c|_inf": [float(r["c_linf"]) for r in rows],
    "|u|_2^2": [float(r["u_l2sq"]) for r in rows],
}

fig, ax = plt.subplots(figsize=(8, 5))
for label, y in series.items():
    ts = [a for a, b in zip(t, y) if b > 0]
    ys = [b for b in y if b > 0]
    if ts:
        ax.semilogy(ts, ys, label=label)

# Reference slopes from the fitted-rate report.
report = summary.get("rate_report", {})
for entry in report.get("entries", []):
    if entry.get("informational") or "bound" not in entry or "window" not in entry:
        continue
    lo, hi = entry["window"]
    b = entry["bound"]
    if entry["kind"] == "exponential":
        y0 = 10 ** (-1)
        ax.semilogy([lo, hi], [y0, y0 * math.exp(-b * (hi - lo))], "--", lw=1,
                    label=f"{entry['label']} bound {b:.3g}")
    else:
        t1 = report.get("t_offset", 1.0)
        y0 = 10 ** (-1)
        ax.semilogy([lo, hi], [y0, y0 * ((hi + t1) / (lo + t1)) ** (-b)], "--", lw=1,
                    label=f"{entry['label']} exponent {b:.3g}")

ax.set_xlabel("t")
ax.set_title(f"decay curves ({summary.get('regime', '?')})")
ax.legend(fontsize=7)
fig.tight_layout()
out = os.path.join(here, "decay.png")
fig.savefig(out, dpi=130)
print(out)
)PY";

}  // namespace

std::string csv_header() {
  std::string h = "t,E,F";
  for (const auto& key : norm_keys()) h += "," + key;
  return h;
}

json rate_constants_json(const RateConstants& rc) {
  json j{{"regime", regime_name(rc.regime)},
         {"dim", rc.dim},
         {"eps", rc.eps},
         {"lambda_p", rc.lambda_p},
         {"c_rate", rc.c_rate}};
  if (rc.tau) j["tau"] = *rc.tau;
  if (rc.kappa) j["kappa"] = *rc.kappa;
  if (rc.sigma) j["sigma"] = *rc.sigma;
  if (rc.rho) j["rho"] = *rc.rho;
  auto pred = [](const DecayBound& b) {
    return json{{"form", b.form == DecayBound::Form::Exponential ? "exponential" : "algebraic"},
                {"value", b.value}};
  };
  j["predicted_linf"] = {{"n1", pred(rc.n1_pred)}, {"n2", pred(rc.n2_pred)}, {"u", pred(rc.u_pred)}};
  return j;
}

RunArtifacts run_experiment(const Config& cfg, const std::string& out_dir) {
  RunArtifacts art;
  fs::create_directories(out_dir);
  art.csv_path = (fs::path(out_dir) / "series.csv").string();
  art.json_path = (fs::path(out_dir) / "summary.json").string();
  art.plot_path = (fs::path(out_dir) / "plot.py").string();

  json summary;
  summary["config"] = json::parse(serialize_config(cfg));

  auto finish = [&](int code, const std::string& status) {
    summary["status"] = status;
    summary["exit_code"] = code;
    std::ofstream js(art.json_path);
    js << summary.dump(2) << "\n";
    std::ofstream ps(art.plot_path);
    ps << kPlotScript;
    art.exit_code = code;
    art.summary = summary;
    return art;
  };

  const Regime regime = classify_regime(cfg.params.a1, cfg.params.a2);
  summary["regime"] = regime_name(regime);
  if (regime == Regime::Unsupported) {
    std::fprintf(stderr, "unsupported regime: a1=%g a2=%g falls outside the three cases\n",
                 cfg.params.a1, cfg.params.a2);
    return finish(kExitUnsupported, "unsupported_regime");
  }

  const Equilibrium eq = equilibrium(cfg.params, regime);
  summary["equilibrium"] = {{"n1", eq.n1_star}, {"n2", eq.n2_star}};
  const RateConstants rc =
      rate_constants(cfg.params, regime, cfg.domain, 2, cfg.rates.eps);
  summary["rate_constants"] = rate_constants_json(rc);

  std::ofstream csv(art.csv_path);
  csv << csv_header() << "\n";
  const State initial = make_initial_state(cfg, regime);

  TimeSeries series;
  try {
    series = run(initial, cfg.params, cfg.time,
                 [&](const LyapunovSample& s) { csv << csv_row(s); });
  } catch (const BlowupError& e) {
    csv.flush();
    summary["blowup"] = {{"field", e.field}, {"last_valid_time", e.time}};
    return finish(kExitBlowup, "blowup");
  }
  csv.flush();

  summary["invariants"] = counters_json(series.counters);
  summary["samples"] = series.samples.size();

  if (series.samples.size() < 3) return finish(kExitInsufficient, "insufficient_data");

  double t0 = 0.0;
  try {
    t0 = sandwich_time(series, eq);
  } catch (const NoSandwichError&) {
    return finish(kExitNoSandwich, "no_sandwich");
  }
  summary["sandwich_t0"] = t0;

  const RateReport report = verdicts(series, rc, regime, cfg.rates.slack);
  summary["rate_report"] = rate_report_json(report);

  double lyap_rate = 0.0;
  if (rc.tau) lyap_rate = *rc.tau;
  if (rc.sigma) lyap_rate = *rc.sigma;
  if (rc.rho) lyap_rate = *rc.rho;
  const DissipationReport diss =
      check_dissipation(series.samples, lyap_rate, 1e-10, 0.02, t0);
  summary["dissipation"] = dissipation_json(diss);
  summary["dissipation"]["energy_increases_after_t0"] =
      count_energy_increases(series.samples, t0, 1e-8);

  long long log_floor_hits = 0;
  for (const auto& s : series.samples) log_floor_hits += s.log_floor_hits;
  summary["invariants"]["log_floor_hits"] = log_floor_hits;

  const auto& cnt = series.counters;
  const bool counters_clean = cnt.floor_activations == 0 && cnt.c_monotonicity_violations == 0 &&
                              cnt.positivity_violations == 0 && cnt.div_violations == 0;
  const bool ok = report.all_pass && diss.pass && counters_clean;
  return finish(ok ? kExitOk : kExitFailedChecks, ok ? "ok" : "failed_checks");
}

json sweep(const Config& base, const std::vector<double>& a1_values,
           const std::vector<double>& a2_values, int jobs, const std::string& out_dir) {
  if (jobs < 1) throw ParameterError("jobs: must be >= 1");
  fs::create_directories(out_dir);

  struct Point {
    double a1, a2;
    std::string dir;
  };
  std::vector<Point> points;
  for (size_t i = 0; i < a1_values.size(); ++i) {
    for (size_t k = 0; k < a2_values.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "p%02zu_%02zu", i, k);
      points.push_back({a1_values[i], a2_values[k], (fs::path(out_dir) / name).string()});
    }
  }

  std::vector<json> results(points.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
#ifdef _OPENMP
    // Sweep points already run concurrently; keep each point single threaded.
    if (jobs > 1) omp_set_num_threads(1);
#endif
    while (true) {
      const size_t idx = next.fetch_add(1);
      if (idx >= points.size()) break;
      const Point& pt = points[idx];
      Config cfg = base;
      cfg.params.a1 = pt.a1;
      cfg.params.a2 = pt.a2;
      json entry{{"a1", pt.a1}, {"a2", pt.a2}};
      try {
        const RunArtifacts art = run_experiment(cfg, pt.dir);
        entry["regime"] = art.summary.value("regime", "unsupported");
        entry["status"] = art.summary.value("status", "error");
        entry["exit_code"] = art.exit_code;
        if (art.summary.contains("equilibrium")) entry["equilibrium"] = art.summary["equilibrium"];
        if (art.summary.contains("sandwich_t0")) entry["sandwich_t0"] = art.summary["sandwich_t0"];
        if (art.summary.contains("rate_report")) {
          json fits = json::array();
          for (const auto& e : art.summary["rate_report"]["entries"]) {
            if (e.value("informational", false)) continue;
            json f{{"label", e["label"]}, {"pass", e["pass"]}};
            if (e.contains("fitted")) f["fitted"] = e["fitted"];
            if (e.contains("bound")) f["bound"] = e["bound"];
            fits.push_back(f);
          }
          entry["fits"] = fits;
        }
        if (art.summary.contains("dissipation"))
          entry["dissipation_pass"] = art.summary["dissipation"]["pass"];
      } catch (const std::exception& e) {
        entry["status"] = "error";
        entry["error"] = e.what();
      }
      results[idx] = std::move(entry);
    }
  };

  std::vector<std::thread> pool;
  const size_t n_workers = std::min<size_t>(jobs, points.size());
  pool.reserve(n_workers);
  for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  json aggregate;
  aggregate["a1_values"] = a1_values;
  aggregate["a2_values"] = a2_values;
  aggregate["points"] = results;

  std::ofstream out(fs::path(out_dir) / "sweep.json");
  out << aggregate.dump(2) << "\n";
  return aggregate;
}

}  // namespace chemoflow
