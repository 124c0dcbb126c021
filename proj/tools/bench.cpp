// Benchmark of the OpenMP kernels against the serial reference implementation:
// per-kernel timings, speedup, and the max deviation between the two paths.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "chemoflow/operators.hpp"
#include "chemoflow/solver.hpp"
#include "chemoflow/spectral.hpp"

using namespace chemoflow;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int iters) {
  fn();  // warm up
  const auto start = clock_type::now();
  for (int k = 0; k < iters; ++k) fn();
  const auto stop = clock_type::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / iters;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (size_t q = 0; q < a.size(); ++q) m = std::max(m, std::abs(a.data()[q] - b.data()[q]));
  return m;
}

double max_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (size_t q = 0; q < a.u_values().size(); ++q)
    m = std::max(m, std::abs(a.u_values()[q] - b.u_values()[q]));
  for (size_t q = 0; q < a.v_values().size(); ++q)
    m = std::max(m, std::abs(a.v_values()[q] - b.v_values()[q]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 256;
  const int iters = argc > 2 ? std::atoi(argv[2]) : 20;
  DomainSpec dom{1.0, 1.0, n, n};

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  ScalarField f(dom), c(dom);
  for (auto& x : f.values()) x = dist(rng);
  for (auto& x : c.values()) x = dist(rng);
  VectorField vel(dom);
  for (auto& x : vel.u_values()) x = dist(rng) - 0.55;
  for (auto& x : vel.v_values()) x = dist(rng) - 0.55;
  vel.enforce_no_slip();

#ifdef _OPENMP
  std::printf("grid %dx%d, %d iterations, %d threads\n", n, n, iters, omp_get_max_threads());
#else
  std::printf("grid %dx%d, %d iterations, OpenMP disabled\n", n, n, iters);
#endif
  std::printf("%-24s %10s %10s %8s %12s\n", "kernel", "omp ms", "serial ms", "speedup",
              "max |diff|");

  auto report = [&](const char* name, double t_par, double t_ser, double diff) {
    std::printf("%-24s %10.3f %10.3f %7.2fx %12.3e\n", name, t_par, t_ser, t_ser / t_par, diff);
  };

  {
    const double tp = time_ms([&] { laplacian_neumann(f); }, iters);
    const double ts = time_ms([&] { serial::laplacian_neumann(f); }, iters);
    report("laplacian_neumann", tp, ts, max_diff(laplacian_neumann(f), serial::laplacian_neumann(f)));
  }
  {
    const double tp = time_ms([&] { chemotaxis_divergence(f, c, 0.5); }, iters);
    const double ts = time_ms([&] { serial::chemotaxis_divergence(f, c, 0.5); }, iters);
    report("chemotaxis_divergence", tp, ts,
           max_diff(chemotaxis_divergence(f, c, 0.5), serial::chemotaxis_divergence(f, c, 0.5)));
  }
  {
    const double tp = time_ms([&] { advect_scalar(f, vel); }, iters);
    const double ts = time_ms([&] { serial::advect_scalar(f, vel); }, iters);
    report("advect_scalar", tp, ts, max_diff(advect_scalar(f, vel), serial::advect_scalar(f, vel)));
  }
  {
    const double tp = time_ms([&] { convective_derivative(vel); }, iters);
    const double ts = time_ms([&] { serial::convective_derivative(vel); }, iters);
    report("convective_derivative", tp, ts,
           max_diff(convective_derivative(vel), serial::convective_derivative(vel)));
  }

  // Full IMEX step: OpenMP team vs. pinned single thread.
  {
    ModelParams params;
    params.a1 = 0.5;
    params.a2 = 0.5;
    Stepper stepper(dom, params);
    State s = State::zeros(dom);
    for (auto& x : s.n1.values()) x = dist(rng);
    for (auto& x : s.n2.values()) x = dist(rng);
    for (auto& x : s.c.values()) x = 0.2 * dist(rng);
    const double dt = 1e-4;
    auto one_step = [&] {
      State tmp = s;
      stepper.step(tmp, dt, 1e-14);
    };
    const double tp = time_ms(one_step, std::max(1, iters / 4));
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double ts = time_ms(one_step, std::max(1, iters / 4));
    omp_set_num_threads(saved);
#else
    const double ts = tp;
#endif
    report("full IMEX step", tp, ts, 0.0);
  }
  return 0;
}
