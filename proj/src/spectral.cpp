#include "chemoflow/spectral.hpp"

#include <cmath>
#include <vector>

#include "chemoflow/errors.hpp"
#include "chemoflow/operators.hpp"
#include "mat_ops.hpp"

namespace chemoflow {

namespace {

void normalize_columns(std::vector<double>& B, int n) {
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += B[static_cast<size_t>(i) * n + k] * B[static_cast<size_t>(i) * n + k];
    const double inv = 1.0 / std::sqrt(s);
    for (int i = 0; i < n; ++i) B[static_cast<size_t>(i) * n + k] *= inv;
  }
}

}  // namespace

EigenBasis EigenBasis::reflect_cells(int n, double h) {
  EigenBasis e;
  e.n = n;
  e.B.resize(static_cast<size_t>(n) * n);
  e.lam.resize(n);
  for (int k = 0; k < n; ++k) {
    const double theta = M_PI * k / n;
    e.lam[k] = -(2.0 / (h * h)) * (1.0 - std::cos(theta));
    for (int i = 0; i < n; ++i)
      e.B[static_cast<size_t>(i) * n + k] = std::cos(theta * (i + 0.5));
  }
  normalize_columns(e.B, n);
  return e;
}

EigenBasis EigenBasis::antireflect_cells(int n, double h) {
  EigenBasis e;
  e.n = n;
  e.B.resize(static_cast<size_t>(n) * n);
  e.lam.resize(n);
  for (int k = 0; k < n; ++k) {
    const double theta = M_PI * (k + 1) / n;
    e.lam[k] = -(2.0 / (h * h)) * (1.0 - std::cos(theta));
    for (int i = 0; i < n; ++i)
      e.B[static_cast<size_t>(i) * n + k] = std::sin(theta * (i + 0.5));
  }
  normalize_columns(e.B, n);
  return e;
}

EigenBasis EigenBasis::dirichlet_nodes(int n_cells, double h) {
  const int m = n_cells - 1;
  EigenBasis e;
  e.n = m;
  e.B.resize(static_cast<size_t>(m) * m);
  e.lam.resize(m);
  for (int k = 0; k < m; ++k) {
    const double theta = M_PI * (k + 1) / n_cells;
    e.lam[k] = -(2.0 / (h * h)) * (1.0 - std::cos(theta));
    for (int i = 0; i < m; ++i)
      e.B[static_cast<size_t>(i) * m + k] = std::sin(theta * (i + 1));
  }
  normalize_columns(e.B, m);
  return e;
}

SpectralWorkspace::SpectralWorkspace(const DomainSpec& dom)
    : dom_(dom),
      cx_(EigenBasis::reflect_cells(dom.nx, dom.dx())),
      cy_(EigenBasis::reflect_cells(dom.ny, dom.dy())),
      ux_(EigenBasis::dirichlet_nodes(dom.nx, dom.dx())),
      uy_(EigenBasis::antireflect_cells(dom.ny, dom.dy())),
      vx_(EigenBasis::antireflect_cells(dom.nx, dom.dx())),
      vy_(EigenBasis::dirichlet_nodes(dom.ny, dom.dy())) {}

namespace {

// Buffers are (rows x cols) row-major; basis tables act along the column
// index (bx, size cols) and the row index (by, size rows).
void to_modes(const double* f, double* work, double* out, const EigenBasis& bx,
              const EigenBasis& by) {
  detail::matmul(f, bx.B.data(), work, by.n, bx.n, bx.n, false, false, true);
  detail::matmul(by.B.data(), work, out, by.n, by.n, bx.n, true, false, true);
}

void from_modes(const double* g, double* work, double* out, const EigenBasis& bx,
                const EigenBasis& by) {
  detail::matmul(by.B.data(), g, work, by.n, by.n, bx.n, false, false, true);
  detail::matmul(work, bx.B.data(), out, by.n, bx.n, bx.n, false, true, true);
}

}  // namespace

ScalarField SpectralWorkspace::helmholtz_neumann(const ScalarField& b, double a) const {
  const int nx = dom_.nx, ny = dom_.ny;
  ScalarField rhs = laplacian_neumann(b);
  double* r = rhs.data();
  const size_t total = rhs.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long q = 0; q < static_cast<long long>(total); ++q) r[q] *= a;

  std::vector<double> work(total), modes(total);
  to_modes(r, work.data(), modes.data(), cx_, cy_);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int ky = 0; ky < ny; ++ky) {
    for (int kx = 0; kx < nx; ++kx) {
      modes[static_cast<size_t>(ky) * nx + kx] /= 1.0 - a * (cx_.lam[kx] + cy_.lam[ky]);
    }
  }
  ScalarField y(dom_);
  from_modes(modes.data(), work.data(), y.data(), cx_, cy_);

  ScalarField x = b;
  double* xd = x.data();
  const double* yd = y.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long q = 0; q < static_cast<long long>(total); ++q) xd[q] += yd[q];
  return x;
}

ScalarField SpectralWorkspace::poisson_neumann(const ScalarField& rhs, double* mean_out) const {
  const int nx = dom_.nx, ny = dom_.ny;
  const size_t total = rhs.size();

  double mean = 0.0;
  for (size_t q = 0; q < total; ++q) mean += rhs.data()[q];
  mean /= static_cast<double>(total);
  if (mean_out) *mean_out = mean;
  for (size_t q = 0; q < total; ++q) {
    if (!std::isfinite(rhs.data()[q])) throw NumericError("poisson_neumann: non-finite rhs");
  }

  std::vector<double> work(total), modes(total);
  to_modes(rhs.data(), work.data(), modes.data(), cx_, cy_);
  modes[0] = 0.0;  // zero-mean compatibility: drop the constant mode
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int ky = 0; ky < ny; ++ky) {
    for (int kx = 0; kx < nx; ++kx) {
      if (kx == 0 && ky == 0) continue;
      modes[static_cast<size_t>(ky) * nx + kx] /= cx_.lam[kx] + cy_.lam[ky];
    }
  }
  ScalarField p(dom_);
  from_modes(modes.data(), work.data(), p.data(), cx_, cy_);

  double pmean = 0.0;
  for (size_t q = 0; q < total; ++q) pmean += p.data()[q];
  pmean /= static_cast<double>(total);
  for (size_t q = 0; q < total; ++q) p.data()[q] -= pmean;
  return p;
}

void SpectralWorkspace::helmholtz_no_slip(VectorField& vel, double a) const {
  const int nx = dom_.nx, ny = dom_.ny;

  // u component: interior vertical faces, (ny rows) x (nx-1 cols).
  {
    const int m = nx - 1;
    std::vector<double> f(static_cast<size_t>(ny) * m), work(f.size()), modes(f.size());
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) f[static_cast<size_t>(j) * m + (i - 1)] = vel.u(i, j);
    to_modes(f.data(), work.data(), modes.data(), ux_, uy_);
    for (int ky = 0; ky < ny; ++ky)
      for (int kx = 0; kx < m; ++kx)
        modes[static_cast<size_t>(ky) * m + kx] /= 1.0 - a * (ux_.lam[kx] + uy_.lam[ky]);
    from_modes(modes.data(), work.data(), f.data(), ux_, uy_);
    for (int j = 0; j < ny; ++j) {
      vel.u(0, j) = 0.0;
      vel.u(nx, j) = 0.0;
      for (int i = 1; i < nx; ++i) vel.u(i, j) = f[static_cast<size_t>(j) * m + (i - 1)];
    }
  }

  // v component: interior horizontal faces, (ny-1 rows) x (nx cols).
  {
    const int m = ny - 1;
    std::vector<double> f(static_cast<size_t>(m) * nx), work(f.size()), modes(f.size());
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) f[static_cast<size_t>(j - 1) * nx + i] = vel.v(i, j);
    to_modes(f.data(), work.data(), modes.data(), vx_, vy_);
    for (int ky = 0; ky < m; ++ky)
      for (int kx = 0; kx < nx; ++kx)
        modes[static_cast<size_t>(ky) * nx + kx] /= 1.0 - a * (vx_.lam[kx] + vy_.lam[ky]);
    from_modes(modes.data(), work.data(), f.data(), vx_, vy_);
    for (int i = 0; i < nx; ++i) {
      vel.v(i, 0) = 0.0;
      vel.v(i, ny) = 0.0;
    }
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) vel.v(i, j) = f[static_cast<size_t>(j - 1) * nx + i];
  }
}

ScalarField poisson_neumann_solve(const ScalarField& rhs, double* mean_out) {
  SpectralWorkspace ws(rhs.domain());
  return ws.poisson_neumann(rhs, mean_out);
}

}  // namespace chemoflow
