#include "chemoflow/operators.hpp"

namespace chemoflow {

void VectorField::enforce_no_slip() {
  const int nx = dom_.nx, ny = dom_.ny;
  for (int j = 0; j < ny; ++j) {
    u(0, j) = 0.0;
    u(nx, j) = 0.0;
  }
  for (int i = 0; i < nx; ++i) {
    v(i, 0) = 0.0;
    v(i, ny) = 0.0;
  }
}

ScalarField laplacian_neumann(const ScalarField& f) {
  const int nx = f.nx(), ny = f.ny();
  const double idx2 = 1.0 / (f.domain().dx() * f.domain().dx());
  const double idy2 = 1.0 / (f.domain().dy() * f.domain().dy());
  ScalarField out(f.domain());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double fc = f.at(i, j);
      const double fl = (i > 0) ? f.at(i - 1, j) : fc;
      const double fr = (i < nx - 1) ? f.at(i + 1, j) : fc;
      const double fd = (j > 0) ? f.at(i, j - 1) : fc;
      const double fu = (j < ny - 1) ? f.at(i, j + 1) : fc;
      out.at(i, j) = ((fl - fc) + (fr - fc)) * idx2 + ((fd - fc) + (fu - fc)) * idy2;
    }
  }
  return out;
}

ScalarField chemotaxis_divergence(const ScalarField& n, const ScalarField& c, double chi) {
  const int nx = n.nx(), ny = n.ny();
  const double idx = 1.0 / n.domain().dx();
  const double idy = 1.0 / n.domain().dy();
  ScalarField out(n.domain());

  // Drift flux through the vertical face left of cell i; walls carry no flux.
  auto flux_x = [&](int i, int j) -> double {
    if (i == 0 || i == nx) return 0.0;
    const double w = chi * (c.at(i, j) - c.at(i - 1, j)) * idx;
    return w * (w >= 0.0 ? n.at(i - 1, j) : n.at(i, j));
  };
  auto flux_y = [&](int i, int j) -> double {
    if (j == 0 || j == ny) return 0.0;
    const double w = chi * (c.at(i, j) - c.at(i, j - 1)) * idy;
    return w * (w >= 0.0 ? n.at(i, j - 1) : n.at(i, j));
  };

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      out.at(i, j) =
          (flux_x(i + 1, j) - flux_x(i, j)) * idx + (flux_y(i, j + 1) - flux_y(i, j)) * idy;
    }
  }
  return out;
}

ScalarField advect_scalar(const ScalarField& f, const VectorField& vel) {
  const int nx = f.nx(), ny = f.ny();
  const double idx = 1.0 / f.domain().dx();
  const double idy = 1.0 / f.domain().dy();
  ScalarField out(f.domain());

  // Upwind transport flux; wall ghosts extrapolate the boundary cell value.
  auto flux_x = [&](int i, int j) -> double {
    const double uf = vel.u(i, j);
    double fup;
    if (i == 0)
      fup = f.at(0, j);
    else if (i == nx)
      fup = f.at(nx - 1, j);
    else
      fup = (uf >= 0.0) ? f.at(i - 1, j) : f.at(i, j);
    return uf * fup;
  };
  auto flux_y = [&](int i, int j) -> double {
    const double vf = vel.v(i, j);
    double fup;
    if (j == 0)
      fup = f.at(i, 0);
    else if (j == ny)
      fup = f.at(i, ny - 1);
    else
      fup = (vf >= 0.0) ? f.at(i, j - 1) : f.at(i, j);
    return vf * fup;
  };

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      out.at(i, j) =
          (flux_x(i + 1, j) - flux_x(i, j)) * idx + (flux_y(i, j + 1) - flux_y(i, j)) * idy;
    }
  }
  return out;
}

ScalarField divergence(const VectorField& vel) {
  const int nx = vel.nx(), ny = vel.ny();
  const double idx = 1.0 / vel.domain().dx();
  const double idy = 1.0 / vel.domain().dy();
  ScalarField out(vel.domain());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      out.at(i, j) =
          (vel.u(i + 1, j) - vel.u(i, j)) * idx + (vel.v(i, j + 1) - vel.v(i, j)) * idy;
    }
  }
  return out;
}

VectorField gradient(const ScalarField& p) {
  const int nx = p.nx(), ny = p.ny();
  const double idx = 1.0 / p.domain().dx();
  const double idy = 1.0 / p.domain().dy();
  VectorField g(p.domain());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) g.u(i, j) = (p.at(i, j) - p.at(i - 1, j)) * idx;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) g.v(i, j) = (p.at(i, j) - p.at(i, j - 1)) * idy;
  }
  return g;
}

VectorField convective_derivative(const VectorField& vel) {
  const int nx = vel.nx(), ny = vel.ny();
  const double idx = 1.0 / vel.domain().dx();
  const double idy = 1.0 / vel.domain().dy();
  VectorField out(vel.domain());

  // u faces: i = 1..nx-1, j = 0..ny-1. Tangential ghosts anti-reflect.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double uc = vel.u(i, j);
      const double dudx = (uc >= 0.0) ? (uc - vel.u(i - 1, j)) * idx : (vel.u(i + 1, j) - uc) * idx;
      const double vbar =
          0.25 * (vel.v(i - 1, j) + vel.v(i, j) + vel.v(i - 1, j + 1) + vel.v(i, j + 1));
      const double u_dn = (j > 0) ? vel.u(i, j - 1) : -uc;
      const double u_up = (j < ny - 1) ? vel.u(i, j + 1) : -uc;
      const double dudy = (vbar >= 0.0) ? (uc - u_dn) * idy : (u_up - uc) * idy;
      out.u(i, j) = uc * dudx + vbar * dudy;
    }
  }

  // v faces: i = 0..nx-1, j = 1..ny-1.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double vc = vel.v(i, j);
      const double dvdy = (vc >= 0.0) ? (vc - vel.v(i, j - 1)) * idy : (vel.v(i, j + 1) - vc) * idy;
      const double ubar =
          0.25 * (vel.u(i, j - 1) + vel.u(i + 1, j - 1) + vel.u(i, j) + vel.u(i + 1, j));
      const double v_lf = (i > 0) ? vel.v(i - 1, j) : -vc;
      const double v_rt = (i < nx - 1) ? vel.v(i + 1, j) : -vc;
      const double dvdx = (ubar >= 0.0) ? (vc - v_lf) * idx : (v_rt - vc) * idx;
      out.v(i, j) = ubar * dvdx + vc * dvdy;
    }
  }
  return out;
}

}  // namespace chemoflow
