#pragma once

#include <vector>

#include "chemoflow/grid.hpp"

namespace chemoflow {

// Orthonormal eigenbasis of the 1-D second-difference operator for one
// boundary closure. Column k of B is the k-th eigenvector, lam[k] its
// eigenvalue (all <= 0).
struct EigenBasis {
  int n = 0;
  std::vector<double> B;    // n x n, row-major, B[i*n + k]
  std::vector<double> lam;  // n

  // Cell-centered, reflection ghosts (Neumann): cos(pi k (i+1/2)/n).
  static EigenBasis reflect_cells(int n, double h);
  // Cell-centered, anti-reflection ghosts (no-slip tangential): sin(pi (k+1)(i+1/2)/n).
  static EigenBasis antireflect_cells(int n, double h);
  // Interior nodes of n cells, Dirichlet walls: sin(pi (k+1)(i+1)/n), n-1 dofs.
  static EigenBasis dirichlet_nodes(int n_cells, double h);
};

// Transform-based direct solvers for one grid; construction precomputes the
// basis tables for every closure the time stepper needs.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const DomainSpec& dom);

  const DomainSpec& domain() const { return dom_; }

  // Solve (I - a*Lap_N) x = b exactly (a >= 0). Solved in delta form
  // x = b + y with (I - a*Lap_N) y = a*Lap_N b, so constants pass through
  // bitwise unchanged.
  ScalarField helmholtz_neumann(const ScalarField& b, double a) const;

  // Solve Lap_N p = rhs - mean(rhs) with zero-mean p. The subtracted mean is
  // reported through mean_out when non-null.
  ScalarField poisson_neumann(const ScalarField& rhs, double* mean_out = nullptr) const;

  // Solve (I - a*Lap) componentwise for the no-slip velocity Laplacian,
  // in place; boundary faces stay 0.
  void helmholtz_no_slip(VectorField& vel, double a) const;

 private:
  DomainSpec dom_;
  EigenBasis cx_, cy_;    // scalars: reflect in x and y
  EigenBasis ux_, uy_;    // u: Dirichlet nodes in x, anti-reflect cells in y
  EigenBasis vx_, vy_;    // v: anti-reflect cells in x, Dirichlet nodes in y
};

// One-shot convenience wrapper over SpectralWorkspace::poisson_neumann.
ScalarField poisson_neumann_solve(const ScalarField& rhs, double* mean_out = nullptr);

}  // namespace chemoflow
