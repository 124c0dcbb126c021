#pragma once

#include "chemoflow/grid.hpp"

namespace chemoflow {

// 5-point Laplacian with ghost-cell reflection (zero normal derivative).
// Annihilates constants exactly.
ScalarField laplacian_neumann(const ScalarField& f);

// Flux-form divergence of chi * n * grad(c); the face value of n is upwinded
// on the sign of the drift chi * grad(c). Zero flux through the walls, so the
// area-weighted sum of the output vanishes.
ScalarField chemotaxis_divergence(const ScalarField& n, const ScalarField& c, double chi);

// First-order upwind u . grad(f) at cell centers, in flux form; coincides with
// the advective form when vel is discretely divergence free.
ScalarField advect_scalar(const ScalarField& f, const VectorField& vel);

// MAC divergence at cell centers.
ScalarField divergence(const VectorField& vel);

// MAC gradient at faces; wall faces get 0, matching the Neumann closure of
// the pressure. Adjoint to -divergence under the discrete inner products.
VectorField gradient(const ScalarField& p);

// Upwind (u . grad)u at the staggered faces; tangential ghosts use the
// anti-reflection no-slip closure.
VectorField convective_derivative(const VectorField& vel);

// Serial reference kernels: same formulas, plain loops, no threading.
// Kept for testing the parallel kernels and as the benchmark baseline.
namespace serial {
ScalarField laplacian_neumann(const ScalarField& f);
ScalarField chemotaxis_divergence(const ScalarField& n, const ScalarField& c, double chi);
ScalarField advect_scalar(const ScalarField& f, const VectorField& vel);
ScalarField divergence(const VectorField& vel);
VectorField gradient(const ScalarField& p);
VectorField convective_derivative(const VectorField& vel);
}  // namespace serial

}  // namespace chemoflow
