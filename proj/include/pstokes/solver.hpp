#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pstokes/assembly.hpp"
#include "pstokes/fespace.hpp"
#include "pstokes/mesh.hpp"
#include "pstokes/sparse.hpp"

namespace pstokes {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StokesMode { classical, pressure_robust };
const char* mode_name(StokesMode mode);

/// Constrained saddle-point problem: A u - B^T p = b_v, B u = b_p, with
/// Dirichlet values eliminated and the zero-mean pressure enforced by one
/// area-weighted Lagrange multiplier row.
struct SaddleSystem {
  const SparseMatrix* A = nullptr;
  const SparseMatrix* B = nullptr;
  std::vector<double> rhs_velocity;
  std::vector<double> rhs_pressure;     // divergence data; zero for this problem
  std::vector<double> dirichlet_values; // full velocity length, used on dirichlet dofs
  const DofMap* vmap = nullptr;
  const DofMap* pmap = nullptr;
  const Mesh* mesh = nullptr;
};

struct StokesSolution {
  FeFunction velocity;
  FeFunction pressure;
  StokesMode mode = StokesMode::classical;
  ElementKind element = ElementKind::BernardiRaugel;
  double nu = 1.0;
  int mesh_level = 0;
  double residual = 0.0;    // relative residual of the full discrete system
  double multiplier = 0.0;  // zero-mean Lagrange multiplier
};

/// Sparse direct solve (deterministic, single-threaded). Throws SolverError
/// on a singular factorization or a relative residual above 1e-10.
StokesSolution solve(const SaddleSystem& system);

/// Discrete Stokes projector S_h(v): the same saddle-point solve with unit
/// viscosity, data b_i = int grad(v) : grad(phi_i), homogeneous divergence
/// constraint and the interpolated Dirichlet values of v.
FeFunction solve_stokes_projector(const Mesh& mesh, ElementKind element,
                                  const CellMatrixField& exact_gradient,
                                  const VectorField& exact_velocity, int quad_degree,
                                  const Vec2* singular_point = nullptr);

struct HelmholtzResult {
  FeFunction alpha;       // P1 potential, zero mean
  double remainder_norm;  // || f - grad(alpha_h) ||_L2, estimates || P(f) ||
};

/// Discrete Helmholtz-Hodge projector diagnostics: solves the P1 Neumann
/// problem (grad alpha_h, grad q_h) = (f, grad q_h) with zero-mean constraint.
HelmholtzResult helmholtz_projector(const Mesh& mesh, const CellVectorField& f,
                                    int quad_degree_assembly, int quad_degree_error);

}  // namespace pstokes
