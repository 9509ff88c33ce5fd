#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pstokes/fespace.hpp"
#include "pstokes/sparse.hpp"

namespace pstokes {

/// Fields evaluated per cell so that discontinuous discrete fields can be fed
/// through the same quadrature paths as closed-form ones.
using CellVectorField = std::function<Vec2(int cell, Vec2 x)>;
using CellMatrixField = std::function<Mat2(int cell, Vec2 x)>;

enum class RhsMode { classical, reconstructed };

/// Viscous stiffness nu * sum_T int_T grad(phi_j) : grad(phi_i);
/// per-triangle (broken) gradients for Crouzeix-Raviart.
SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& vmap, double nu);

/// Divergence coupling, one row per P0 pressure dof: entry = int_T div phi_j.
SparseMatrix assemble_divergence(const Mesh& mesh, const DofMap& vmap, const DofMap& pmap);

/// Reconstruction operator as a matrix from velocity dofs to H(div) dofs.
/// Column j holds the target-space edge moments of I_h(phi_j), with the edge
/// average of the two traces on interior edges (relevant for Crouzeix-
/// Raviart). Valid pairs: {BernardiRaugel, CrouzeixRaviart} x {RT0, BDM1}.
SparseMatrix assemble_reconstruction(const Mesh& mesh, const DofMap& vmap, const DofMap& tmap);

SparseMatrix assemble_hdiv_mass(const Mesh& mesh, const DofMap& tmap);

std::vector<double> assemble_rhs_classical(const Mesh& mesh, const DofMap& vmap,
                                           const CellVectorField& f, int quad_degree);

/// H(div)-space load vector t_k = int f . psi_k.
std::vector<double> assemble_hdiv_load(const Mesh& mesh, const DofMap& tmap,
                                       const CellVectorField& f, int quad_degree);

/// Right-hand side in either mode; the reconstructed mode computes
/// R^T (H(div) load) and requires R and the target dofmap.
std::vector<double> assemble_rhs(const Mesh& mesh, const DofMap& vmap, const CellVectorField& f,
                                 RhsMode mode, int quad_degree,
                                 const SparseMatrix* reconstruction = nullptr,
                                 const DofMap* tmap = nullptr);

/// b_i = int G : grad(phi_i), the Stokes-projector data functional. Triangles
/// touching singular_point are integrated with the corner-graded rule.
std::vector<double> assemble_gradient_rhs(const Mesh& mesh, const DofMap& vmap,
                                          const CellMatrixField& grad, int quad_degree,
                                          const Vec2* singular_point = nullptr);

/// P0 projection of the broken divergence, one value per triangle.
std::vector<double> cell_mean_divergence(const Mesh& mesh, const DofMap& vmap,
                                         const FeFunction& u);

/// Per-triangle (constant) divergence of an H(div) function.
std::vector<double> cell_divergence_hdiv(const Mesh& mesh, const DofMap& tmap,
                                         const FeFunction& w);

/// Scalar P1 operators for the discrete Helmholtz-Hodge projector.
SparseMatrix assemble_p1_stiffness(const Mesh& mesh, const DofMap& p1map);
std::vector<double> assemble_p1_gradient_load(const Mesh& mesh, const DofMap& p1map,
                                              const CellVectorField& f, int quad_degree);
std::vector<double> p1_integrals(const Mesh& mesh, const DofMap& p1map);

/// All discrete operators for one Stokes solve configuration.
struct StokesOperators {
  SparseMatrix A;       // velocity stiffness, scaled by nu
  SparseMatrix B;       // pressure x velocity divergence coupling
  SparseMatrix R;       // reconstruction (empty when not requested)
  SparseMatrix M_hdiv;  // H(div) mass (empty when not requested)
  std::vector<double> rhs_classical;
  std::vector<double> rhs_reconstructed;  // empty when not requested
};

StokesOperators build_stokes_operators(const Mesh& mesh, const DofMap& vmap, const DofMap& pmap,
                                       const DofMap* tmap, double nu, const CellVectorField& f,
                                       int rhs_quad_degree);

}  // namespace pstokes
