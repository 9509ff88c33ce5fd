#pragma once

#include <vector>

#include "pstokes/assembly.hpp"
#include "pstokes/fespace.hpp"
#include "pstokes/mesh.hpp"
#include "pstokes/sparse.hpp"

namespace pstokes {

struct ErrorReport {
  double h1_error = 0.0;            // || grad_h(v - v_h) ||_L2
  double projector_distance = 0.0;  // || grad_h(v_h - S_h v) ||_L2
  double l2_error = 0.0;
  double divergence_norm = 0.0;     // || pi_h div_h v_h ||_L2
  int dofs = 0;
  double h_max = 0.0;
};

struct ConvergenceRecord {
  std::vector<ErrorReport> levels;
  std::vector<double> eoc_h1;         // per refinement gap
  std::vector<double> eoc_projector;

  void compute_orders();
};

/// Error norms against a closed-form solution. When singular_point is given,
/// triangles touching it are integrated with the corner-graded rule.
double h1_seminorm_error(const Mesh& mesh, const DofMap& vmap, const FeFunction& u,
                         const CellMatrixField& exact_gradient, int quad_degree,
                         const Vec2* singular_point = nullptr);

double l2_error(const Mesh& mesh, const DofMap& vmap, const FeFunction& u,
                const CellVectorField& exact, int quad_degree,
                const Vec2* singular_point = nullptr);

/// Broken H1 seminorm of the coefficient difference through the unit-viscosity
/// stiffness quadratic form. Both functions must share the dof layout.
double projector_distance(const FeFunction& a, const FeFunction& b,
                          const SparseMatrix& stiffness_unit_nu);

/// || pi_h div_h u ||_L2 = sqrt(sum_T area_T mean_div_T^2).
double divergence_l2_norm(const Mesh& mesh, const DofMap& vmap, const FeFunction& u);

/// Experimental orders of convergence for uniformly red-refined meshes
/// (h ratio 2): order_L = log2(e_L / e_{L+1}); NaN where a pair is not
/// strictly positive.
std::vector<double> eoc(const std::vector<double>& errors);

}  // namespace pstokes
