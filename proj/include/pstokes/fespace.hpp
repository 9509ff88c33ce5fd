#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "pstokes/geom.hpp"
#include "pstokes/mesh.hpp"

namespace pstokes {

enum class ElementKind { P1Lagrange, BernardiRaugel, CrouzeixRaviart, P0, RT0, BDM1 };

const char* element_name(ElementKind kind);
int local_dof_count(ElementKind kind);
bool is_hdiv(ElementKind kind);

/// Per-triangle geometry snapshot: vertex coordinates, barycentric gradients
/// and the relation between local (outward, local-direction) and global edge
/// conventions. Local edge i is opposite vertex i.
struct ElementGeometry {
  std::array<Vec2, 3> verts;
  double area;
  std::array<Vec2, 3> grad_lambda;
  std::array<double, 3> edge_length;
  std::array<Vec2, 3> edge_normal;   // global convention
  std::array<int, 3> normal_sign;    // +1 if the global normal is outward here
  std::array<int, 3> tangent_sign;   // +1 if local traversal matches low->high vertex id
  std::array<int, 3> edge_ids;
};

ElementGeometry element_geometry(const Mesh& mesh, int t);

/// Global degree-of-freedom numbering for one element space.
///
/// Numbering is deterministic: vertex dofs first (by vertex index, x before y
/// for vector spaces), then edge dofs (by edge index), then cell dofs.
/// cell_signs relates the element-local dof convention to the global one;
/// with the global-convention bases produced by the eval_* functions below all
/// signs are +1, and the orientation data lives in the mesh edge normals.
struct DofMap {
  ElementKind kind;
  int n_dofs = 0;
  std::vector<std::array<int, 9>> cell_dofs;   // first local_dof_count(kind) entries used
  std::vector<std::array<int, 9>> cell_signs;
  std::vector<int> dirichlet_dofs;             // sorted, on-boundary dofs
  std::vector<char> is_dirichlet;

  int n_local() const { return local_dof_count(kind); }
};

DofMap build_dofmap(const Mesh& mesh, ElementKind kind);

struct FeFunction {
  ElementKind kind;
  std::vector<double> coeffs;
};

/// Basis evaluation at a barycentric point, global dof conventions.
/// Scalar kinds (P1, P0): values and gradients.
/// Vector kinds (BernardiRaugel, CrouzeixRaviart): values and Jacobians.
/// H(div) kinds (RT0, BDM1): values and (per-triangle constant) divergences.
/// Throws std::domain_error if the point lies outside the reference triangle.
void eval_scalar_basis(ElementKind kind, const ElementGeometry& geom,
                       const std::array<double, 3>& bary, std::span<double> values,
                       std::span<Vec2> gradients);
void eval_vector_basis(ElementKind kind, const ElementGeometry& geom,
                       const std::array<double, 3>& bary, std::span<Vec2> values,
                       std::span<Mat2> gradients);
void eval_hdiv_basis(ElementKind kind, const ElementGeometry& geom,
                     const std::array<double, 3>& bary, std::span<Vec2> values,
                     std::span<double> divergences);

using VectorField = std::function<Vec2(Vec2)>;
using ScalarField = std::function<double(Vec2)>;

/// Canonical interpolation onto BernardiRaugel, CrouzeixRaviart, RT0 or BDM1:
/// vertex values, edge means, normal-flux moments. Edge integrals use
/// edge_gauss_points-point Gauss rules. Reproduces fields already in the space.
FeFunction interpolate(const Mesh& mesh, const DofMap& dofmap, const VectorField& v,
                       int edge_gauss_points = 6);

/// Boundary-only interpolation: returns a full-length coefficient vector with
/// values on dirichlet_dofs (zero elsewhere).
std::vector<double> interpolate_dirichlet(const Mesh& mesh, const DofMap& dofmap,
                                          const VectorField& v, int edge_gauss_points = 6);

/// L2 projection onto P0: per-triangle means; subtracts the area-weighted
/// global mean when zero_mean is set.
FeFunction project_p0(const Mesh& mesh, const DofMap& dofmap, const ScalarField& r,
                      bool zero_mean, int quad_degree = 6);

/// Point evaluation of FE functions on a given triangle.
Vec2 eval_velocity(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t,
                   const std::array<double, 3>& bary);
Mat2 eval_velocity_gradient(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t,
                            const std::array<double, 3>& bary);
Vec2 eval_hdiv_value(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t,
                     const std::array<double, 3>& bary);
double eval_p1(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t,
               const std::array<double, 3>& bary);
Vec2 eval_p1_gradient(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t);

}  // namespace pstokes
