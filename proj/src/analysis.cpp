#include "pstokes/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pstokes/quadrature.hpp"

namespace pstokes {

void ConvergenceRecord::compute_orders() {
  std::vector<double> h1, pd;
  for (const auto& r : levels) {
    h1.push_back(r.h1_error);
    pd.push_back(r.projector_distance);
  }
  eoc_h1 = eoc(h1);
  eoc_projector = eoc(pd);
}

double h1_seminorm_error(const Mesh& mesh, const DofMap& vmap, const FeFunction& u,
                         const CellMatrixField& exact_gradient, int quad_degree,
                         const Vec2* singular_point) {
  const QuadRule rule = triangle_rule(quad_degree);
  const int nloc = vmap.n_local();
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const MappedRule mr = map_rule_singular(rule, g.verts, singular_point);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      eval_vector_basis(vmap.kind, g, mr.bary[q], vals, grads);
      Mat2 gh{};
      for (int l = 0; l < nloc; ++l) gh += grads[l] * u.coeffs[vmap.cell_dofs[t][l]];
      const Mat2 d = exact_gradient(t, mr.points[q]) - gh;
      s += mr.weights[q] * frobenius_dot(d, d);
    }
  }
  return std::sqrt(s);
}

double l2_error(const Mesh& mesh, const DofMap& vmap, const FeFunction& u,
                const CellVectorField& exact, int quad_degree,
                const Vec2* singular_point) {
  const QuadRule rule = triangle_rule(quad_degree);
  const int nloc = vmap.n_local();
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const MappedRule mr = map_rule_singular(rule, g.verts, singular_point);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      eval_vector_basis(vmap.kind, g, mr.bary[q], vals, grads);
      Vec2 uh{};
      for (int l = 0; l < nloc; ++l) uh += vals[l] * u.coeffs[vmap.cell_dofs[t][l]];
      const Vec2 d = exact(t, mr.points[q]) - uh;
      s += mr.weights[q] * dot(d, d);
    }
  }
  return std::sqrt(s);
}

double projector_distance(const FeFunction& a, const FeFunction& b,
                          const SparseMatrix& stiffness_unit_nu) {
  if (a.kind != b.kind || a.coeffs.size() != b.coeffs.size())
    throw std::invalid_argument("projector_distance: dofmap mismatch");
  if (static_cast<int>(a.coeffs.size()) != stiffness_unit_nu.n_rows)
    throw std::invalid_argument("projector_distance: stiffness size mismatch");
  std::vector<double> d(a.coeffs.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.coeffs[i] - b.coeffs[i];
  const auto Ad = stiffness_unit_nu.multiply(d);
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * Ad[i];
  return std::sqrt(std::max(s, 0.0));
}

double divergence_l2_norm(const Mesh& mesh, const DofMap& vmap, const FeFunction& u) {
  const auto means = cell_mean_divergence(mesh, vmap, u);
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    s += mesh.triangle_area(t) * means[t] * means[t];
  return std::sqrt(s);
}

std::vector<double> eoc(const std::vector<double>& errors) {
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] > 0.0 && errors[i + 1] > 0.0)
      orders.push_back(std::log2(errors[i] / errors[i + 1]));
    else
      orders.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return orders;
}

}  // namespace pstokes
