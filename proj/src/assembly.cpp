#include "pstokes/assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "pstokes/quadrature.hpp"

namespace pstokes {

namespace {

constexpr int kOperatorQuadDegree = 2;  // exact: all operator integrands are quadratic

void require_velocity(const DofMap& vmap, const char* who) {
  if (vmap.kind != ElementKind::BernardiRaugel && vmap.kind != ElementKind::CrouzeixRaviart)
    throw std::invalid_argument(std::string(who) + ": velocity space must be BR or CR");
}

void require_hdiv(const DofMap& tmap, const char* who) {
  if (!is_hdiv(tmap.kind))
    throw std::invalid_argument(std::string(who) + ": target space must be RT0 or BDM1");
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& vmap, double nu) {
  require_velocity(vmap, "assemble_stiffness");
  if (nu <= 0.0) throw std::invalid_argument("assemble_stiffness: nu must be positive");
  const int nloc = vmap.n_local();
  const QuadRule rule = triangle_rule(kOperatorQuadDegree);
  TripletBuffer buf(vmap.n_dofs, vmap.n_dofs);
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    std::array<std::array<double, 9>, 9> local{};
    for (const auto& qp : rule.points) {
      eval_vector_basis(vmap.kind, g, qp.bary, vals, grads);
      const double w = qp.weight * 2.0 * g.area;
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j <= i; ++j) local[i][j] += w * frobenius_dot(grads[i], grads[j]);
    }
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = nu * local[i][j];
        buf.add(vmap.cell_dofs[t][i], vmap.cell_dofs[t][j], v);
        if (i != j) buf.add(vmap.cell_dofs[t][j], vmap.cell_dofs[t][i], v);
      }
  }
  return buf.build();
}

SparseMatrix assemble_divergence(const Mesh& mesh, const DofMap& vmap, const DofMap& pmap) {
  require_velocity(vmap, "assemble_divergence");
  if (pmap.kind != ElementKind::P0)
    throw std::invalid_argument("assemble_divergence: pressure space must be P0");
  const int nloc = vmap.n_local();
  const QuadRule rule = triangle_rule(kOperatorQuadDegree);
  TripletBuffer buf(pmap.n_dofs, vmap.n_dofs);
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    std::array<double, 9> local{};
    for (const auto& qp : rule.points) {
      eval_vector_basis(vmap.kind, g, qp.bary, vals, grads);
      const double w = qp.weight * 2.0 * g.area;
      for (int i = 0; i < nloc; ++i) local[i] += w * grads[i].trace();
    }
    for (int i = 0; i < nloc; ++i) buf.add(pmap.cell_dofs[t][0], vmap.cell_dofs[t][i], local[i]);
  }
  return buf.build();
}

SparseMatrix assemble_reconstruction(const Mesh& mesh, const DofMap& vmap, const DofMap& tmap) {
  require_velocity(vmap, "assemble_reconstruction");
  require_hdiv(tmap, "assemble_reconstruction");
  const int nloc = vmap.n_local();
  const auto gauss = gauss_legendre_01(3);
  TripletBuffer buf(tmap.n_dofs, vmap.n_dofs);
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    for (int le = 0; le < 3; ++le) {
      const int e = g.edge_ids[le];
      // Interior edges contribute the average of the two one-sided traces.
      const double avg = mesh.edge_on_boundary[e] ? 1.0 : 0.5;
      const Vec2 n = g.edge_normal[le];
      const double len = g.edge_length[le];
      for (const auto& gp : gauss) {
        std::array<double, 3> bary{};
        bary[le] = 0.0;
        bary[(le + 1) % 3] = 1.0 - gp.x;
        bary[(le + 2) % 3] = gp.x;
        eval_vector_basis(vmap.kind, g, bary, vals, grads);
        const double w = avg * gp.w * len;
        const double q1 = g.tangent_sign[le] * (2.0 * gp.x - 1.0);
        for (int l = 0; l < nloc; ++l) {
          const double flux = dot(vals[l], n);
          const int col = vmap.cell_dofs[t][l];
          if (tmap.kind == ElementKind::RT0) {
            buf.add(e, col, w * flux);
          } else {
            buf.add(2 * e, col, w * flux);
            buf.add(2 * e + 1, col, w * flux * q1);
          }
        }
      }
    }
  }
  return buf.build();
}

SparseMatrix assemble_hdiv_mass(const Mesh& mesh, const DofMap& tmap) {
  require_hdiv(tmap, "assemble_hdiv_mass");
  const int nloc = tmap.n_local();
  const QuadRule rule = triangle_rule(kOperatorQuadDegree);
  TripletBuffer buf(tmap.n_dofs, tmap.n_dofs);
  std::array<Vec2, 9> vals;
  std::array<double, 9> divs;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    std::array<std::array<double, 9>, 9> local{};
    for (const auto& qp : rule.points) {
      eval_hdiv_basis(tmap.kind, g, qp.bary, vals, divs);
      const double w = qp.weight * 2.0 * g.area;
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j <= i; ++j) local[i][j] += w * dot(vals[i], vals[j]);
    }
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j <= i; ++j) {
        buf.add(tmap.cell_dofs[t][i], tmap.cell_dofs[t][j], local[i][j]);
        if (i != j) buf.add(tmap.cell_dofs[t][j], tmap.cell_dofs[t][i], local[i][j]);
      }
  }
  return buf.build();
}

std::vector<double> assemble_rhs_classical(const Mesh& mesh, const DofMap& vmap,
                                           const CellVectorField& f, int quad_degree) {
  require_velocity(vmap, "assemble_rhs_classical");
  const int nloc = vmap.n_local();
  const QuadRule rule = triangle_rule(quad_degree);
  std::vector<double> b(vmap.n_dofs, 0.0);
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const MappedRule mr = map_rule(rule, g.verts);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      eval_vector_basis(vmap.kind, g, mr.bary[q], vals, grads);
      const Vec2 fx = f(t, mr.points[q]);
      for (int l = 0; l < nloc; ++l)
        b[vmap.cell_dofs[t][l]] += mr.weights[q] * dot(fx, vals[l]);
    }
  }
  return b;
}

std::vector<double> assemble_hdiv_load(const Mesh& mesh, const DofMap& tmap,
                                       const CellVectorField& f, int quad_degree) {
  require_hdiv(tmap, "assemble_hdiv_load");
  const int nloc = tmap.n_local();
  const QuadRule rule = triangle_rule(quad_degree);
  std::vector<double> b(tmap.n_dofs, 0.0);
  std::array<Vec2, 9> vals;
  std::array<double, 9> divs;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const MappedRule mr = map_rule(rule, g.verts);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      eval_hdiv_basis(tmap.kind, g, mr.bary[q], vals, divs);
      const Vec2 fx = f(t, mr.points[q]);
      for (int l = 0; l < nloc; ++l)
        b[tmap.cell_dofs[t][l]] += mr.weights[q] * dot(fx, vals[l]);
    }
  }
  return b;
}

std::vector<double> assemble_rhs(const Mesh& mesh, const DofMap& vmap, const CellVectorField& f,
                                 RhsMode mode, int quad_degree,
                                 const SparseMatrix* reconstruction, const DofMap* tmap) {
  if (mode == RhsMode::classical) return assemble_rhs_classical(mesh, vmap, f, quad_degree);
  if (reconstruction == nullptr || tmap == nullptr)
    throw std::invalid_argument(
        "assemble_rhs: reconstructed mode requires the reconstruction matrix and target space");
  const auto load = assemble_hdiv_load(mesh, *tmap, f, quad_degree);
  return reconstruction->multiply_transpose(load);
}

std::vector<double> assemble_gradient_rhs(const Mesh& mesh, const DofMap& vmap,
                                          const CellMatrixField& grad, int quad_degree,
                                          const Vec2* singular_point) {
  require_velocity(vmap, "assemble_gradient_rhs");
  const int nloc = vmap.n_local();
  const QuadRule rule = triangle_rule(quad_degree);
  std::vector<double> b(vmap.n_dofs, 0.0);
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const MappedRule mr = map_rule_singular(rule, g.verts, singular_point);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      eval_vector_basis(vmap.kind, g, mr.bary[q], vals, grads);
      const Mat2 gx = grad(t, mr.points[q]);
      for (int l = 0; l < nloc; ++l)
        b[vmap.cell_dofs[t][l]] += mr.weights[q] * frobenius_dot(gx, grads[l]);
    }
  }
  return b;
}

std::vector<double> cell_mean_divergence(const Mesh& mesh, const DofMap& vmap,
                                         const FeFunction& u) {
  require_velocity(vmap, "cell_mean_divergence");
  const int nloc = vmap.n_local();
  const QuadRule rule = triangle_rule(kOperatorQuadDegree);
  std::vector<double> out(mesh.n_triangles(), 0.0);
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    double s = 0.0;
    for (const auto& qp : rule.points) {
      eval_vector_basis(vmap.kind, g, qp.bary, vals, grads);
      double div = 0.0;
      for (int l = 0; l < nloc; ++l) div += u.coeffs[vmap.cell_dofs[t][l]] * grads[l].trace();
      s += qp.weight * 2.0 * g.area * div;
    }
    out[t] = s / g.area;
  }
  return out;
}

std::vector<double> cell_divergence_hdiv(const Mesh& mesh, const DofMap& tmap,
                                         const FeFunction& w) {
  require_hdiv(tmap, "cell_divergence_hdiv");
  const int nloc = tmap.n_local();
  const std::array<double, 3> centroid = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  std::vector<double> out(mesh.n_triangles(), 0.0);
  std::array<Vec2, 9> vals;
  std::array<double, 9> divs;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    eval_hdiv_basis(tmap.kind, g, centroid, vals, divs);
    double s = 0.0;
    for (int l = 0; l < nloc; ++l) s += w.coeffs[tmap.cell_dofs[t][l]] * divs[l];
    out[t] = s;
  }
  return out;
}

SparseMatrix assemble_p1_stiffness(const Mesh& mesh, const DofMap& p1map) {
  if (p1map.kind != ElementKind::P1Lagrange)
    throw std::invalid_argument("assemble_p1_stiffness: dofmap must be P1");
  TripletBuffer buf(p1map.n_dofs, p1map.n_dofs);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        buf.add(p1map.cell_dofs[t][i], p1map.cell_dofs[t][j],
                g.area * dot(g.grad_lambda[i], g.grad_lambda[j]));
  }
  return buf.build();
}

std::vector<double> assemble_p1_gradient_load(const Mesh& mesh, const DofMap& p1map,
                                              const CellVectorField& f, int quad_degree) {
  if (p1map.kind != ElementKind::P1Lagrange)
    throw std::invalid_argument("assemble_p1_gradient_load: dofmap must be P1");
  const QuadRule rule = triangle_rule(quad_degree);
  std::vector<double> b(p1map.n_dofs, 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const MappedRule mr = map_rule(rule, g.verts);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      const Vec2 fx = f(t, mr.points[q]);
      for (int i = 0; i < 3; ++i)
        b[p1map.cell_dofs[t][i]] += mr.weights[q] * dot(fx, g.grad_lambda[i]);
    }
  }
  return b;
}

std::vector<double> p1_integrals(const Mesh& mesh, const DofMap& p1map) {
  std::vector<double> m(p1map.n_dofs, 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double third = mesh.triangle_area(t) / 3.0;
    for (int i = 0; i < 3; ++i) m[p1map.cell_dofs[t][i]] += third;
  }
  return m;
}

StokesOperators build_stokes_operators(const Mesh& mesh, const DofMap& vmap, const DofMap& pmap,
                                       const DofMap* tmap, double nu, const CellVectorField& f,
                                       int rhs_quad_degree) {
  StokesOperators ops;
  ops.A = assemble_stiffness(mesh, vmap, nu);
  ops.B = assemble_divergence(mesh, vmap, pmap);
  ops.rhs_classical = assemble_rhs_classical(mesh, vmap, f, rhs_quad_degree);
  if (tmap != nullptr) {
    ops.R = assemble_reconstruction(mesh, vmap, *tmap);
    ops.M_hdiv = assemble_hdiv_mass(mesh, *tmap);
    ops.rhs_reconstructed =
        assemble_rhs(mesh, vmap, f, RhsMode::reconstructed, rhs_quad_degree, &ops.R, tmap);
  }
  return ops;
}

}  // namespace pstokes
