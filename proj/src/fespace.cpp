#include "pstokes/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "pstokes/quadrature.hpp"

namespace pstokes {

const char* element_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::P1Lagrange: return "p1";
    case ElementKind::BernardiRaugel: return "bernardi-raugel";
    case ElementKind::CrouzeixRaviart: return "crouzeix-raviart";
    case ElementKind::P0: return "p0";
    case ElementKind::RT0: return "rt0";
    case ElementKind::BDM1: return "bdm1";
  }
  return "?";
}

int local_dof_count(ElementKind kind) {
  switch (kind) {
    case ElementKind::P1Lagrange: return 3;
    case ElementKind::BernardiRaugel: return 9;
    case ElementKind::CrouzeixRaviart: return 6;
    case ElementKind::P0: return 1;
    case ElementKind::RT0: return 3;
    case ElementKind::BDM1: return 6;
  }
  return 0;
}

bool is_hdiv(ElementKind kind) {
  return kind == ElementKind::RT0 || kind == ElementKind::BDM1;
}

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  ElementGeometry g;
  const auto& tri = mesh.triangles[t];
  for (int i = 0; i < 3; ++i) g.verts[i] = mesh.vertices[tri[i]];
  const double area2 = cross(g.verts[1] - g.verts[0], g.verts[2] - g.verts[0]);
  g.area = 0.5 * area2;
  for (int i = 0; i < 3; ++i) {
    const Vec2 d = g.verts[(i + 2) % 3] - g.verts[(i + 1) % 3];
    g.grad_lambda[i] = -perp(d) * (1.0 / area2);
    g.edge_length[i] = norm(d);
    const int e = mesh.triangle_to_edges[t][i];
    g.edge_ids[i] = e;
    g.edge_normal[i] = mesh.edge_normals[e];
    g.normal_sign[i] = mesh.triangle_edge_sign[t][i];
    g.tangent_sign[i] = tri[(i + 1) % 3] == mesh.edges[e][0] ? 1 : -1;
  }
  return g;
}

DofMap build_dofmap(const Mesh& mesh, ElementKind kind) {
  DofMap map;
  map.kind = kind;
  const int nv = mesh.n_vertices(), ne = mesh.n_edges(), nt = mesh.n_triangles();
  map.cell_dofs.assign(nt, {});
  map.cell_signs.assign(nt, {});
  for (auto& s : map.cell_signs) s.fill(1);

  const auto set = [&](int t, int l, int dof) { map.cell_dofs[t][l] = dof; };
  switch (kind) {
    case ElementKind::P1Lagrange:
      map.n_dofs = nv;
      for (int t = 0; t < nt; ++t)
        for (int i = 0; i < 3; ++i) set(t, i, mesh.triangles[t][i]);
      break;
    case ElementKind::P0:
      map.n_dofs = nt;
      for (int t = 0; t < nt; ++t) set(t, 0, t);
      break;
    case ElementKind::BernardiRaugel:
      map.n_dofs = 2 * nv + ne;
      for (int t = 0; t < nt; ++t) {
        for (int i = 0; i < 3; ++i) {
          set(t, 2 * i, 2 * mesh.triangles[t][i]);
          set(t, 2 * i + 1, 2 * mesh.triangles[t][i] + 1);
        }
        for (int i = 0; i < 3; ++i) set(t, 6 + i, 2 * nv + mesh.triangle_to_edges[t][i]);
      }
      break;
    case ElementKind::CrouzeixRaviart:
      map.n_dofs = 2 * ne;
      for (int t = 0; t < nt; ++t)
        for (int i = 0; i < 3; ++i) {
          set(t, 2 * i, 2 * mesh.triangle_to_edges[t][i]);
          set(t, 2 * i + 1, 2 * mesh.triangle_to_edges[t][i] + 1);
        }
      break;
    case ElementKind::RT0:
      map.n_dofs = ne;
      for (int t = 0; t < nt; ++t)
        for (int i = 0; i < 3; ++i) set(t, i, mesh.triangle_to_edges[t][i]);
      break;
    case ElementKind::BDM1:
      map.n_dofs = 2 * ne;
      for (int t = 0; t < nt; ++t)
        for (int i = 0; i < 3; ++i) {
          set(t, 2 * i, 2 * mesh.triangle_to_edges[t][i]);
          set(t, 2 * i + 1, 2 * mesh.triangle_to_edges[t][i] + 1);
        }
      break;
  }

  map.is_dirichlet.assign(map.n_dofs, 0);
  const auto mark = [&](int dof) { map.is_dirichlet[dof] = 1; };
  for (int v = 0; v < nv; ++v) {
    if (!mesh.vertex_on_boundary[v]) continue;
    if (kind == ElementKind::P1Lagrange) mark(v);
    if (kind == ElementKind::BernardiRaugel) { mark(2 * v); mark(2 * v + 1); }
  }
  for (int e = 0; e < ne; ++e) {
    if (!mesh.edge_on_boundary[e]) continue;
    switch (kind) {
      case ElementKind::BernardiRaugel: mark(2 * nv + e); break;
      case ElementKind::CrouzeixRaviart: mark(2 * e); mark(2 * e + 1); break;
      case ElementKind::RT0: mark(e); break;
      case ElementKind::BDM1: mark(2 * e); mark(2 * e + 1); break;
      default: break;
    }
  }
  for (int d = 0; d < map.n_dofs; ++d)
    if (map.is_dirichlet[d]) map.dirichlet_dofs.push_back(d);
  return map;
}

namespace {

void check_inside(const std::array<double, 3>& bary) {
  const double tol = 1e-12;
  for (double l : bary)
    if (l < -tol || l > 1.0 + tol)
      throw std::domain_error("basis evaluation point outside the reference triangle");
  if (std::abs(bary[0] + bary[1] + bary[2] - 1.0) > 1e-10)
    throw std::domain_error("barycentric coordinates do not sum to 1");
}

Vec2 physical_point(const ElementGeometry& g, const std::array<double, 3>& bary) {
  return g.verts[0] * bary[0] + g.verts[1] * bary[1] + g.verts[2] * bary[2];
}

// BDM1 basis coefficients in the monomial basis {1, x-c, y-c} per component,
// centroid-shifted; column k holds the coefficients of the k-th global-
// convention basis function. Dof l = 2i+m is the edge-i moment against the
// constant (m = 0) or the odd linear Legendre mode in the global edge
// direction (m = 1), normal fluxes taken against the global edge normal.
Eigen::Matrix<double, 6, 6> bdm1_coefficients(const ElementGeometry& g) {
  const Vec2 c = (g.verts[0] + g.verts[1] + g.verts[2]) * (1.0 / 3.0);
  Eigen::Matrix<double, 6, 6> M;
  const auto gauss = gauss_legendre_01(2);
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = g.verts[(i + 1) % 3];
    const Vec2 b = g.verts[(i + 2) % 3];
    const Vec2 n = g.edge_normal[i];
    const double len = g.edge_length[i];
    for (int m = 0; m < 2; ++m) {
      for (int col = 0; col < 6; ++col) M(2 * i + m, col) = 0.0;
      for (const auto& gp : gauss) {
        const Vec2 x = a + (b - a) * gp.x;
        const double q = m == 0 ? 1.0 : g.tangent_sign[i] * (2.0 * gp.x - 1.0);
        const double w = gp.w * len * q;
        const double mono[3] = {1.0, x.x - c.x, x.y - c.y};
        for (int j = 0; j < 3; ++j) {
          M(2 * i + m, j) += w * mono[j] * n.x;
          M(2 * i + m, 3 + j) += w * mono[j] * n.y;
        }
      }
    }
  }
  return M.fullPivLu().solve(Eigen::Matrix<double, 6, 6>::Identity());
}

}  // namespace

void eval_scalar_basis(ElementKind kind, const ElementGeometry& geom,
                       const std::array<double, 3>& bary, std::span<double> values,
                       std::span<Vec2> gradients) {
  check_inside(bary);
  switch (kind) {
    case ElementKind::P1Lagrange:
      for (int i = 0; i < 3; ++i) {
        values[i] = bary[i];
        gradients[i] = geom.grad_lambda[i];
      }
      break;
    case ElementKind::P0:
      values[0] = 1.0;
      gradients[0] = Vec2{};
      break;
    default:
      throw std::invalid_argument("eval_scalar_basis: not a scalar element");
  }
}

void eval_vector_basis(ElementKind kind, const ElementGeometry& geom,
                       const std::array<double, 3>& bary, std::span<Vec2> values,
                       std::span<Mat2> gradients) {
  check_inside(bary);
  switch (kind) {
    case ElementKind::BernardiRaugel: {
      for (int i = 0; i < 3; ++i) {
        values[2 * i] = {bary[i], 0.0};
        values[2 * i + 1] = {0.0, bary[i]};
        Mat2 gx, gy;
        gx.m[0][0] = geom.grad_lambda[i].x; gx.m[0][1] = geom.grad_lambda[i].y;
        gy.m[1][0] = geom.grad_lambda[i].x; gy.m[1][1] = geom.grad_lambda[i].y;
        gradients[2 * i] = gx;
        gradients[2 * i + 1] = gy;
      }
      // Edge bubble 6 n_e lambda_j lambda_k, unit mean normal flux on its edge.
      for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        const Vec2 n = geom.edge_normal[i];
        values[6 + i] = n * (6.0 * bary[j] * bary[k]);
        const Vec2 gb = (geom.grad_lambda[j] * bary[k] + geom.grad_lambda[k] * bary[j]) * 6.0;
        gradients[6 + i] = outer(n, gb);
      }
      break;
    }
    case ElementKind::CrouzeixRaviart: {
      for (int i = 0; i < 3; ++i) {
        const double chi = 1.0 - 2.0 * bary[i];
        const Vec2 gchi = geom.grad_lambda[i] * -2.0;
        values[2 * i] = {chi, 0.0};
        values[2 * i + 1] = {0.0, chi};
        Mat2 gx, gy;
        gx.m[0][0] = gchi.x; gx.m[0][1] = gchi.y;
        gy.m[1][0] = gchi.x; gy.m[1][1] = gchi.y;
        gradients[2 * i] = gx;
        gradients[2 * i + 1] = gy;
      }
      break;
    }
    default:
      throw std::invalid_argument("eval_vector_basis: not a velocity element");
  }
}

void eval_hdiv_basis(ElementKind kind, const ElementGeometry& geom,
                     const std::array<double, 3>& bary, std::span<Vec2> values,
                     std::span<double> divergences) {
  check_inside(bary);
  switch (kind) {
    case ElementKind::RT0: {
      const Vec2 x = physical_point(geom, bary);
      for (int i = 0; i < 3; ++i) {
        const double s = geom.normal_sign[i] / (2.0 * geom.area);
        values[i] = (x - geom.verts[i]) * s;
        divergences[i] = 2.0 * s;
      }
      break;
    }
    case ElementKind::BDM1: {
      const auto C = bdm1_coefficients(geom);
      const Vec2 c = (geom.verts[0] + geom.verts[1] + geom.verts[2]) * (1.0 / 3.0);
      const Vec2 x = physical_point(geom, bary) - c;
      for (int k = 0; k < 6; ++k) {
        values[k] = {C(0, k) + C(1, k) * x.x + C(2, k) * x.y,
                     C(3, k) + C(4, k) * x.x + C(5, k) * x.y};
        divergences[k] = C(1, k) + C(5, k);
      }
      break;
    }
    default:
      throw std::invalid_argument("eval_hdiv_basis: not an H(div) element");
  }
}

namespace {

Vec2 edge_mean(const VectorField& v, Vec2 a, Vec2 b, int npts) {
  Vec2 s{};
  for (const auto& gp : gauss_legendre_01(npts)) s += v(a + (b - a) * gp.x) * gp.w;
  return s;
}

// Mean normal flux of v minus its endpoint-linear interpolant over edge (a,b).
double bubble_moment(const VectorField& v, Vec2 a, Vec2 b, Vec2 n, int npts) {
  const Vec2 va = v(a), vb = v(b);
  double s = 0.0;
  for (const auto& gp : gauss_legendre_01(npts)) {
    const Vec2 lin = va * (1.0 - gp.x) + vb * gp.x;
    s += dot(v(a + (b - a) * gp.x) - lin, n) * gp.w;
  }
  return s;
}

void set_edge_dofs(const Mesh& mesh, const DofMap& dofmap, const VectorField& v, int e,
                   std::vector<double>& coeffs, int npts) {
  const Vec2 a = mesh.vertices[mesh.edges[e][0]];
  const Vec2 b = mesh.vertices[mesh.edges[e][1]];
  const Vec2 n = mesh.edge_normals[e];
  const double len = norm(b - a);
  const int nv = mesh.n_vertices();
  switch (dofmap.kind) {
    case ElementKind::BernardiRaugel:
      coeffs[2 * nv + e] = bubble_moment(v, a, b, n, npts);
      break;
    case ElementKind::CrouzeixRaviart: {
      const Vec2 m = edge_mean(v, a, b, npts);
      coeffs[2 * e] = m.x;
      coeffs[2 * e + 1] = m.y;
      break;
    }
    case ElementKind::RT0: {
      double flux = 0.0;
      for (const auto& gp : gauss_legendre_01(npts)) flux += dot(v(a + (b - a) * gp.x), n) * gp.w;
      coeffs[e] = flux * len;
      break;
    }
    case ElementKind::BDM1: {
      double m0 = 0.0, m1 = 0.0;
      for (const auto& gp : gauss_legendre_01(npts)) {
        const double f = dot(v(a + (b - a) * gp.x), n);
        m0 += f * gp.w;
        m1 += f * (2.0 * gp.x - 1.0) * gp.w;
      }
      coeffs[2 * e] = m0 * len;
      coeffs[2 * e + 1] = m1 * len;
      break;
    }
    default:
      break;
  }
}

}  // namespace

FeFunction interpolate(const Mesh& mesh, const DofMap& dofmap, const VectorField& v,
                       int edge_gauss_points) {
  if (dofmap.kind == ElementKind::P1Lagrange || dofmap.kind == ElementKind::P0)
    throw std::invalid_argument("interpolate: vector-valued kinds only");
  FeFunction u{dofmap.kind, std::vector<double>(dofmap.n_dofs, 0.0)};
  if (dofmap.kind == ElementKind::BernardiRaugel)
    for (int vt = 0; vt < mesh.n_vertices(); ++vt) {
      const Vec2 val = v(mesh.vertices[vt]);
      u.coeffs[2 * vt] = val.x;
      u.coeffs[2 * vt + 1] = val.y;
    }
  for (int e = 0; e < mesh.n_edges(); ++e)
    set_edge_dofs(mesh, dofmap, v, e, u.coeffs, edge_gauss_points);
  return u;
}

std::vector<double> interpolate_dirichlet(const Mesh& mesh, const DofMap& dofmap,
                                          const VectorField& v, int edge_gauss_points) {
  std::vector<double> coeffs(dofmap.n_dofs, 0.0);
  if (dofmap.kind == ElementKind::BernardiRaugel)
    for (int vt = 0; vt < mesh.n_vertices(); ++vt) {
      if (!mesh.vertex_on_boundary[vt]) continue;
      const Vec2 val = v(mesh.vertices[vt]);
      coeffs[2 * vt] = val.x;
      coeffs[2 * vt + 1] = val.y;
    }
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edge_on_boundary[e]) set_edge_dofs(mesh, dofmap, v, e, coeffs, edge_gauss_points);
  return coeffs;
}

FeFunction project_p0(const Mesh& mesh, const DofMap& dofmap, const ScalarField& r,
                      bool zero_mean, int quad_degree) {
  if (dofmap.kind != ElementKind::P0)
    throw std::invalid_argument("project_p0: dofmap must be P0");
  FeFunction u{ElementKind::P0, std::vector<double>(dofmap.n_dofs, 0.0)};
  const QuadRule rule = triangle_rule(quad_degree);
  double total = 0.0, total_area = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const MappedRule mr = map_rule(rule, {mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                          mesh.vertices[tri[2]]});
    double s = 0.0, area = 0.0;
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      s += r(mr.points[q]) * mr.weights[q];
      area += mr.weights[q];
    }
    u.coeffs[t] = s / area;
    total += s;
    total_area += area;
  }
  if (zero_mean) {
    const double mean = total / total_area;
    for (auto& c : u.coeffs) c -= mean;
  }
  return u;
}

Vec2 eval_velocity(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t,
                   const std::array<double, 3>& bary) {
  const ElementGeometry g = element_geometry(mesh, t);
  const int nloc = dofmap.n_local();
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  eval_vector_basis(dofmap.kind, g, bary, vals, grads);
  Vec2 out{};
  for (int l = 0; l < nloc; ++l) out += vals[l] * u.coeffs[dofmap.cell_dofs[t][l]];
  return out;
}

Mat2 eval_velocity_gradient(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t,
                            const std::array<double, 3>& bary) {
  const ElementGeometry g = element_geometry(mesh, t);
  const int nloc = dofmap.n_local();
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  eval_vector_basis(dofmap.kind, g, bary, vals, grads);
  Mat2 out{};
  for (int l = 0; l < nloc; ++l) out += grads[l] * u.coeffs[dofmap.cell_dofs[t][l]];
  return out;
}

Vec2 eval_hdiv_value(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t,
                     const std::array<double, 3>& bary) {
  const ElementGeometry g = element_geometry(mesh, t);
  const int nloc = dofmap.n_local();
  std::array<Vec2, 9> vals;
  std::array<double, 9> divs;
  eval_hdiv_basis(dofmap.kind, g, bary, std::span<Vec2>(vals), std::span<double>(divs));
  Vec2 out{};
  for (int l = 0; l < nloc; ++l) out += vals[l] * u.coeffs[dofmap.cell_dofs[t][l]];
  return out;
}

double eval_p1(const Mesh& /*mesh*/, const DofMap& dofmap, const FeFunction& u, int t,
               const std::array<double, 3>& bary) {
  double out = 0.0;
  for (int l = 0; l < 3; ++l) out += bary[l] * u.coeffs[dofmap.cell_dofs[t][l]];
  return out;
}

Vec2 eval_p1_gradient(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u, int t) {
  const ElementGeometry g = element_geometry(mesh, t);
  Vec2 out{};
  for (int l = 0; l < 3; ++l) out += g.grad_lambda[l] * u.coeffs[dofmap.cell_dofs[t][l]];
  return out;
}

}  // namespace pstokes
