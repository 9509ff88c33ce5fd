#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pstokes/fespace.hpp"
#include "pstokes/mesh.hpp"
#include "pstokes/quadrature.hpp"

using namespace pstokes;

namespace {

std::array<double, 3> barycentric(const Mesh& mesh, int t, Vec2 p) {
  const auto& tri = mesh.triangles[t];
  const Vec2 v0 = mesh.vertices[tri[0]], v1 = mesh.vertices[tri[1]], v2 = mesh.vertices[tri[2]];
  const double area2 = cross(v1 - v0, v2 - v0);
  const double l1 = cross(p - v0, v2 - v0) / area2;
  const double l2 = cross(v1 - v0, p - v0) / area2;
  return {1.0 - l1 - l2, l1, l2};
}

int locate(const Mesh& mesh, Vec2 p) {
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto b = barycentric(mesh, t, p);
    if (b[0] >= -1e-12 && b[1] >= -1e-12 && b[2] >= -1e-12) return t;
  }
  return -1;
}

// Point evaluation of a discrete velocity field; points on shared edges use
// the lower-indexed triangle, which is consistent for the mean-value dofs.
VectorField discrete_field(const Mesh& mesh, const DofMap& dofmap, const FeFunction& u) {
  return [&mesh, &dofmap, &u](Vec2 p) {
    const int t = locate(mesh, p);
    REQUIRE(t >= 0);
    if (is_hdiv(dofmap.kind)) return eval_hdiv_value(mesh, dofmap, u, t, barycentric(mesh, t, p));
    return eval_velocity(mesh, dofmap, u, t, barycentric(mesh, t, p));
  };
}

}  // namespace

TEST_CASE("dof counts on the level-0 L-shape") {
  const Mesh mesh = make_lshape_mesh();
  CHECK(build_dofmap(mesh, ElementKind::BernardiRaugel).n_dofs == 44);  // 2*11 + 22
  CHECK(build_dofmap(mesh, ElementKind::CrouzeixRaviart).n_dofs == 44); // 2*22
  CHECK(build_dofmap(mesh, ElementKind::P0).n_dofs == 12);
  CHECK(build_dofmap(mesh, ElementKind::P1Lagrange).n_dofs == 11);
  CHECK(build_dofmap(mesh, ElementKind::RT0).n_dofs == 22);
  CHECK(build_dofmap(mesh, ElementKind::BDM1).n_dofs == 44);
}

TEST_CASE("dirichlet dof counts: 2*bvertices + bedges (BR), 2*bedges (CR)") {
  Mesh mesh = make_lshape_mesh();
  for (int level = 0; level < 3; ++level) {
    const auto br = build_dofmap(mesh, ElementKind::BernardiRaugel);
    const auto cr = build_dofmap(mesh, ElementKind::CrouzeixRaviart);
    CHECK(static_cast<int>(br.dirichlet_dofs.size()) ==
          2 * mesh.n_boundary_vertices() + mesh.n_boundary_edges());
    CHECK(static_cast<int>(cr.dirichlet_dofs.size()) == 2 * mesh.n_boundary_edges());
    mesh = red_refine(mesh);
  }
}

TEST_CASE("dof numbering is deterministic") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  for (ElementKind kind : {ElementKind::BernardiRaugel, ElementKind::CrouzeixRaviart,
                           ElementKind::RT0, ElementKind::BDM1}) {
    const auto a = build_dofmap(mesh, kind);
    const auto b = build_dofmap(mesh, kind);
    CHECK(a.n_dofs == b.n_dofs);
    CHECK(a.cell_dofs == b.cell_dofs);
    CHECK(a.dirichlet_dofs == b.dirichlet_dofs);
  }
}

TEST_CASE("CR basis: 1 at its own edge midpoint, 0 at the others") {
  const Mesh mesh = build_topology({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const ElementGeometry g = element_geometry(mesh, 0);
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> mid{0.5, 0.5, 0.5};
    mid[i] = 0.0;
    eval_vector_basis(ElementKind::CrouzeixRaviart, g, mid, vals, grads);
    for (int j = 0; j < 3; ++j) {
      CHECK(vals[2 * j].x == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
      CHECK(vals[2 * j + 1].y == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
      CHECK(vals[2 * j].y == 0.0);
      CHECK(vals[2 * j + 1].x == 0.0);
    }
  }
}

TEST_CASE("P1 partition of unity") {
  const Mesh mesh = build_topology({{0.3, -0.2}, {1.4, 0.5}, {0.1, 1.2}}, {{0, 1, 2}});
  const ElementGeometry g = element_geometry(mesh, 0);
  std::array<double, 3> vals;
  std::array<Vec2, 3> grads;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double l1 = u01(rng), l2 = u01(rng);
    if (l1 + l2 > 1.0) { l1 = 1.0 - l1; l2 = 1.0 - l2; }
    eval_scalar_basis(ElementKind::P1Lagrange, g, {1.0 - l1 - l2, l1, l2}, vals, grads);
    CHECK(vals[0] + vals[1] + vals[2] == doctest::Approx(1.0).epsilon(1e-14));
    Vec2 gsum = grads[0] + grads[1] + grads[2];
    CHECK(norm(gsum) < 1e-13);
  }
}

TEST_CASE("basis evaluation rejects points outside the reference triangle") {
  const Mesh mesh = build_topology({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const ElementGeometry g = element_geometry(mesh, 0);
  std::array<double, 3> vals;
  std::array<Vec2, 3> grads;
  CHECK_THROWS_AS(
      eval_scalar_basis(ElementKind::P1Lagrange, g, {-0.2, 0.6, 0.6}, vals, grads),
      std::domain_error);
}

TEST_CASE("BR bubble: unit mean normal flux on its own edge, zero on others") {
  const Mesh mesh = build_topology({{0.1, 0.0}, {1.3, 0.2}, {0.4, 1.1}}, {{0, 1, 2}});
  const ElementGeometry g = element_geometry(mesh, 0);
  std::array<Vec2, 9> vals;
  std::array<Mat2, 9> grads;
  const auto gauss = gauss_legendre_01(4);
  for (int i = 0; i < 3; ++i) {     // bubble on local edge i
    for (int j = 0; j < 3; ++j) {   // mean flux over local edge j
      double flux = 0.0;
      for (const auto& gp : gauss) {
        std::array<double, 3> bary{};
        bary[j] = 0.0;
        bary[(j + 1) % 3] = 1.0 - gp.x;
        bary[(j + 2) % 3] = gp.x;
        eval_vector_basis(ElementKind::BernardiRaugel, g, bary, vals, grads);
        flux += gp.w * dot(vals[6 + i], g.edge_normal[j]);
      }
      CHECK(flux == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("RT0 basis: unit total flux through its own edge, zero through others") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  const auto gauss = gauss_legendre_01(3);
  std::array<Vec2, 9> vals;
  std::array<double, 9> divs;
  for (int t : {0, 7, 30}) {
    const ElementGeometry g = element_geometry(mesh, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double flux = 0.0;
        for (const auto& gp : gauss) {
          std::array<double, 3> bary{};
          bary[j] = 0.0;
          bary[(j + 1) % 3] = 1.0 - gp.x;
          bary[(j + 2) % 3] = gp.x;
          eval_hdiv_basis(ElementKind::RT0, g, bary, vals, divs);
          flux += gp.w * g.edge_length[j] * dot(vals[i], g.edge_normal[j]);
        }
        CHECK(flux == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
      }
  }
}

TEST_CASE("BDM1 basis: Kronecker property of the edge moments") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  const auto gauss = gauss_legendre_01(3);
  std::array<Vec2, 9> vals;
  std::array<double, 9> divs;
  for (int t : {2, 19}) {
    const ElementGeometry g = element_geometry(mesh, t);
    for (int k = 0; k < 6; ++k)
      for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 2; ++m) {
          double moment = 0.0;
          for (const auto& gp : gauss) {
            std::array<double, 3> bary{};
            bary[j] = 0.0;
            bary[(j + 1) % 3] = 1.0 - gp.x;
            bary[(j + 2) % 3] = gp.x;
            eval_hdiv_basis(ElementKind::BDM1, g, bary, vals, divs);
            const double q = m == 0 ? 1.0 : g.tangent_sign[j] * (2.0 * gp.x - 1.0);
            moment += gp.w * g.edge_length[j] * dot(vals[k], g.edge_normal[j]) * q;
          }
          CHECK(moment == doctest::Approx(k == 2 * j + m ? 1.0 : 0.0).epsilon(1e-12));
        }
  }
}

TEST_CASE("interpolation reproduces coefficients of fields already in the space") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (ElementKind kind : {ElementKind::BernardiRaugel, ElementKind::CrouzeixRaviart,
                           ElementKind::RT0, ElementKind::BDM1}) {
    const DofMap dofmap = build_dofmap(mesh, kind);
    FeFunction u{kind, std::vector<double>(dofmap.n_dofs)};
    for (auto& v : u.coeffs) v = c(rng);
    const FeFunction again = interpolate(mesh, dofmap, discrete_field(mesh, dofmap, u));
    for (int i = 0; i < dofmap.n_dofs; ++i)
      CHECK(again.coeffs[i] == doctest::Approx(u.coeffs[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("boundary interpolation of simple fields") {
  const Mesh mesh = make_lshape_mesh();
  const DofMap br = build_dofmap(mesh, ElementKind::BernardiRaugel);
  const DofMap cr = build_dofmap(mesh, ElementKind::CrouzeixRaviart);

  SUBCASE("zero field gives zero coefficients") {
    const auto g = interpolate_dirichlet(mesh, br, [](Vec2) { return Vec2{0.0, 0.0}; });
    for (double v : g) CHECK(v == 0.0);
  }
  SUBCASE("constant field: CR dirichlet coefficients equal the constant") {
    const auto g = interpolate_dirichlet(mesh, cr, [](Vec2) { return Vec2{3.0, -2.0}; });
    for (int e = 0; e < mesh.n_edges(); ++e) {
      if (!mesh.edge_on_boundary[e]) continue;
      CHECK(g[2 * e] == doctest::Approx(3.0).epsilon(1e-14));
      CHECK(g[2 * e + 1] == doctest::Approx(-2.0).epsilon(1e-14));
    }
  }
  SUBCASE("linear field: BR vertex dofs exact, bubble dofs zero") {
    const VectorField lin = [](Vec2 p) { return Vec2{1.0 + 2.0 * p.x - p.y, 0.5 * p.x + p.y}; };
    const FeFunction u = interpolate(mesh, br, lin);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      const Vec2 expect = lin(mesh.vertices[v]);
      CHECK(u.coeffs[2 * v] == doctest::Approx(expect.x).epsilon(1e-14));
      CHECK(u.coeffs[2 * v + 1] == doctest::Approx(expect.y).epsilon(1e-14));
    }
    for (int e = 0; e < mesh.n_edges(); ++e)
      CHECK(std::abs(u.coeffs[2 * mesh.n_vertices() + e]) < 1e-13);
  }
  SUBCASE("dirichlet interpolation leaves interior dofs zero") {
    const auto g = interpolate_dirichlet(mesh, br, [](Vec2 p) { return Vec2{p.x, p.y}; });
    for (int d = 0; d < br.n_dofs; ++d)
      if (!br.is_dirichlet[d]) CHECK(g[d] == 0.0);
  }
}

TEST_CASE("project_p0") {
  const Mesh mesh = make_lshape_mesh();
  const DofMap p0 = build_dofmap(mesh, ElementKind::P0);

  SUBCASE("constant with zero-mean flag vanishes") {
    const FeFunction u = project_p0(mesh, p0, [](Vec2) { return 5.0; }, true);
    for (double v : u.coeffs) CHECK(std::abs(v) < 1e-14);
  }
  SUBCASE("x on the reference triangle gives the centroid value 1/3") {
    const Mesh single = build_topology({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
    const DofMap map1 = build_dofmap(single, ElementKind::P0);
    const FeFunction u = project_p0(single, map1, [](Vec2 p) { return p.x; }, false);
    CHECK(u.coeffs[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("piecewise constants are reproduced") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    FeFunction w{ElementKind::P0, std::vector<double>(p0.n_dofs)};
    for (auto& v : w.coeffs) v = c(rng);
    const ScalarField field = [&](Vec2 p) {
      const int t = locate(mesh, p);
      REQUIRE(t >= 0);
      return w.coeffs[t];
    };
    const FeFunction u = project_p0(mesh, p0, field, false);
    for (int t = 0; t < mesh.n_triangles(); ++t)
      CHECK(u.coeffs[t] == doctest::Approx(w.coeffs[t]).epsilon(1e-13));
  }
}
