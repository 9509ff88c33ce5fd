#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "pstokes/assembly.hpp"
#include "pstokes/quadrature.hpp"

using namespace pstokes;

namespace {

FeFunction random_function(const DofMap& map, std::mt19937& rng) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  FeFunction u{map.kind, std::vector<double>(map.n_dofs)};
  for (auto& v : u.coeffs) v = c(rng);
  return u;
}

FeFunction rigid_translation(const Mesh& mesh, const DofMap& map, Vec2 value) {
  return interpolate(mesh, map, [value](Vec2) { return value; });
}

double l2_norm_hdiv(const Mesh& mesh, const DofMap& tmap, const FeFunction& w, int degree) {
  const QuadRule rule = triangle_rule(degree);
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const MappedRule mr = map_rule(rule, g.verts);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      const Vec2 v = eval_hdiv_value(mesh, tmap, w, t, rule.points[q].bary);
      s += mr.weights[q] * dot(v, v);
    }
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("TripletBuffer builds canonical CSR") {
  TripletBuffer buf(3, 4);
  buf.add(1, 3, 2.0);
  buf.add(1, 0, 1.0);
  buf.add(1, 3, -1.0);
  buf.add(0, 2, 5.0);
  buf.add(2, 1, 4.0);
  buf.add(2, 1, -4.0);  // cancels exactly and must be dropped
  const SparseMatrix m = buf.build();
  CHECK(m.n_rows == 3);
  CHECK(m.n_cols == 4);
  CHECK(m.n_nonzeros() == 3);
  CHECK(m.get(1, 3) == 1.0);
  CHECK(m.get(1, 0) == 1.0);
  CHECK(m.get(0, 2) == 5.0);
  CHECK(m.get(2, 1) == 0.0);
  for (int i = 0; i < m.n_rows; ++i)
    for (int k = m.row_ptr[i] + 1; k < m.row_ptr[i + 1]; ++k)
      CHECK(m.col_idx[k] > m.col_idx[k - 1]);

  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  const auto y = m.multiply(x);
  CHECK(y[0] == 15.0);
  CHECK(y[1] == 5.0);
  CHECK(y[2] == 0.0);
  const auto z = m.multiply_transpose({1.0, 1.0, 1.0});
  CHECK(z[0] == 1.0);
  CHECK(z[2] == 5.0);
  CHECK(z[3] == 1.0);
}

TEST_CASE("MatrixMarket dump") {
  TripletBuffer buf(2, 2);
  buf.add(0, 0, 1.5);
  buf.add(1, 0, -2.0);
  buf.build().write_matrix_market("dump.mtx");
  std::ifstream in("dump.mtx");
  std::string line;
  std::getline(in, line);
  CHECK(line == "%%MatrixMarket matrix coordinate real general");
  std::getline(in, line);
  CHECK(line == "2 2 2");
  std::remove("dump.mtx");
}

TEST_CASE("stiffness: kernel, scaling and symmetry") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  for (ElementKind kind : {ElementKind::BernardiRaugel, ElementKind::CrouzeixRaviart}) {
    const DofMap vmap = build_dofmap(mesh, kind);
    const SparseMatrix A1 = assemble_stiffness(mesh, vmap, 1.0);
    const SparseMatrix A2 = assemble_stiffness(mesh, vmap, 2.0);

    // rigid translation lies in the kernel before boundary elimination
    const FeFunction c = rigid_translation(mesh, vmap, {1.0, -2.0});
    const auto Ac = A1.multiply(c.coeffs);
    for (double v : Ac) CHECK(std::abs(v) <= 1e-13 * A1.max_abs());

    REQUIRE(A1.n_nonzeros() == A2.n_nonzeros());
    for (int k = 0; k < A1.n_nonzeros(); ++k)
      CHECK(A2.values[k] == doctest::Approx(2.0 * A1.values[k]).epsilon(1e-14));

    CHECK(A1.symmetry_gap() <= 1e-13 * A1.max_abs());
  }
  CHECK_THROWS_AS(assemble_stiffness(mesh, build_dofmap(mesh, ElementKind::BernardiRaugel), 0.0),
                  std::invalid_argument);
}

TEST_CASE("P1 scalar stiffness rows sum to zero on one triangle") {
  const Mesh mesh = build_topology({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const DofMap p1 = build_dofmap(mesh, ElementKind::P1Lagrange);
  const SparseMatrix K = assemble_p1_stiffness(mesh, p1);
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += K.get(i, j);
    CHECK(std::abs(s) < 1e-14);
  }
}

TEST_CASE("divergence operator") {
  SUBCASE("w = (x, y) on the reference triangle integrates to 2*area") {
    const Mesh mesh = build_topology({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
    for (ElementKind kind : {ElementKind::BernardiRaugel, ElementKind::CrouzeixRaviart}) {
      const DofMap vmap = build_dofmap(mesh, kind);
      const DofMap pmap = build_dofmap(mesh, ElementKind::P0);
      const SparseMatrix B = assemble_divergence(mesh, vmap, pmap);
      const FeFunction w = interpolate(mesh, vmap, [](Vec2 p) { return p; });
      const auto Bw = B.multiply(w.coeffs);
      CHECK(Bw[0] == doctest::Approx(2.0 * mesh.triangle_area(0)).epsilon(1e-14));
    }
  }
  SUBCASE("rigid translations are divergence-free") {
    const Mesh mesh = red_refine(make_lshape_mesh());
    const DofMap vmap = build_dofmap(mesh, ElementKind::BernardiRaugel);
    const DofMap pmap = build_dofmap(mesh, ElementKind::P0);
    const SparseMatrix B = assemble_divergence(mesh, vmap, pmap);
    const auto Bw = B.multiply(rigid_translation(mesh, vmap, {0.7, 0.3}).coeffs);
    for (double v : Bw) CHECK(std::abs(v) < 1e-13);
  }
  SUBCASE("divergence theorem: zero-trace fields have zero total divergence") {
    const Mesh mesh = red_refine(make_lshape_mesh());
    std::mt19937 rng(11);
    for (ElementKind kind : {ElementKind::BernardiRaugel, ElementKind::CrouzeixRaviart}) {
      const DofMap vmap = build_dofmap(mesh, kind);
      const DofMap pmap = build_dofmap(mesh, ElementKind::P0);
      const SparseMatrix B = assemble_divergence(mesh, vmap, pmap);
      FeFunction w = random_function(vmap, rng);
      for (int d : vmap.dirichlet_dofs) w.coeffs[d] = 0.0;
      const auto Bw = B.multiply(w.coeffs);
      double total = 0.0;
      for (double v : Bw) total += v;
      CHECK(std::abs(total) < 1e-12);
    }
  }
  SUBCASE("pressure space must be P0") {
    const Mesh mesh = make_lshape_mesh();
    CHECK_THROWS_AS(assemble_divergence(mesh, build_dofmap(mesh, ElementKind::BernardiRaugel),
                                        build_dofmap(mesh, ElementKind::P1Lagrange)),
                    std::invalid_argument);
  }
}

TEST_CASE("reconstruction agrees with direct interpolation for smooth fields") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  const VectorField lin = [](Vec2 p) { return Vec2{1.0 + 2.0 * p.x - 0.5 * p.y,
                                                   -0.3 + p.x + 1.5 * p.y}; };
  for (ElementKind vkind : {ElementKind::BernardiRaugel, ElementKind::CrouzeixRaviart})
    for (ElementKind tkind : {ElementKind::RT0, ElementKind::BDM1}) {
      const DofMap vmap = build_dofmap(mesh, vkind);
      const DofMap tmap = build_dofmap(mesh, tkind);
      const SparseMatrix R = assemble_reconstruction(mesh, vmap, tmap);
      const FeFunction vh = interpolate(mesh, vmap, lin);
      const FeFunction direct = interpolate(mesh, tmap, lin);
      const auto recon = R.multiply(vh.coeffs);
      for (int k = 0; k < tmap.n_dofs; ++k)
        CHECK(recon[k] == doctest::Approx(direct.coeffs[k]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("reconstruction is a projection: RT0-embedded fields are reproduced") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  const VectorField rt_field = [](Vec2 p) { return Vec2{1.0 + 2.0 * p.x, 3.0 + 2.0 * p.y}; };
  const DofMap vmap = build_dofmap(mesh, ElementKind::CrouzeixRaviart);
  const DofMap tmap = build_dofmap(mesh, ElementKind::RT0);
  const SparseMatrix R = assemble_reconstruction(mesh, vmap, tmap);
  FeFunction w{ElementKind::RT0, R.multiply(interpolate(mesh, vmap, rt_field).coeffs)};
  for (int t : {0, 5, 17}) {
    const std::array<double, 3> centroid = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    const Vec2 got = eval_hdiv_value(mesh, tmap, w, t, centroid);
    const auto& tri = mesh.triangles[t];
    const Vec2 x = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) *
                   (1.0 / 3.0);
    const Vec2 expect = rt_field(x);
    CHECK(got.x == doctest::Approx(expect.x).epsilon(1e-12));
    CHECK(got.y == doctest::Approx(expect.y).epsilon(1e-12));
  }
}

TEST_CASE("reconstruction property (i): divergence is preserved element-wise") {
  std::mt19937 rng(2024);
  Mesh mesh = make_lshape_mesh();
  for (int level = 0; level < 3; ++level) {
    for (auto [vkind, tkind] :
         {std::pair{ElementKind::BernardiRaugel, ElementKind::BDM1},
          std::pair{ElementKind::CrouzeixRaviart, ElementKind::RT0},
          std::pair{ElementKind::BernardiRaugel, ElementKind::RT0},
          std::pair{ElementKind::CrouzeixRaviart, ElementKind::BDM1}}) {
      const DofMap vmap = build_dofmap(mesh, vkind);
      const DofMap tmap = build_dofmap(mesh, tkind);
      const SparseMatrix R = assemble_reconstruction(mesh, vmap, tmap);
      for (int trial = 0; trial < 20; ++trial) {
        const FeFunction vh = random_function(vmap, rng);
        const FeFunction wh{tkind, R.multiply(vh.coeffs)};
        const auto mean_div = cell_mean_divergence(mesh, vmap, vh);
        const auto recon_div = cell_divergence_hdiv(mesh, tmap, wh);
        double scale = 1.0;
        for (int t = 0; t < mesh.n_triangles(); ++t)
          scale = std::max(scale, std::abs(mean_div[t]));
        for (int t = 0; t < mesh.n_triangles(); ++t)
          CHECK(std::abs(recon_div[t] - mean_div[t]) <= 1e-12 * scale);
      }
    }
    mesh = red_refine(mesh);
  }
}

TEST_CASE("reconstruction rejects invalid pairs") {
  const Mesh mesh = make_lshape_mesh();
  CHECK_THROWS_AS(assemble_reconstruction(mesh, build_dofmap(mesh, ElementKind::RT0),
                                          build_dofmap(mesh, ElementKind::RT0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(assemble_reconstruction(mesh, build_dofmap(mesh, ElementKind::BernardiRaugel),
                                          build_dofmap(mesh, ElementKind::P0)),
                  std::invalid_argument);
}

TEST_CASE("H(div) mass matrix gives the same norm as direct quadrature") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  std::mt19937 rng(5);
  for (ElementKind tkind : {ElementKind::RT0, ElementKind::BDM1}) {
    const DofMap tmap = build_dofmap(mesh, tkind);
    const SparseMatrix M = assemble_hdiv_mass(mesh, tmap);
    const FeFunction w = random_function(tmap, rng);
    const auto Mw = M.multiply(w.coeffs);
    double quad_form = 0.0;
    for (int k = 0; k < tmap.n_dofs; ++k) quad_form += w.coeffs[k] * Mw[k];
    const double direct = l2_norm_hdiv(mesh, tmap, w, 6);
    CHECK(std::sqrt(quad_form) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("right-hand sides") {
  SUBCASE("f = 0 gives b = 0") {
    const Mesh mesh = make_lshape_mesh();
    const DofMap vmap = build_dofmap(mesh, ElementKind::BernardiRaugel);
    const auto b = assemble_rhs_classical(mesh, vmap, [](int, Vec2) { return Vec2{}; }, 6);
    for (double v : b) CHECK(v == 0.0);
  }
  SUBCASE("constant f on the reference triangle, CR -> RT0, hand-computed values") {
    // classical entries: int (1,0) . (chi_e, 0) = int chi_e = 1/6 per edge.
    // reconstructed entries from the RT0 images of the CR basis:
    //   I_h(chi_0,0) = (x,y),  I_h(chi_1,0) = (1-x,-y),  I_h(chi_2,0) = 0,
    //   I_h(0,chi_0) = (x,y),  I_h(0,chi_1) = 0,         I_h(0,chi_2) = (-x,1-y).
    const Mesh mesh = build_topology({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
    const DofMap vmap = build_dofmap(mesh, ElementKind::CrouzeixRaviart);
    const DofMap tmap = build_dofmap(mesh, ElementKind::RT0);
    const SparseMatrix R = assemble_reconstruction(mesh, vmap, tmap);
    const CellVectorField f = [](int, Vec2) { return Vec2{1.0, 0.0}; };
    const auto bc = assemble_rhs_classical(mesh, vmap, f, 6);
    const auto br = assemble_rhs(mesh, vmap, f, RhsMode::reconstructed, 6, &R, &tmap);
    const double expected_classical[6] = {1.0 / 6, 0.0, 1.0 / 6, 0.0, 1.0 / 6, 0.0};
    const double expected_recon[6] = {1.0 / 6, 1.0 / 6, 1.0 / 3, 0.0, 0.0, -1.0 / 6};
    for (int i = 0; i < 6; ++i) {
      CHECK(bc[i] == doctest::Approx(expected_classical[i]).epsilon(1e-13).scale(1.0));
      CHECK(br[i] == doctest::Approx(expected_recon[i]).epsilon(1e-13).scale(1.0));
    }
  }
  SUBCASE("reconstructed mode requires the reconstruction matrix") {
    const Mesh mesh = make_lshape_mesh();
    const DofMap vmap = build_dofmap(mesh, ElementKind::BernardiRaugel);
    CHECK_THROWS_AS(
        assemble_rhs(mesh, vmap, [](int, Vec2) { return Vec2{1.0, 0.0}; },
                     RhsMode::reconstructed, 6),
        std::invalid_argument);
  }
}

TEST_CASE("build_stokes_operators assembles the full set") {
  const Mesh mesh = make_lshape_mesh();
  const DofMap vmap = build_dofmap(mesh, ElementKind::BernardiRaugel);
  const DofMap pmap = build_dofmap(mesh, ElementKind::P0);
  const DofMap tmap = build_dofmap(mesh, ElementKind::BDM1);
  const CellVectorField f = [](int, Vec2 p) { return Vec2{p.y, p.x}; };
  const StokesOperators ops = build_stokes_operators(mesh, vmap, pmap, &tmap, 2.0, f, 6);
  CHECK(ops.A.n_rows == vmap.n_dofs);
  CHECK(ops.B.n_rows == pmap.n_dofs);
  CHECK(ops.R.n_rows == tmap.n_dofs);
  CHECK(ops.M_hdiv.n_rows == tmap.n_dofs);
  CHECK(ops.rhs_classical.size() == static_cast<std::size_t>(vmap.n_dofs));
  CHECK(ops.rhs_reconstructed.size() == static_cast<std::size_t>(vmap.n_dofs));
  const StokesOperators classical_only =
      build_stokes_operators(mesh, vmap, pmap, nullptr, 1.0, f, 6);
  CHECK(classical_only.R.n_rows == 0);
  CHECK(classical_only.rhs_reconstructed.empty());
}

TEST_CASE("p1 integrals sum to the domain area") {
  const Mesh mesh = red_refine(make_lshape_mesh());
  const DofMap p1 = build_dofmap(mesh, ElementKind::P1Lagrange);
  const auto m = p1_integrals(mesh, p1);
  double s = 0.0;
  for (double v : m) s += v;
  CHECK(s == doctest::Approx(3.0).epsilon(1e-13));
}
