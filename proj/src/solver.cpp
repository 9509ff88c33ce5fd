#include "pstokes/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "pstokes/quadrature.hpp"

namespace pstokes {

const char* mode_name(StokesMode mode) {
  return mode == StokesMode::classical ? "classical" : "pressure-robust";
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Solves [[S, c],[c^T, 0]] [x; lambda] = [r; 0] where S is symmetric with a
// one-dimensional kernel not orthogonal to e_k. A dense multiplier row would
// ruin the sparse factorization, so the system is solved in bordered form:
// factor D = S + sigma e_k e_k^T once, then recover the exact multiplier
// solution from three back-substitutions and a 2x2 system.
struct BorderedSolve {
  Eigen::VectorXd x;
  double lambda = 0.0;
};

BorderedSolve solve_bordered(const std::vector<Eigen::Triplet<double>>& s_triplets, int n,
                             const Eigen::VectorXd& c, const Eigen::VectorXd& r, int k,
                             double sigma, const char* context) {
  std::vector<Eigen::Triplet<double>> trip = s_triplets;
  trip.emplace_back(k, k, sigma);
  Eigen::SparseMatrix<double> D(n, n);
  D.setFromTriplets(trip.begin(), trip.end());
  D.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(D);
  lu.factorize(D);
  if (lu.info() != Eigen::Success)
    throw SolverError(std::string(context) +
                      ": singular factorization (non-inf-sup pair or mesh defect)");

  const Eigen::VectorXd xr = lu.solve(r);
  const Eigen::VectorXd xc = lu.solve(c);
  Eigen::VectorXd ek = Eigen::VectorXd::Zero(n);
  ek[k] = 1.0;
  const Eigen::VectorXd xd = lu.solve(ek);

  // x = xr - lambda xc + sigma alpha xd with alpha = x_k and c^T x = 0.
  Eigen::Matrix2d m;
  m(0, 0) = 1.0 - sigma * xd[k];
  m(0, 1) = xc[k];
  m(1, 0) = sigma * c.dot(xd);
  m(1, 1) = -c.dot(xc);
  Eigen::Vector2d rhs2(xr[k], -c.dot(xr));
  const Eigen::Vector2d al = m.fullPivLu().solve(rhs2);

  BorderedSolve out;
  out.lambda = al[1];
  out.x = xr - al[1] * xc + sigma * al[0] * xd;
  return out;
}

}  // namespace

StokesSolution solve(const SaddleSystem& sys) {
  const SparseMatrix& A = *sys.A;
  const SparseMatrix& B = *sys.B;
  const Mesh& mesh = *sys.mesh;
  const int nv = A.n_rows;
  const int np = B.n_rows;

  // Free-dof renumbering after Dirichlet elimination.
  std::vector<int> free_index(nv, -1);
  int nf = 0;
  for (int i = 0; i < nv; ++i)
    if (!sys.vmap->is_dirichlet[i]) free_index[i] = nf++;

  const int n = nf + np;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(A.n_nonzeros() + 2 * B.n_nonzeros());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  const std::vector<double>& g = sys.dirichlet_values;
  for (int i = 0; i < nv; ++i) {
    if (free_index[i] < 0) continue;
    const int fi = free_index[i];
    double b = sys.rhs_velocity[i];
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      const int j = A.col_idx[k];
      if (free_index[j] >= 0)
        trip.emplace_back(fi, free_index[j], A.values[k]);
      else
        b -= A.values[k] * g[j];
    }
    rhs[fi] = b;
  }
  // Symmetrized constraint block: rows -B, columns -B^T.
  for (int T = 0; T < np; ++T) {
    double b = -sys.rhs_pressure[T];
    for (int k = B.row_ptr[T]; k < B.row_ptr[T + 1]; ++k) {
      const int j = B.col_idx[k];
      if (free_index[j] >= 0) {
        trip.emplace_back(nf + T, free_index[j], -B.values[k]);
        trip.emplace_back(free_index[j], nf + T, -B.values[k]);
      } else {
        b += B.values[k] * g[j];
      }
    }
    rhs[nf + T] = b;
  }
  // Zero-mean pressure via one area-weighted multiplier row, handled in
  // bordered form against the grounded matrix.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (int T = 0; T < np; ++T) c[nf + T] = mesh.triangle_area(T);
  const BorderedSolve bs =
      solve_bordered(trip, n, c, rhs, nf, std::max(A.max_abs(), 1.0), "stokes solve");
  const Eigen::VectorXd& x = bs.x;

  StokesSolution sol;
  sol.velocity = {sys.vmap->kind, std::vector<double>(nv, 0.0)};
  sol.pressure = {sys.pmap->kind, std::vector<double>(np, 0.0)};
  for (int i = 0; i < nv; ++i)
    sol.velocity.coeffs[i] = free_index[i] >= 0 ? x[free_index[i]] : g[i];
  for (int T = 0; T < np; ++T) sol.pressure.coeffs[T] = x[nf + T];
  sol.multiplier = bs.lambda;

  // Residual of the full discrete system on the imposed equations.
  const auto Au = A.multiply(sol.velocity.coeffs);
  const auto Btp = B.multiply_transpose(sol.pressure.coeffs);
  const auto Bu = B.multiply(sol.velocity.coeffs);
  double r_mom = 0.0, scale_mom = 0.0;
  for (int i = 0; i < nv; ++i) {
    if (free_index[i] < 0) continue;
    const double r = sys.rhs_velocity[i] - Au[i] + Btp[i];
    r_mom += r * r;
    scale_mom += Au[i] * Au[i] + Btp[i] * Btp[i];
  }
  double r_div = 0.0;
  for (int T = 0; T < np; ++T) {
    const double r = Bu[T] - sys.rhs_pressure[T] - mesh.triangle_area(T) * sol.multiplier;
    r_div += r * r;
  }
  const double scale = std::max({norm2(sys.rhs_velocity), std::sqrt(scale_mom), 1e-30});
  sol.residual = std::sqrt(r_mom + r_div) / scale;
  if (!(sol.residual <= 1e-10))
    throw SolverError("stokes solve: relative residual " + std::to_string(sol.residual) +
                      " exceeds 1e-10");
  return sol;
}

FeFunction solve_stokes_projector(const Mesh& mesh, ElementKind element,
                                  const CellMatrixField& exact_gradient,
                                  const VectorField& exact_velocity, int quad_degree,
                                  const Vec2* singular_point) {
  const DofMap vmap = build_dofmap(mesh, element);
  const DofMap pmap = build_dofmap(mesh, ElementKind::P0);
  const SparseMatrix A = assemble_stiffness(mesh, vmap, 1.0);
  const SparseMatrix B = assemble_divergence(mesh, vmap, pmap);
  SaddleSystem sys;
  sys.A = &A;
  sys.B = &B;
  sys.rhs_velocity = assemble_gradient_rhs(mesh, vmap, exact_gradient, quad_degree, singular_point);
  sys.rhs_pressure.assign(pmap.n_dofs, 0.0);
  sys.dirichlet_values = interpolate_dirichlet(mesh, vmap, exact_velocity);
  sys.vmap = &vmap;
  sys.pmap = &pmap;
  sys.mesh = &mesh;
  return solve(sys).velocity;
}

HelmholtzResult helmholtz_projector(const Mesh& mesh, const CellVectorField& f,
                                    int quad_degree_assembly, int quad_degree_error) {
  const DofMap p1map = build_dofmap(mesh, ElementKind::P1Lagrange);
  const SparseMatrix K = assemble_p1_stiffness(mesh, p1map);
  const auto load = assemble_p1_gradient_load(mesh, p1map, f, quad_degree_assembly);
  const auto m = p1_integrals(mesh, p1map);

  const int nvert = p1map.n_dofs;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(K.n_nonzeros());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nvert);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nvert);
  for (int i = 0; i < nvert; ++i) {
    for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k)
      trip.emplace_back(i, K.col_idx[k], K.values[k]);
    c[i] = m[i];
    rhs[i] = load[i];
  }
  const BorderedSolve bs = solve_bordered(trip, nvert, c, rhs, 0,
                                          std::max(K.max_abs(), 1.0), "helmholtz projector");

  HelmholtzResult out;
  out.alpha = {ElementKind::P1Lagrange, std::vector<double>(nvert, 0.0)};
  for (int i = 0; i < nvert; ++i) out.alpha.coeffs[i] = bs.x[i];

  const QuadRule rule = triangle_rule(quad_degree_error);
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const Vec2 ga = eval_p1_gradient(mesh, p1map, out.alpha, t);
    const MappedRule mr = map_rule(rule, g.verts);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      const Vec2 d = f(t, mr.points[q]) - ga;
      s += mr.weights[q] * dot(d, d);
    }
  }
  out.remainder_norm = std::sqrt(s);
  return out;
}

}  // namespace pstokes
