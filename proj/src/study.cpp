#include "pstokes/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "pstokes/exact_solution.hpp"

namespace pstokes {

ElementKind resolve_reconstruction(const StudyConfig& config) {
  if (!config.reconstruction_auto) return config.reconstruction;
  return config.element == ElementKind::BernardiRaugel ? ElementKind::BDM1 : ElementKind::RT0;
}

void validate_config(const StudyConfig& config) {
  if (config.element != ElementKind::BernardiRaugel &&
      config.element != ElementKind::CrouzeixRaviart)
    throw ConfigError("element: must be bernardi-raugel or crouzeix-raviart");
  if (!config.reconstruction_auto && !is_hdiv(config.reconstruction))
    throw ConfigError("reconstruction: must be bdm1, rt0 or auto");
  if (config.levels < 1) throw ConfigError("levels: must be >= 1");
  if (config.nu_values.empty()) throw ConfigError("nu: list must not be empty");
  for (double nu : config.nu_values)
    if (!(nu > 0.0)) throw ConfigError("nu: all values must be positive");
  if (!config.run_classical && !config.run_pressure_robust)
    throw ConfigError("mode: at least one of classical/pressure-robust required");
  if (config.quad_degree_rhs < 1 || config.quad_degree_rhs > 20)
    throw ConfigError("quad-rhs: degree must be in 1..20");
  if (config.quad_degree_error < 1 || config.quad_degree_error > 20)
    throw ConfigError("quad-error: degree must be in 1..20");
}

namespace {

SparseMatrix scaled(const SparseMatrix& m, double s) {
  SparseMatrix out = m;
  for (auto& v : out.values) v *= s;
  return out;
}

}  // namespace

StudyResult run_study(const StudyConfig& config) {
  validate_config(config);
  StudyResult result;
  result.config = config;

  const ElementKind recon = resolve_reconstruction(config);
  const Vec2 corner{0.0, 0.0};  // singular point of the manufactured solution
  const SingularSolution exact(1.0);  // velocity and forcing are nu-independent
  const VectorField velocity = [&](Vec2 p) { return exact.velocity(p); };
  const CellVectorField forcing = [](int, Vec2 p) { return benchmark_forcing(p); };
  const CellMatrixField exact_grad = [&](int, Vec2 p) { return exact.velocity_gradient(p); };
  const CellVectorField exact_vel_cell = [&](int, Vec2 p) { return exact.velocity(p); };

  std::vector<StokesMode> modes;
  if (config.run_classical) modes.push_back(StokesMode::classical);
  if (config.run_pressure_robust) modes.push_back(StokesMode::pressure_robust);
  for (StokesMode mode : modes)
    for (double nu : config.nu_values) result.cases.push_back({mode, nu, {}});

  Mesh mesh = config.mesh_path.empty() ? make_lshape_mesh() : load_mesh(config.mesh_path);
  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) mesh = red_refine(mesh);
    const auto t0 = std::chrono::steady_clock::now();

    const DofMap vmap = build_dofmap(mesh, config.element);
    const DofMap pmap = build_dofmap(mesh, ElementKind::P0);
    const DofMap tmap = build_dofmap(mesh, recon);
    const SparseMatrix A1 = assemble_stiffness(mesh, vmap, 1.0);
    const SparseMatrix B = assemble_divergence(mesh, vmap, pmap);
    SparseMatrix R;
    if (config.run_pressure_robust) R = assemble_reconstruction(mesh, vmap, tmap);

    const auto rhs_classical =
        config.run_classical
            ? assemble_rhs_classical(mesh, vmap, forcing, config.quad_degree_rhs)
            : std::vector<double>();
    const auto rhs_reconstructed =
        config.run_pressure_robust
            ? assemble_rhs(mesh, vmap, forcing, RhsMode::reconstructed, config.quad_degree_rhs,
                           &R, &tmap)
            : std::vector<double>();
    const auto dirichlet = interpolate_dirichlet(mesh, vmap, velocity);

    // One Stokes projector per level; it is independent of nu and mode.
    // The projector's data functional on discretely divergence-free test
    // functions is the Helmholtz-projected load P(-lap(v)), which vanishes
    // identically for this benchmark (-nu lap(v) = -grad(p0)); the remaining
    // problem is the zero-data solve with the interpolated boundary values.
    SaddleSystem proj;
    proj.A = &A1;
    proj.B = &B;
    proj.rhs_velocity.assign(vmap.n_dofs, 0.0);
    proj.rhs_pressure.assign(pmap.n_dofs, 0.0);
    proj.dirichlet_values = dirichlet;
    proj.vmap = &vmap;
    proj.pmap = &pmap;
    proj.mesh = &mesh;
    const FeFunction s_h = solve(proj).velocity;

    for (auto& item : result.cases) {
      const SparseMatrix A = scaled(A1, item.nu);
      SaddleSystem sys;
      sys.A = &A;
      sys.B = &B;
      sys.rhs_velocity =
          item.mode == StokesMode::classical ? rhs_classical : rhs_reconstructed;
      sys.rhs_pressure.assign(pmap.n_dofs, 0.0);
      sys.dirichlet_values = dirichlet;
      sys.vmap = &vmap;
      sys.pmap = &pmap;
      sys.mesh = &mesh;
      StokesSolution sol;
      try {
        sol = solve(sys);
      } catch (const SolverError& err) {
        throw SolverError("level " + std::to_string(level) + ", nu " + std::to_string(item.nu) +
                          ", " + mode_name(item.mode) + ": " + err.what());
      }

      ErrorReport report;
      report.h1_error = h1_seminorm_error(mesh, vmap, sol.velocity, exact_grad,
                                          config.quad_degree_error, &corner);
      report.projector_distance = projector_distance(sol.velocity, s_h, A1);
      report.l2_error = l2_error(mesh, vmap, sol.velocity, exact_vel_cell,
                                 config.quad_degree_error, &corner);
      report.divergence_norm = divergence_l2_norm(mesh, vmap, sol.velocity);
      report.dofs = vmap.n_dofs + pmap.n_dofs;
      report.h_max = mesh.h_max;
      item.record.levels.push_back(report);
    }

    const auto t1 = std::chrono::steady_clock::now();
    result.wall_ms_per_level.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  for (auto& item : result.cases) item.record.compute_orders();
  return result;
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string order_str(const std::vector<double>& orders, std::size_t level) {
  if (level == 0 || level - 1 >= orders.size()) return "-";
  const double o = orders[level - 1];
  if (std::isnan(o)) return "-";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", o);
  return buf;
}

}  // namespace

void emit_markdown(const StudyResult& result, std::ostream& out) {
  for (const auto& item : result.cases) {
    out << "## element=" << element_name(result.config.element)
        << " mode=" << mode_name(item.mode) << " nu=" << sci(item.nu) << "\n\n";
    out << "| ndof | h1_error | order | proj_dist | order |\n";
    out << "|---:|---:|---:|---:|---:|\n";
    for (std::size_t l = 0; l < item.record.levels.size(); ++l) {
      const auto& r = item.record.levels[l];
      out << "| " << r.dofs << " | " << sci(r.h1_error) << " | "
          << order_str(item.record.eoc_h1, l) << " | " << sci(r.projector_distance) << " | "
          << order_str(item.record.eoc_projector, l) << " |\n";
    }
    out << "\n";
  }
}

void emit_csv(const StudyResult& result, std::ostream& out) {
  out << "element,mode,nu,level,ndof,h1_error,h1_order,proj_dist,proj_order\n";
  for (const auto& item : result.cases) {
    for (std::size_t l = 0; l < item.record.levels.size(); ++l) {
      const auto& r = item.record.levels[l];
      out << element_name(result.config.element) << "," << mode_name(item.mode) << ","
          << full(item.nu) << "," << l << "," << r.dofs << "," << full(r.h1_error) << ","
          << order_str(item.record.eoc_h1, l) << "," << full(r.projector_distance) << ","
          << order_str(item.record.eoc_projector, l) << "\n";
    }
  }
}

void emit_json(const StudyResult& result, std::ostream& out) {
  nlohmann::json j;
  j["config"] = {
      {"element", element_name(result.config.element)},
      {"classical", result.config.run_classical},
      {"pressure_robust", result.config.run_pressure_robust},
      {"reconstruction", element_name(resolve_reconstruction(result.config))},
      {"nu", result.config.nu_values},
      {"levels", result.config.levels},
      {"mesh", result.config.mesh_path.empty() ? "builtin-lshape" : result.config.mesh_path},
      {"quad_degree_rhs", result.config.quad_degree_rhs},
      {"quad_degree_error", result.config.quad_degree_error},
  };
  j["wall_ms_per_level"] = result.wall_ms_per_level;
  j["cases"] = nlohmann::json::array();
  for (const auto& item : result.cases) {
    nlohmann::json c;
    c["mode"] = mode_name(item.mode);
    c["nu"] = item.nu;
    c["levels"] = nlohmann::json::array();
    for (const auto& r : item.record.levels)
      c["levels"].push_back({{"ndof", r.dofs},
                             {"h_max", r.h_max},
                             {"h1_error", r.h1_error},
                             {"projector_distance", r.projector_distance},
                             {"l2_error", r.l2_error},
                             {"divergence_norm", r.divergence_norm}});
    c["eoc_h1"] = item.record.eoc_h1;
    c["eoc_projector"] = item.record.eoc_projector;
    // NaN is not representable in JSON; emit null via the default dump of NaN
    for (auto& v : c["eoc_h1"])
      if (v.is_number_float() && std::isnan(v.get<double>())) v = nullptr;
    for (auto& v : c["eoc_projector"])
      if (v.is_number_float() && std::isnan(v.get<double>())) v = nullptr;
    j["cases"].push_back(c);
  }
  out << j.dump(2) << "\n";
}

void emit_table(const StudyResult& result) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!result.config.output_path.empty()) {
    file.open(result.config.output_path);
    if (!file)
      throw std::runtime_error("cannot open output path: " + result.config.output_path);
    out = &file;
  }
  switch (result.config.format) {
    case OutputFormat::markdown: emit_markdown(result, *out); break;
    case OutputFormat::csv: emit_csv(result, *out); break;
    case OutputFormat::json: emit_json(result, *out); break;
  }
}

ElementKind parse_element(const std::string& name) {
  if (name == "bernardi-raugel" || name == "br") return ElementKind::BernardiRaugel;
  if (name == "crouzeix-raviart" || name == "cr") return ElementKind::CrouzeixRaviart;
  if (name == "bdm1") return ElementKind::BDM1;
  if (name == "rt0") return ElementKind::RT0;
  throw ConfigError("unknown element name: " + name);
}

OutputFormat parse_format(const std::string& name) {
  if (name == "markdown") return OutputFormat::markdown;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("format: must be markdown, csv or json");
}

std::vector<double> parse_nu_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("nu: cannot parse value '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError("nu: list must not be empty");
  return out;
}

}  // namespace pstokes
