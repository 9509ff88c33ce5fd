#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstokes/analysis.hpp"
#include "pstokes/solver.hpp"

namespace pstokes {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { markdown, csv, json };

/// Fully deterministic convergence-study configuration.
struct StudyConfig {
  ElementKind element = ElementKind::BernardiRaugel;
  bool run_classical = true;
  bool run_pressure_robust = true;
  ElementKind reconstruction = ElementKind::BDM1;  // resolved; see resolve_reconstruction
  bool reconstruction_auto = true;                 // auto: BDM1 for BR, RT0 for CR
  std::vector<double> nu_values = {1.0, 1e-2, 1e-4};
  int levels = 4;                // runs refinement levels 0 .. levels-1
  std::string mesh_path;         // empty: builtin L-shape
  int quad_degree_rhs = 10;
  int quad_degree_error = 10;
  OutputFormat format = OutputFormat::markdown;
  std::string output_path;       // empty: stdout
};

ElementKind resolve_reconstruction(const StudyConfig& config);
void validate_config(const StudyConfig& config);  // throws ConfigError

struct CaseResult {
  StokesMode mode;
  double nu;
  ConvergenceRecord record;
};

struct StudyResult {
  StudyConfig config;
  std::vector<CaseResult> cases;
  std::vector<double> wall_ms_per_level;
};

/// Runs the benchmark: per level build/refine the mesh, assemble, solve the
/// Stokes system for every (nu, mode) and the discrete Stokes projector once,
/// and collect the error reports.
StudyResult run_study(const StudyConfig& config);

void emit_markdown(const StudyResult& result, std::ostream& out);
void emit_csv(const StudyResult& result, std::ostream& out);
void emit_json(const StudyResult& result, std::ostream& out);

/// Dispatches on config.format and config.output_path.
void emit_table(const StudyResult& result);

/// Parsing helpers shared by the CLI and the config file.
ElementKind parse_element(const std::string& name);
OutputFormat parse_format(const std::string& name);
std::vector<double> parse_nu_list(const std::string& csv);

}  // namespace pstokes
