#include "sheaflab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sheaflab/document.hpp"
#include "sheaflab/errors.hpp"
#include "sheaflab/format.hpp"
#include "sheaflab/interval.hpp"
#include "sheaflab/sections.hpp"

namespace sheaflab {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string plural(std::size_t n, const char* noun) {
  std::string out = std::to_string(n) + " " + noun;
  if (n != 1) out += "s";
  return out;
}

/// --tol wins, then SHEAFLAB_TOL, then nothing (caller picks the default).
std::optional<double> explicit_tol(bool flag_given, double flag_value) {
  if (flag_given) return flag_value;
  const char* env = std::getenv("SHEAFLAB_TOL");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  double value = std::strtod(env, &end);
  if (end == env || *end != '\0' || !std::isfinite(value)) {
    throw Error(Errc::SyntaxError,
                std::string("invalid SHEAFLAB_TOL value '") + env + "'");
  }
  return value;
}

SheafDocument load_document(const std::string& path, bool lenient) {
  return parse_sheaf_document(
      read_file(path), lenient ? ParseMode::Lenient : ParseMode::Strict);
}

void print_violations(std::ostream& out,
                      const std::vector<Violation>& violations) {
  out << "invalid (" << plural(violations.size(), "violation") << ")\n";
  for (const Violation& v : violations) {
    out << "  " << violation_kind_name(v.kind) << ": " << v.location;
    if (v.kind == ViolationKind::CommutativityFailure) {
      out << " (deviation " << format_number(v.magnitude) << ")";
    }
    out << "\n";
  }
}

int run_validate(const SheafDocument& doc, std::optional<double> tol,
                 std::ostream& out) {
  Sheaf sheaf;
  if (is_interval_document(doc)) {
    sheaf = document_interval(doc).sheaf;
  } else {
    Complex complex = document_complex(doc);
    ValidationReport structural =
        check_structure(complex, doc.stalks, doc.maps);
    if (!structural.ok) {
      print_violations(out, structural.violations);
      return 2;
    }
    sheaf = build_sheaf(std::move(complex), doc.stalks, doc.maps);
  }
  ValidationReport report =
      validate(sheaf, tol ? *tol : default_validation_tol(sheaf));
  if (!report.ok) {
    print_violations(out, report.violations);
    return 2;
  }
  out << "valid (" << plural(sheaf.complex().cell_count(), "cell") << ", "
      << plural(sheaf.complex().relation_count(), "relation") << ")\n";
  return 0;
}

int run_check_section(const SheafDocument& doc, const std::string& name,
                      std::optional<double> tol, std::ostream& out) {
  Sheaf sheaf = document_sheaf(doc);
  Section section = document_section(doc, name);
  ConsistencyReport report = is_section_consistent(
      sheaf, section, tol ? *tol : default_validation_tol(sheaf));
  if (report.consistent) {
    out << "section '" << name << "': consistent ("
        << plural(sheaf.complex().relation_count(), "relation")
        << " checked)\n";
    return 0;
  }
  out << "section '" << name << "': inconsistent ("
      << plural(report.violations.size(), "violation") << ")\n";
  for (const ConsistencyViolation& v : report.violations) {
    out << "  " << relation_label(v.relation) << ": residual norm "
        << format_number(v.norm) << ", residual "
        << format_vector(v.residual) << "\n";
  }
  return 2;
}

int run_global(const SheafDocument& doc, std::optional<double> tol,
               std::ostream& out) {
  Sheaf sheaf = document_sheaf(doc);
  GlobalSectionBasis global =
      global_sections(sheaf, tol ? *tol : kDefaultRelTol);
  out << "columns:";
  for (const std::string& cell : global.cell_order) {
    out << " " << cell << ":" << sheaf.stalk_dim(cell);
  }
  out << "\n";
  out << "dim = " << global.dimension() << "\n";
  for (Eigen::Index i = 0; i < global.dimension(); ++i) {
    out << "basis " << i << ": "
        << format_vector(global.basis.columns.col(i)) << "\n";
  }
  return 0;
}

int run_radius(const SheafDocument& doc, const std::string& name,
               std::ostream& out) {
  Sheaf sheaf = document_sheaf(doc);
  double radius = consistency_radius(sheaf, document_assignment(doc, name));
  out << "radius = " << format_number(radius) << "\n";
  return 0;
}

int run_project(const SheafDocument& doc, const std::string& name,
                std::optional<double> tol, std::ostream& out) {
  Sheaf sheaf = document_sheaf(doc);
  NodeAssignment projected = nearest_global_section(
      sheaf, document_assignment(doc, name), tol ? *tol : kDefaultRelTol);
  for (const auto& [cell, value] : projected.values) {
    out << cell << " = " << format_vector(value) << "\n";
  }
  return 0;
}

int run_laplacian(const SheafDocument& doc, bool spectrum,
                  std::ostream& out) {
  Sheaf sheaf = document_sheaf(doc);
  CoboundaryOperator delta = assemble_coboundary(sheaf);
  Eigen::MatrixXd laplacian =
      delta.matrix().transpose() * delta.matrix();
  out << "columns:";
  for (const std::string& cell : delta.column_cells()) {
    out << " " << cell << ":" << sheaf.stalk_dim(cell);
  }
  out << "\n";
  if (laplacian.rows() > 0) out << format_matrix(laplacian) << "\n";
  if (spectrum) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    out << "eigenvalues: " << format_vector(solver.eigenvalues()) << "\n";
  }
  return 0;
}

std::string format_double_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  out += "]";
  return out;
}

int run_interval_glue(const SheafDocument& doc, const std::string& name,
                      std::optional<double> tol, std::ostream& out) {
  IntervalSheaf model = document_interval(doc);
  NodeAssignment locals = document_assignment(doc, name);
  GluedSamples glued =
      glue(model, locals, tol ? *tol : default_validation_tol(model.sheaf));
  out << "x = " << format_double_list(glued.points) << "\n";
  out << "f = " << format_double_list(glued.values) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"cellular sheaves of vector spaces on graphs and finite "
               "posets"};
  app.name("sheaflab");
  app.set_version_flag("--version", "sheaflab 0.1.0");
  app.require_subcommand(1);

  struct {
    std::string file;
    double tol = 0.0;
    bool lenient = false;
    std::string section;
    std::string assignment;
    bool spectrum = false;
  } opt;

  auto add_common = [&](CLI::App* cmd, const char* tol_help) {
    cmd->add_option("file", opt.file, "sheaf document")->required();
    cmd->add_flag("--lenient", opt.lenient,
                  "ignore unknown document fields");
    return tol_help == nullptr
               ? nullptr
               : cmd->add_option("--tol", opt.tol, tol_help);
  };

  auto* validate_cmd = app.add_subcommand(
      "validate", "check the sheaf axioms: structure and path independence");
  auto* validate_tol = add_common(validate_cmd, "commutativity tolerance");

  auto* check_cmd = app.add_subcommand(
      "check-section", "test a stored section against every restriction");
  auto* check_tol = add_common(check_cmd, "residual tolerance (max norm)");
  check_cmd->add_option("--section", opt.section, "stored section name")
      ->required();

  auto* global_cmd = app.add_subcommand(
      "global", "dimension and orthonormal basis of the global sections");
  auto* global_tol = add_common(global_cmd, "rank cutoff (relative)");

  auto* radius_cmd = app.add_subcommand(
      "radius", "consistency radius of a stored node assignment");
  add_common(radius_cmd, nullptr);
  radius_cmd
      ->add_option("--assignment", opt.assignment, "stored assignment name")
      ->required();

  auto* project_cmd = app.add_subcommand(
      "project", "nearest global section of a stored node assignment");
  auto* project_tol = add_common(project_cmd, "rank cutoff (relative)");
  project_cmd
      ->add_option("--assignment", opt.assignment, "stored assignment name")
      ->required();

  auto* laplacian_cmd =
      app.add_subcommand("laplacian", "sheaf Laplacian matrix");
  add_common(laplacian_cmd, nullptr);
  laplacian_cmd->add_flag("--spectrum", opt.spectrum,
                          "also print eigenvalues, ascending");

  auto* glue_cmd = app.add_subcommand(
      "interval-glue", "glue local interval samples into a global vector");
  auto* glue_tol = add_common(glue_cmd, "overlap agreement tolerance");
  glue_cmd->add_option("--assignment", opt.assignment,
                       "stored assignment name");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("sheaflab");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };

  try {
    SheafDocument doc = load_document(opt.file, opt.lenient);
    if (validate_cmd->parsed()) {
      return run_validate(doc, explicit_tol(given(validate_tol), opt.tol),
                          out);
    }
    if (check_cmd->parsed()) {
      return run_check_section(
          doc, opt.section, explicit_tol(given(check_tol), opt.tol), out);
    }
    if (global_cmd->parsed()) {
      return run_global(doc, explicit_tol(given(global_tol), opt.tol), out);
    }
    if (radius_cmd->parsed()) {
      return run_radius(doc, opt.assignment, out);
    }
    if (project_cmd->parsed()) {
      return run_project(doc, opt.assignment,
                         explicit_tol(given(project_tol), opt.tol), out);
    }
    if (laplacian_cmd->parsed()) {
      return run_laplacian(doc, opt.spectrum, out);
    }
    if (glue_cmd->parsed()) {
      std::string name =
          opt.assignment.empty() ? "locals" : opt.assignment;
      return run_interval_glue(
          doc, name, explicit_tol(given(glue_tol), opt.tol), out);
    }
    err << "error: no subcommand\n";
    return 1;
  } catch (const GlueConflictError& e) {
    out << "glue conflict at grid point " << format_number(e.x())
        << " (index " << e.grid_index() << "): " << format_number(e.first())
        << " vs " << format_number(e.second()) << ", difference "
        << format_number(e.difference()) << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sheaflab
