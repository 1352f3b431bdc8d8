#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "khess/format.hpp"
#include "khess/pohozaev.hpp"
#include "khess/properties.hpp"
#include "khess/radial.hpp"

namespace khess::cli {

namespace {

struct ProblemFlags {
  int n = 3;
  double curvature = 0.0;
  int k = 2;
  int l = 0;
  double c1 = 0.0;
  double c2 = 1.0;

  ProblemParams params() const {
    if (n < 1) throw ParameterError("dimension must be positive, got n = " + std::to_string(n));
    ProblemParams p{SpaceForm(n, curvature), k, l, c1, c2};
    p.validate();
    return p;
  }
};

struct SolutionConfig {
  ProblemFlags problem;
  int samples = 200;
  std::string method = "closed";
  double step = 1e-3;
  std::string output;
};

struct VerifyConfig {
  ProblemFlags problem;
  std::string identities = "L6_1,L6_2_i,L6_2_ii,L6_3";
  GridOptions grid;
  double tolerance = 1e-8;
  std::optional<double> negative_control;
  std::string format = "text";
  std::string output;
};

struct PropertiesConfig {
  PropertySuiteOptions suite;
};

void add_problem_options(CLI::App* cmd, ProblemFlags& p) {
  cmd->add_option("--n", p.n, "dimension")->capture_default_str();
  cmd->add_option("--K", p.curvature, "sectional curvature")->capture_default_str();
  cmd->add_option("--k", p.k, "numerator order")->capture_default_str();
  cmd->add_option("--l", p.l, "denominator order")->capture_default_str();
  cmd->add_option("--c1", p.c1, "boundary value is K*c1")->capture_default_str();
  cmd->add_option("--c2", p.c2, "boundary normal derivative")->capture_default_str();
}

bool any_problem_option(const CLI::App* cmd) {
  for (const char* name : {"--n", "--K", "--k", "--l", "--c1", "--c2"}) {
    if (cmd->get_option(name)->count() > 0) return true;
  }
  return false;
}

/// Writes to --output when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::invalid_argument("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::vector<IdentityId> parse_identity_list(const std::string& text) {
  std::vector<IdentityId> ids;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const auto id = parse_identity(item);
    if (!id) {
      throw std::invalid_argument("unknown identity '" + item +
                                  "' (expected L6_1, L6_2_i, L6_2_ii, L6_3, EqI_pointwise)");
    }
    ids.push_back(*id);
  }
  if (ids.empty()) throw std::invalid_argument("no identities selected");
  return ids;
}

int cmd_solution(const SolutionConfig& cfg, std::ostream& out) {
  const ProblemParams params = cfg.problem.params();
  if (cfg.samples < 2) throw std::invalid_argument("--samples must be at least 2");
  const RadialSolution sol =
      cfg.method == "shoot" ? shot_solution(params, cfg.step) : explicit_solution(params);
  Sink sink(cfg.output, out);
  write_solution_csv(sink.get(), sol, cfg.samples);
  return kPass;
}

void emit_reports(std::ostream& out, const std::string& format,
                  const std::vector<IdentityReport>& reports) {
  if (format == "csv") {
    write_report_csv_header(out);
    for (const auto& r : reports) write_report_csv_row(out, r);
  } else {
    write_report_text(out, reports);
  }
}

int cmd_verify(const VerifyConfig& cfg, bool single_case, std::ostream& out, std::ostream& err) {
  const std::vector<IdentityId> ids = parse_identity_list(cfg.identities);
  std::vector<ProblemParams> cases;
  if (single_case) {
    cases.push_back(cfg.problem.params());
    if (cases.back().l != 0) {
      throw ParameterError("the integral identities are stated for l = 0, got l = " +
                           std::to_string(cases.back().l));
    }
  } else {
    cases = reference_matrix(true);
  }

  std::vector<IdentityReport> reports;
  std::vector<IdentityReport> failures;

  if (!cfg.negative_control) {
    for (const auto& params : cases) {
      const RadialSolution sol = explicit_solution(params);
      for (IdentityId id : ids) {
        IdentityReport r = verify_identity(sol, id, cfg.grid);
        if (!(r.rel_residual < cfg.tolerance) || !r.converged) failures.push_back(r);
        reports.push_back(std::move(r));
      }
    }
    Sink sink(cfg.output, out);
    emit_reports(sink.get(), cfg.format, reports);
    if (!failures.empty()) {
      err << failures.size() << " of " << reports.size()
          << " identity checks failed (rel_residual >= " << format_number(cfg.tolerance, 6)
          << " or unconverged):\n";
      write_report_text(err, failures);
      return kVerificationFailure;
    }
    return kPass;
  }

  // Expected-failure mode: each PDE-dependent identity must blow up on the
  // perturbed profile, to well above both its unperturbed residual and the
  // pass tolerance.
  const double eps = *cfg.negative_control;
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("--negative-control needs a positive perturbation size");
  }
  for (const auto& params : cases) {
    const RadialSolution sol = explicit_solution(params);
    for (IdentityId id : ids) {
      const IdentityReport base = verify_identity(sol, id, cfg.grid);
      IdentityReport r = negative_control(sol, eps, id, cfg.grid);
      const double floor = std::max(100.0 * base.rel_residual, cfg.tolerance);
      if (requires_solution(id) && !(r.rel_residual > floor)) failures.push_back(r);
      reports.push_back(std::move(r));
    }
  }
  Sink sink(cfg.output, out);
  emit_reports(sink.get(), cfg.format, reports);
  if (std::find(ids.begin(), ids.end(), IdentityId::L6_2_i) != ids.end() && cfg.format != "csv") {
    sink.get() << "note: L6_2_i holds for any radial profile and is not PDE-dependent\n";
  }
  if (!failures.empty()) {
    err << failures.size() << " PDE-dependent checks did not detect the perturbation:\n";
    write_report_text(err, failures);
    return kVerificationFailure;
  }
  return kPass;
}

int cmd_properties(const PropertiesConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.suite.trials < 0) throw std::invalid_argument("--trials must be non-negative");
  if (cfg.suite.max_dimension < 2 || cfg.suite.max_dimension > 16) {
    throw std::invalid_argument("--nmax must lie in [2, 16]");
  }
  const PropertySuiteReport report = run_property_suite(cfg.suite);
  out << "seed " << cfg.suite.seed << ", " << cfg.suite.trials << " trials per property, n <= "
      << cfg.suite.max_dimension << '\n';
  if (report.vacuous()) {
    err << "warning: zero trials requested; every property passes vacuously\n";
  }
  for (const auto& r : report.results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  trials=" << r.trials
        << "  worst=" << format_number(r.worst, 6) << "  threshold=" << format_number(r.threshold, 6);
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
  }
  return report.passed() ? kPass : kVerificationFailure;
}

void add_config_option(CLI::App* cmd) {
  // Consumed by expand_config before parsing; registered for --help.
  cmd->add_option("--config", "file of key=value defaults (keys are flag names); flags override");
}

/// Replaces `--config FILE` by the file's entries as `--key value` pairs
/// placed right after the subcommand, so explicit flags (TakeLast) win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = CLI::detail::trim_copy(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw CLI::ConversionError(path + ":" + std::to_string(line_no) + ": expected key=value");
      }
      from_file.push_back("--" + CLI::detail::trim_copy(trimmed.substr(0, eq)));
      from_file.push_back(CLI::detail::trim_copy(trimmed.substr(eq + 1)));
    }
  }
  if (from_file.empty()) return rest;
  std::vector<std::string> out;
  out.push_back(rest.front());
  std::size_t i = 1;
  // Everything up to and including the subcommand name.
  for (; i < rest.size(); ++i) {
    out.push_back(rest[i]);
    if (rest[i] == "solution" || rest[i] == "verify" || rest[i] == "properties") {
      ++i;
      break;
    }
  }
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(i), rest.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial k-Hessian solutions on space forms and their integral identities"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  SolutionConfig solution;
  auto* sol_cmd = app.add_subcommand("solution", "Sample the closed-form (or shot) radial solution as CSV");
  add_config_option(sol_cmd);
  add_problem_options(sol_cmd, solution.problem);
  sol_cmd->add_option("--samples", solution.samples, "rows in the CSV")->capture_default_str();
  sol_cmd->add_option("--method", solution.method, "closed or shoot")
      ->check(CLI::IsMember({"closed", "shoot"}))
      ->capture_default_str();
  sol_cmd->add_option("--step", solution.step, "RK4 step for --method shoot")->capture_default_str();
  sol_cmd->add_option("--output,-o", solution.output, "CSV path (default stdout)");

  VerifyConfig verify;
  auto* ver_cmd = app.add_subcommand(
      "verify", "Check the integral identities; without problem flags, over the reference matrix");
  add_config_option(ver_cmd);
  add_problem_options(ver_cmd, verify.problem);
  ver_cmd->add_option("--identities", verify.identities, "comma-separated identity ids")
      ->capture_default_str();
  auto* panels_opt =
      ver_cmd->add_option("--panels", verify.grid.panels, "initial panel count; alone it pins the grid")
          ->capture_default_str();
  ver_cmd->add_option("--nodes", verify.grid.nodes_per_panel, "Gauss-Legendre nodes per panel")
      ->capture_default_str();
  auto* refine_opt =
      ver_cmd->add_option("--max-refinements", verify.grid.max_refinements, "panel doublings")
          ->capture_default_str();
  ver_cmd->add_option("--tolerance", verify.tolerance, "pass threshold on rel_residual")
      ->capture_default_str();
  ver_cmd->add_option("--negative-control", verify.negative_control,
                      "perturb u by eps r^2 (R - r)^2 and expect the identities to fail");
  ver_cmd->add_option("--format", verify.format, "csv or text")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();
  ver_cmd->add_option("--output,-o", verify.output, "report path (default stdout)");

  PropertiesConfig properties;
  auto* prop_cmd = app.add_subcommand("properties", "Seeded property suite for the symmetric functions");
  add_config_option(prop_cmd);
  prop_cmd->add_option("--trials", properties.suite.trials, "samples per property")->capture_default_str();
  prop_cmd->add_option("--seed", properties.suite.seed, "corpus seed")->capture_default_str();
  prop_cmd->add_option("--nmax", properties.suite.max_dimension, "largest dimension drawn")
      ->capture_default_str();

  std::vector<std::string> expanded;
  std::vector<const char*> argv;
  try {
    expanded = expand_config(args);
    for (const auto& a : expanded) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (*sol_cmd) return cmd_solution(solution, out);
    if (*ver_cmd) {
      // An explicit --panels without --max-refinements fixes the grid.
      if (panels_opt->count() > 0 && refine_opt->count() == 0) verify.grid.max_refinements = 0;
      return cmd_verify(verify, any_problem_option(ver_cmd), out, err);
    }
    return cmd_properties(properties, out, err);
  } catch (const ShootingError& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const std::invalid_argument& e) {
    // ParameterError, PreconditionError and option validation.
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace khess::cli
