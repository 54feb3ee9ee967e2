#pragma once

#include <cstdint>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "nbgate/analysis.hpp"
#include "nbgate/design.hpp"
#include "nbgate/format.hpp"
#include "nbgate/sequence.hpp"
#include "nbgate/solution_io.hpp"

namespace nbgate::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_numeric = 1;
inline constexpr int exit_no_solution = 2;
inline constexpr int exit_usage = 64;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool write_payload(const std::string& path, std::ostream& out, std::ostream& err,
                          const std::string& payload) {
  if (path.empty()) {
    out << payload;
    return true;
  }
  std::ofstream file(path, std::ios::binary);
  file << payload;
  if (!file) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

inline std::vector<double> parse_phase_list(const std::string& text) {
  std::vector<double> phases;
  for (std::string_view item : split(text, ',')) {
    try {
      phases.push_back(parse_real(item) * pi);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return phases;
}

// profile and emit accept the same three sequence sources: an explicit phase
// list, an embedded table row, or the bare single-segment gate via --n 1.
inline CompositeSequence resolve_sequence(const std::string& phases_text, int from_table, int n,
                                          double theta, double theta_pi) {
  if (!phases_text.empty() && from_table != 0)
    throw UsageError("pass either --phases or --from-table, not both");
  if (from_table != 0) {
    const TableRow* row = find_table_row(from_table, theta_pi);
    if (!row)
      throw UsageError("no embedded row with " + std::to_string(from_table) +
                       " segments at this target angle");
    if (n != 0 && n != row->n_segments) throw UsageError("--n disagrees with the table row");
    return sequence_from_row(*row);
  }
  if (!phases_text.empty()) {
    std::vector<double> phases = parse_phase_list(phases_text);
    if (phases.size() % 2 == 0) throw UsageError("--phases needs an odd number of entries");
    if (n != 0 && n != static_cast<int>(phases.size()))
      throw UsageError("--n disagrees with the number of phases");
    return make_sequence(theta, std::move(phases));
  }
  if (n == 1) return make_sequence(theta, {0.0});
  throw UsageError(n == 0 ? "pass --phases, --from-table, or --n 1"
                          : "multi-segment sequences need --phases or --from-table");
}

}  // namespace detail

// Entry point behind main(): parses argv-style arguments and runs one
// subcommand. Returns 0 on success/PASS, 1 on numeric failure or FAIL, 2
// when a search finds nothing, 64 on usage errors.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design and analysis toolkit for narrowband composite two-qubit gates", "nbgate"};
  app.require_subcommand(1);

  struct {
    std::string theta;
    std::string phases;
    std::string out_path;
    int n = 0;
    int from_table = 0;
    int order = 0;
    int restarts = 64;
    int samples = 3001;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    double table_tol = 5e-3;
    double eps_min = -1.5;
    double eps_max = 1.5;
    bool adaptive = false;
    bool free_endpoints = false;
    bool check = false;
  } opt;

  const auto theta_values = CLI::IsMember({"pi/4", "pi/2"});

  CLI::App* solve_cmd = app.add_subcommand("solve", "Search for narrowband phase sets");
  solve_cmd->add_option("--n", opt.n, "Segment count (odd, >= 3)")->required();
  solve_cmd->add_option("--theta", opt.theta, "Target rotation angle")->required()->check(theta_values);
  solve_cmd->add_option("--order", opt.order, "Compression order (default (n-1)/2)");
  solve_cmd->add_option("--restarts", opt.restarts, "Solver restarts")->capture_default_str();
  solve_cmd->add_option("--seed", opt.seed, "Base seed for initial guesses")->capture_default_str();
  solve_cmd->add_option("--tol", opt.tol, "Residual tolerance")->capture_default_str();
  solve_cmd->add_option("--out", opt.out_path, "Write the solution document to a file");
  solve_cmd->add_flag("--adaptive", opt.adaptive, "Raise the order until no solution survives");
  solve_cmd->add_flag("--free-endpoints", opt.free_endpoints, "Release the fixed outer phases");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Check a phase set against the design conditions");
  verify_cmd->add_option("--theta", opt.theta, "Target rotation angle")->required()->check(theta_values);
  verify_cmd->add_option("--phases", opt.phases, "Comma-separated phases in units of pi")->required();
  verify_cmd->add_option("--order", opt.order, "Compression order (default (n-1)/2)");
  verify_cmd->add_option("--tol", opt.tol, "PASS threshold on the residual rms")->capture_default_str();
  verify_cmd->add_option("--out", opt.out_path, "Write the report to a file");

  CLI::App* profile_cmd =
      app.add_subcommand("profile", "Tabulate fidelity against the deviation as CSV");
  profile_cmd->add_option("--theta", opt.theta, "Target rotation angle")->required()->check(theta_values);
  profile_cmd->add_option("--n", opt.n, "Segment count (1 selects the bare gate)");
  profile_cmd->add_option("--phases", opt.phases, "Comma-separated phases in units of pi");
  profile_cmd->add_option("--from-table", opt.from_table, "Use the embedded row with this segment count");
  profile_cmd->add_option("--eps-min", opt.eps_min, "Lower end of the deviation range")->capture_default_str();
  profile_cmd->add_option("--eps-max", opt.eps_max, "Upper end of the deviation range")->capture_default_str();
  profile_cmd->add_option("--samples", opt.samples, "Grid size including both endpoints")->capture_default_str();
  profile_cmd->add_option("--out", opt.out_path, "Write the CSV to a file");

  CLI::App* table_cmd = app.add_subcommand("table", "Print the embedded reference phase sets");
  table_cmd->add_flag("--check", opt.check, "Re-verify each row and append residuals");
  table_cmd->add_option("--theta", opt.theta, "Only rows with this target angle")->check(theta_values);
  table_cmd->add_option("--tol", opt.table_tol, "PASS threshold for --check")->capture_default_str();
  table_cmd->add_option("--out", opt.out_path, "Write the listing to a file");

  CLI::App* emit_cmd = app.add_subcommand("emit", "Write the interleaved gate list");
  emit_cmd->add_option("--theta", opt.theta, "Target rotation angle")->required()->check(theta_values);
  emit_cmd->add_option("--phases", opt.phases, "Comma-separated phases in units of pi");
  emit_cmd->add_option("--from-table", opt.from_table, "Use the embedded row with this segment count");
  emit_cmd->add_option("--n", opt.n, "Expected segment count (consistency check; 1 selects the bare gate)");
  emit_cmd->add_flag("--check", opt.check, "Re-simulate the emitted list and compare");
  emit_cmd->add_option("--tol", opt.tol, "PASS threshold for --check")->capture_default_str();
  emit_cmd->add_option("--out", opt.out_path, "Write the gate list to a file");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("nbgate");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  const double theta = (opt.theta == "pi/4") ? pi / 4.0 : pi / 2.0;
  const double theta_pi = (opt.theta == "pi/4") ? 0.25 : 0.5;

  try {
    if (app.got_subcommand(solve_cmd)) {
      if (opt.n < 3 || opt.n % 2 == 0) throw UsageError("--n must be odd and >= 3");
      if (opt.order < 0) throw UsageError("--order must be >= 1");
      if (opt.restarts < 0) throw UsageError("--restarts must be >= 0");
      if (!(opt.tol > 0.0)) throw UsageError("--tol must be positive");
      DesignSpec spec;
      spec.n_segments = opt.n;
      spec.target_angle = theta;
      spec.order = opt.order > 0 ? opt.order : (opt.n - 1) / 2;
      spec.solver.restarts = opt.restarts;
      spec.solver.seed = opt.seed;
      spec.solver.residual_tol = opt.tol;
      spec.fix_endpoints = !opt.free_endpoints;

      std::vector<SolutionRecord> records;
      if (opt.adaptive) {
        AdaptiveResult res = solve_adaptive(spec);
        records = std::move(res.records);
        err << "adaptive_order=" << res.order << "\n";
      } else {
        records = solve(spec);
      }
      if (!detail::write_payload(opt.out_path, out, err, solutions_to_json(records)))
        return exit_numeric;
      err << "solutions=" << records.size() << "\n";
      return records.empty() ? exit_no_solution : exit_ok;
    }

    if (app.got_subcommand(verify_cmd)) {
      const std::vector<double> phases = detail::parse_phase_list(opt.phases);
      if (phases.size() < 3 || phases.size() % 2 == 0)
        throw UsageError("--phases needs an odd number of entries, at least 3");
      if (opt.order < 0) throw UsageError("--order must be >= 1");
      if (!(opt.tol > 0.0)) throw UsageError("--tol must be positive");
      const int n = static_cast<int>(phases.size());
      const int order = opt.order > 0 ? opt.order : (n - 1) / 2;

      const ResidualBreakdown b = residual_breakdown(make_sequence(theta, phases), order);
      const bool pass = b.rms_total < opt.tol;
      std::string report;
      report += "n=" + std::to_string(n) + " theta=" + opt.theta +
                " order=" + std::to_string(order) + " tol=" + format_real(opt.tol) + "\n";
      report += "eps0_gate_match_rms=" + format_real(b.rms_match) + "\n";
      report += "minus1_derivative_rms=" + format_real(b.rms_minus) + "\n";
      report += "plus1_identity_rms=" + format_real(b.rms_plus) + "\n";
      report += "total_rms=" + format_real(b.rms_total) + "\n";
      report += pass ? "PASS\n" : "FAIL\n";
      if (!detail::write_payload(opt.out_path, out, err, report)) return exit_numeric;
      return pass ? exit_ok : exit_numeric;
    }

    if (app.got_subcommand(profile_cmd)) {
      if (opt.samples < 2) throw UsageError("--samples must be >= 2");
      if (!(opt.eps_min < opt.eps_max)) throw UsageError("--eps-min must lie below --eps-max");
      const CompositeSequence seq =
          detail::resolve_sequence(opt.phases, opt.from_table, opt.n, theta, theta_pi);
      const FidelityProfile p = profile(seq, opt.eps_min, opt.eps_max, opt.samples);
      if (!detail::write_payload(opt.out_path, out, err, to_csv(p))) return exit_numeric;

      const ProfileMetrics m = profile_metrics(p);
      std::string line;
      if (p.eps_grid.front() <= 0.0 && p.eps_grid.back() >= 0.0)
        line += "fwhm=" + (m.fwhm ? format_real(*m.fwhm) : std::string("undefined"));
      if (m.crosstalk_min_identity_fidelity) {
        if (!line.empty()) line += ' ';
        line += "crosstalk_min=" + format_real(*m.crosstalk_min_identity_fidelity);
      }
      if (!line.empty()) err << line << "\n";
      return exit_ok;
    }

    if (app.got_subcommand(table_cmd)) {
      if (opt.check && !(opt.table_tol > 0.0)) throw UsageError("--tol must be positive");
      const bool filter = !opt.theta.empty();
      bool all_pass = true;
      std::string doc;
      for (const TableRow& row : reference_table()) {
        if (filter && row.theta_pi != theta_pi) continue;
        doc += "n=" + std::to_string(row.n_segments);
        doc += std::string(" theta=") + (row.theta_pi == 0.25 ? "pi/4" : "pi/2");
        doc += " order=" + std::to_string(row.order);
        doc += " phases_pi=";
        for (std::size_t i = 0; i < row.phases_pi.size(); ++i) {
          if (i) doc += ',';
          doc += format_real(row.phases_pi[i]);
        }
        if (opt.check) {
          const double rms = residual_rms(nb_residuals(sequence_from_row(row), row.order));
          const bool pass = rms < opt.table_tol;
          all_pass = all_pass && pass;
          doc += " residual_rms=" + format_real(rms);
          doc += pass ? " PASS" : " FAIL";
        }
        doc += "\n";
      }
      if (!detail::write_payload(opt.out_path, out, err, doc)) return exit_numeric;
      return (opt.check && !all_pass) ? exit_numeric : exit_ok;
    }

    if (app.got_subcommand(emit_cmd)) {
      if (opt.check && !(opt.tol > 0.0)) throw UsageError("--tol must be positive");
      const CompositeSequence seq =
          detail::resolve_sequence(opt.phases, opt.from_table, opt.n, theta, theta_pi);
      const std::string text = gate_list_to_text(emit_gate_list(seq));
      if (!detail::write_payload(opt.out_path, out, err, text)) return exit_numeric;
      if (opt.check) {
        const Mat4 sim = simulate_gate_list(gate_list_from_text(text));
        const double dist = (sim - composite_propagator(seq, 0.0)).frobenius_norm();
        const bool pass = dist < opt.tol;
        err << "check_distance=" << format_real(dist) << (pass ? " PASS" : " FAIL") << "\n";
        if (!pass) return exit_numeric;
      }
      return exit_ok;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_numeric;
  }
  return exit_usage;
}

}  // namespace nbgate::cli
