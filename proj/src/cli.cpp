#include "arat/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "arat/error.hpp"
#include "arat/homotopy.hpp"
#include "arat/io.hpp"

namespace arat {
namespace {

using nlohmann::json;

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

json one_based(const std::vector<std::size_t>& idx) {
  json out = json::array();
  for (std::size_t k : idx) out.push_back(k + 1);
  return out;
}

bool strictly_interior(const SquareLcp& lcp, const Vector& x) {
  return x.size() == lcp.q.size() && x.minCoeff() > 0.0 &&
         (lcp.m * x + lcp.q).minCoeff() > 0.0;
}

std::string join(const Vector& v) {
  std::ostringstream s;
  s << std::setprecision(12);
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? " " : "") << v(i);
  return s.str();
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    s += (k ? " " : "") + std::to_string(v[k] + 1);
  }
  return s;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kParse: return 2;
    case ErrorCode::kNoInteriorPointFound: return 3;
    default: return 1;
  }
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("arat", sink);
  log->set_pattern("[%l] %v");
  const char* env = std::getenv("ARAT_HOMOTOPY_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet") {
    log->set_level(spdlog::level::off);
  } else if (level == "debug") {
    log->set_level(spdlog::level::debug);
  } else {
    log->set_level(spdlog::level::info);
  }
  return log;
}

void print_summary(std::ostream& out, const SolveReport& r) {
  out << "status: " << to_string(r.trace.status) << '\n';
  out << "start: " << r.start_source << " x0 = " << join(r.x0) << '\n';
  out << "steps: " << r.trace.counts.accepted << " accepted, "
      << r.trace.counts.rejected << " rejected\n";
  out << "final t: " << r.trace.final.t << '\n';
  if (r.solution) {
    out << "value: " << join(r.solution->value) << '\n';
    out << "strategy I: " << join(r.solution->strategy_one) << '\n';
    out << "strategy II: " << join(r.solution->strategy_two) << '\n';
  }
  if (r.certificate) {
    out << "certificate: " << (r.certificate->passed() ? "passed" : "FAILED")
        << " (value error " << r.certificate->value_error << ")\n";
    for (const auto& v : r.certificate->violations) out << "  " << v << '\n';
  }
  if (!r.failure.empty()) out << "failure: " << r.failure << '\n';
}

}  // namespace

SolveReport solve_game(AratGame game, const SolveOptions& options) {
  if (options.beta_override) game.beta = *options.beta_override;
  const ValidationReport valid = validate(game);
  if (!valid.ok()) throw Error(ErrorCode::kInvalidGame, valid.violations.front());

  SolveReport report;
  AratGame work = game;
  if (options.shift_rewards) {
    double lo1 = INFINITY;
    double lo2 = INFINITY;
    for (std::size_t s = 0; s < game.num_states(); ++s) {
      lo1 = std::min(lo1, game.r1[s].minCoeff());
      lo2 = std::min(lo2, game.r2[s].minCoeff());
    }
    report.shift_one = std::max(0.0, 1.0 - lo1);
    report.shift_two = std::max(0.0, 1.0 - lo2);
    work = shift_rewards(game, report.shift_one, report.shift_two);
  }

  const SquareLcp lcp = to_equivalent_lcp(build_vlcp(work));
  if (options.x0_hint && strictly_interior(lcp, *options.x0_hint)) {
    report.start_source = "hint";
    report.x0 = *options.x0_hint;
  } else {
    if (options.x0_hint) {
      report.notices.push_back(
          "x0 hint is not strictly interior; using the automatic start");
    }
    InteriorPointOptions ip;
    ip.beta = work.beta;
    report.start_source = "auto";
    report.x0 = find_interior_point(lcp, ip);
  }

  // A path can end at a KKT point of the merit problem that is not
  // complementary, or stall; a farther start usually gets through.
  if (!(options.restart_scale > 0.0)) {
    throw Error(ErrorCode::kPreconditionViolated, "restart scale must be positive");
  }
  for (std::size_t attempt = 0;; ++attempt) {
    const HomotopyInstance inst(lcp.m, lcp.q, report.x0);
    report.trace = trace(inst, options.tracer);
    if ((report.trace.status != TraceStatus::kNonComplementaryLimit &&
         report.trace.status != TraceStatus::kNoProgress) ||
        attempt >= options.restarts) {
      break;
    }
    const Vector next = options.restart_scale * report.x0;
    if (!strictly_interior(lcp, next)) break;
    report.notices.push_back(std::string(to_string(report.trace.status)) +
                             "; restarting from x0 scaled by " +
                             join(Vector::Constant(1, options.restart_scale)));
    report.x0 = next;
    ++report.restarts;
  }
  if (!report.converged()) {
    report.failure = "trace ended with status " +
                     std::string(to_string(report.trace.status));
    return report;
  }

  try {
    VlcpSolution sol = extract_solution(report.trace, lcp);
    const double offset =
        (report.shift_one + report.shift_two) / (1.0 - work.beta);
    sol.value.array() -= offset;
    report.certificate = certify(game, sol, options.certify_tol);
    report.solution = std::move(sol);
  } catch (const Error& e) {
    report.failure = e.what();
  }
  return report;
}

json report_json(const SolveReport& r) {
  json doc;
  doc["status"] = std::string(to_string(r.trace.status));
  doc["ok"] = r.ok();
  doc["start"] = {{"source", r.start_source},
                  {"x0", to_json(r.x0)},
                  {"restarts", r.restarts}};
  doc["shift"] = {{"playerI", r.shift_one}, {"playerII", r.shift_two}};
  doc["steps"] = {{"accepted", r.trace.counts.accepted},
                  {"rejected", r.trace.counts.rejected},
                  {"corrector_passes", r.trace.counts.corrector_passes}};
  const double residual =
      r.trace.path.empty() ? 0.0 : r.trace.path.back().residual;
  doc["final"] = {{"t", r.trace.final.t}, {"residual", residual}};
  doc["message"] = r.trace.message;
  if (r.solution) {
    doc["value"] = to_json(r.solution->value);
    doc["strategies"] = {{"playerI", one_based(r.solution->strategy_one)},
                         {"playerII", one_based(r.solution->strategy_two)}};
    doc["x"] = to_json(r.solution->x);
  }
  if (r.certificate) {
    const CertificateReport& c = *r.certificate;
    doc["certificate"] = {{"value_ok", c.value_ok},
                          {"player_one_ok", c.player_one_ok},
                          {"player_two_ok", c.player_two_ok},
                          {"passed", c.passed()},
                          {"value_error", c.value_error},
                          {"oracle_value", to_json(c.oracle_value)},
                          {"violations", c.violations}};
  }
  if (!r.failure.empty()) doc["failure"] = r.failure;
  doc["notices"] = r.notices;
  return doc;
}

json build_json(const AratGame& game) {
  const VlcpInstance vlcp = build_vlcp(game);
  const SquareLcp lcp = to_equivalent_lcp(vlcp);
  json blocks = json::array();
  for (const BlockRange& b : lcp.blocks) {
    json idx = json::array();
    for (std::size_t k = 0; k < b.count; ++k) idx.push_back(b.first + k + 1);
    blocks.push_back(idx);
  }
  return {{"vlcp",
           {{"matrix", to_json(vlcp.a.entries)},
            {"block_sizes", vlcp.a.block_sizes},
            {"column_labels", vlcp.column_labels},
            {"q", to_json(vlcp.q)}}},
          {"lcp",
           {{"n", lcp.size()},
            {"matrix", to_json(lcp.m)},
            {"q", to_json(lcp.q)},
            {"copies", blocks}}}};
}

json oracle_json(const AratGame& game) {
  const ValidationReport valid = validate(game);
  if (!valid.ok()) throw Error(ErrorCode::kInvalidGame, valid.violations.front());
  const GameSolution vi = value_iteration(game);
  json doc;
  doc["value_iteration"] = {{"value", to_json(vi.v)},
                            {"strategies",
                             {{"playerI", one_based(vi.strategy_one)},
                              {"playerII", one_based(vi.strategy_two)}}},
                            {"iterations", vi.iterations},
                            {"residual", vi.residual}};

  const SquareLcp lcp = to_equivalent_lcp(build_vlcp(game));
  json en;
  en["n"] = lcp.size();
  if (lcp.size() > kEnumerationGuard) {
    en["skipped"] = true;
    en["notice"] = "n = " + std::to_string(lcp.size()) + " exceeds the " +
                   std::to_string(kEnumerationGuard) +
                   " limit; enumeration skipped";
  } else {
    en["skipped"] = false;
    json list = json::array();
    for (const LcpPair& p : enumerate_lcp(lcp.m, lcp.q)) {
      json item = {{"z", to_json(p.z)}, {"w", to_json(p.w)}};
      try {
        const VlcpSolution sol = recover_vlcp_solution(lcp, p.z, p.w);
        item["x"] = to_json(sol.x);
        item["value"] = to_json(sol.value);
        item["strategies"] = {{"playerI", one_based(sol.strategy_one)},
                              {"playerII", one_based(sol.strategy_two)}};
      } catch (const Error& e) {
        item["recovery_error"] = e.what();
      }
      list.push_back(std::move(item));
    }
    en["solutions"] = std::move(list);
  }
  doc["enumeration"] = std::move(en);
  return doc;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  auto log = make_logger(err);
  CLI::App app{"Homotopy solver for discounted zero-sum ARAT stochastic games",
               "arat-homotopy"};
  app.require_subcommand(1);

  std::string path;
  auto* validate_cmd = app.add_subcommand("validate", "check a game file");
  validate_cmd->add_option("game", path, "game JSON file")->required();
  auto* build_cmd = app.add_subcommand("build", "print the VLCP and square LCP");
  build_cmd->add_option("game", path, "game JSON file")->required();
  auto* oracle_cmd =
      app.add_subcommand("oracle", "value iteration and LCP enumeration");
  oracle_cmd->add_option("game", path, "game JSON file")->required();

  auto* solve_cmd = app.add_subcommand("solve", "trace the homotopy path");
  solve_cmd->add_option("game", path, "game JSON file")->required();
  SolveOptions opt;
  std::optional<double> beta;
  std::string x0 = "auto";
  std::string trace_path;
  std::string json_path;
  solve_cmd->add_option("--beta-override", beta, "replace the discount factor");
  solve_cmd->add_option("--x0", x0, "start x as comma list, or auto");
  solve_cmd->add_option("--eps1", opt.tracer.eps1)->capture_default_str();
  solve_cmd->add_option("--eps2", opt.tracer.eps2)->capture_default_str();
  solve_cmd->add_option("--eps3", opt.tracer.eps3)->capture_default_str();
  solve_cmd->add_option("--l0", opt.tracer.l0)->capture_default_str();
  solve_cmd->add_option("--m", opt.tracer.m, "corrector passes per step")
      ->capture_default_str();
  solve_cmd->add_option("--r-accept", opt.tracer.r_accept)->capture_default_str();
  solve_cmd->add_option("--max-steps", opt.tracer.max_steps)
      ->capture_default_str();
  solve_cmd->add_option("--a0", opt.tracer.a0, "smallest movement counted as a step")
      ->capture_default_str();
  solve_cmd->add_option("--bound", opt.tracer.bound_b, "abort when |u|_inf exceeds this")
      ->capture_default_str();
  solve_cmd->add_flag_callback(
      "--full-gate", [&opt] { opt.tracer.gate = PositivityGate::kFull; },
      "require every component of u to stay positive");
  solve_cmd->add_flag_callback(
      "--no-landing", [&opt] { opt.tracer.land_at_zero = false; },
      "do not cut steps that would cross t = 0");
  solve_cmd->add_option("--restarts", opt.restarts,
                        "retries from a scaled start after a non-complementary limit or a stall")
      ->capture_default_str();
  solve_cmd->add_option("--restart-scale", opt.restart_scale)->capture_default_str();
  solve_cmd->add_option("--trace", trace_path, "write the path as CSV");
  solve_cmd->add_flag("--shift-rewards", opt.shift_rewards,
                      "shift rewards to be >= 1 before solving");
  solve_cmd->add_option("--json-out", json_path,
                        "write the JSON report to a file, - for stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const AratGame game = load_game(path);

    if (validate_cmd->parsed()) {
      const ValidationReport rep = validate(game);
      json doc = {{"valid", rep.ok()}, {"violations", rep.violations}};
      if (rep.ok()) {
        const Vbr0Conditions c = check_vbr0_sufficient(game);
        doc["holds_a"] = c.holds_a;
        doc["holds_b"] = c.holds_b;
      }
      out << doc.dump(2) << '\n';
      return rep.ok() ? 0 : 1;
    }
    if (build_cmd->parsed()) {
      out << build_json(game).dump(2) << '\n';
      return 0;
    }
    if (oracle_cmd->parsed()) {
      const json doc = oracle_json(game);
      if (doc["enumeration"]["skipped"].get<bool>()) {
        log->info("{}", doc["enumeration"]["notice"].get<std::string>());
      }
      out << doc.dump(2) << '\n';
      return 0;
    }

    opt.beta_override = beta;
    if (x0 != "auto") opt.x0_hint = parse_csv_vector(x0);
    const SolveReport rep = solve_game(game, opt);
    for (const auto& n : rep.notices) log->info("{}", n);
    log->info("trace {} after {} accepted steps",
              to_string(rep.trace.status), rep.trace.counts.accepted);
    if (log->should_log(spdlog::level::debug)) {
      for (const PathPoint& p : rep.trace.path) {
        log->debug("step {} t={:.6e} residual={:.3e} a={:.3e} det={}",
                   p.step_index, p.point.t, p.residual, p.step_length,
                   p.det_sign);
      }
    }

    if (!trace_path.empty()) {
      std::ofstream csv(trace_path);
      if (!csv) throw Error(ErrorCode::kParse, "cannot write " + trace_path);
      write_trace_csv(csv, rep.trace);
    }
    const std::string body = report_json(rep).dump(2) + "\n";
    if (json_path == "-") {
      out << body;
    } else {
      print_summary(out, rep);
      if (!json_path.empty()) {
        std::ofstream js(json_path);
        if (!js) throw Error(ErrorCode::kParse, "cannot write " + json_path);
        js << body;
      }
    }
    if (!rep.ok()) {
      log->error("{}", rep.failure.empty() ? "certificate failed" : rep.failure);
    }
    return rep.ok() ? 0 : 1;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace arat
