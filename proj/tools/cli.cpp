#include "cli.hpp"

#include "pcsplit/errors.hpp"
#include "pcsplit/io.hpp"
#include "pcsplit/matrices.hpp"
#include "pcsplit/problems.hpp"
#include "pcsplit/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

namespace pcsplit::cli {

namespace {

// CLI11 consumes argument vectors back to front.
std::vector<std::string> reversed(std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  return args;
}

// Returns an exit code when parsing ends the command (help or error).
std::optional<int> parse(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
                         std::ostream& err) {
  try {
    app.parse(reversed(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\nusage:\n" << app.help();
    return 1;
  }
  return std::nullopt;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Variant parse_variant(const std::string& s) {
  if (s == "pd") {
    return Variant::PrimalDual;
  }
  if (s == "dp") {
    return Variant::DualPrimal;
  }
  throw InvalidArgument("variant must be pd or dp");
}

struct Instance {
  std::string label;
  Benchmark bench;
};

std::uint64_t instance_seed(std::uint64_t seed, int shape, int k) {
  return seed * 1000003ULL + static_cast<std::uint64_t>(shape) * 1000ULL +
         static_cast<std::uint64_t>(k);
}

std::vector<Instance> make_suite(const std::string& suite, std::uint64_t seed, int instances) {
  struct Shape {
    Index p;
    Index n;
    Index m;
  };
  std::vector<Instance> out;
  auto add_qp = [&](const std::vector<Shape>& shapes, bool ineq) {
    for (std::size_t s = 0; s < shapes.size(); ++s) {
      const Shape sh = shapes[s];
      const std::vector<Index> dims(static_cast<std::size_t>(sh.p), sh.n);
      for (int k = 0; k < instances; ++k) {
        const auto sd = instance_seed(seed, static_cast<int>(s), k);
        std::ostringstream label;
        label << "p" << sh.p << "n" << sh.n << "m" << sh.m << "#" << k;
        out.push_back({label.str(), ineq ? gen_ineq_qp(sh.p, dims, sh.m, sd)
                                         : gen_eq_qp(sh.p, dims, sh.m, sd)});
      }
    }
  };
  if (suite == "eq-qp") {
    add_qp({{2, 10, 5}, {3, 6, 5}}, false);
  } else if (suite == "ineq-qp") {
    add_qp({{2, 4, 3}, {3, 3, 2}}, true);
  } else if (suite == "lasso") {
    for (int k = 0; k < instances; ++k) {
      out.push_back({"n20#" + std::to_string(k), gen_lasso(20, 40, 0.5, instance_seed(seed, 0, k))});
    }
  } else if (suite == "svm") {
    for (int k = 0; k < instances; ++k) {
      const auto pts = random_svm_points(4, 2, 0.5, instance_seed(seed, 0, k));
      out.push_back({"pts4#" + std::to_string(k), svm_benchmark(pts, 1.0)});
    }
  } else {
    throw InvalidArgument("unknown suite \"" + suite + "\" (expected eq-qp, ineq-qp, lasso, svm)");
  }
  return out;
}

}  // namespace

int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve a separable convex problem read from JSON", "pcsplit solve"};
  std::string problem_path;
  std::string variant = "pd";
  std::string log_path;
  std::string reference_path;
  std::string init_path;
  SolverConfig cfg;
  app.add_option("--problem", problem_path, "problem JSON file")->required();
  app.add_option("--variant", variant, "pd or dp")->capture_default_str();
  app.add_option("--beta", cfg.beta, "penalty parameter")->capture_default_str();
  app.add_option("--nu", cfg.nu, "correction factor in (0,1)")->capture_default_str();
  app.add_option("--tol", cfg.tol, "stopping tolerance")->capture_default_str();
  app.add_option("--max-iters", cfg.max_iters, "iteration cap")->capture_default_str();
  app.add_option("--inner-tol", cfg.inner_tol, "subproblem accuracy")->capture_default_str();
  app.add_option("--log", log_path, "CSV log output");
  app.add_option("--reference", reference_path, "reference saddle point JSON (enables dist_H)");
  app.add_option("--init", init_path, "initial point JSON");
  if (auto code = parse(app, args, out, err)) {
    return *code;
  }

  try {
    cfg.variant = parse_variant(variant);
    cfg.validate();
    const SeparableProblem problem = problem_from_json(read_json_file(problem_path));
    std::optional<ReferenceSolution> reference;
    if (!reference_path.empty()) {
      reference = reference_from_json(read_json_file(reference_path));
    }
    std::optional<InitialPoint> init;
    if (!init_path.empty()) {
      init = init_from_json(read_json_file(init_path));
    }
    const RunResult result = run(problem, cfg, init, reference);
    if (!log_path.empty()) {
      write_csv_log(log_path, result.log);
    }
    if (!result.log.records.empty()) {
      const IterationRecord& last = result.log.records.back();
      out << "objective=" << num(last.objective) << '\n'
          << "primal_res=" << num(last.primal_res) << '\n'
          << "compl_res=" << num(last.compl_res) << '\n'
          << "pred_gap=" << num(last.pred_gap) << '\n';
      if (last.dist_H) {
        out << "dist_H=" << num(*last.dist_H) << '\n';
      }
    }
    out << "iters=" << result.log.records.size() << '\n'
        << "reason=" << to_string(result.reason.kind) << '\n';
    switch (result.reason.kind) {
      case StopKind::Converged:
        return 0;
      case StopKind::MaxIters:
        return 2;
      case StopKind::SubproblemFailure:
        err << "error: " << result.reason.detail << '\n';
        return 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

int cmd_verify_matrices(const std::vector<std::string>& args, std::ostream& out,
                        std::ostream& err) {
  CLI::App app{"Check H M = Q, H > 0, G > 0 and Q^T + Q > 0 over a parameter sweep",
               "pcsplit verify-matrices"};
  int p_max = 5;
  int m_max = 2;
  std::vector<double> nu_list{0.01, 0.25, 0.5, 0.75, 0.99};
  app.add_option("--p-max", p_max, "largest block count; p runs over {1,2,3,5} up to it")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--m-max", m_max, "m runs over 1..m-max")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--nu-list", nu_list, "comma-separated correction factors")
      ->delimiter(',')
      ->capture_default_str();
  if (auto code = parse(app, args, out, err)) {
    return *code;
  }

  std::vector<Index> ps;
  for (const Index p : {1, 2, 3, 5}) {
    if (p <= p_max) {
      ps.push_back(p);
    }
  }
  if (std::find(ps.begin(), ps.end(), p_max) == ps.end()) {
    ps.push_back(p_max);
  }

  char line[256];
  std::snprintf(line, sizeof line, "%-4s %3s %3s %6s %12s %12s %12s %12s  %s\n", "var", "p",
                "m", "nu", "max|HM-Q|", "min eig H", "min eig G", "min eig Q+QT", "status");
  out << line;
  int rows = 0;
  int passed = 0;
  for (const Variant v : {Variant::PrimalDual, Variant::DualPrimal}) {
    for (const Index p : ps) {
      for (Index m = 1; m <= m_max; ++m) {
        for (const double nu : nu_list) {
          ++rows;
          try {
            const FrameworkReport r = verify_framework(v, p, m, nu);
            const bool ok = r.pass();
            passed += ok ? 1 : 0;
            std::snprintf(line, sizeof line, "%-4s %3td %3td %6.3g %12.3g %12.6g %12.6g %12.6g  %s\n",
                          to_string(v).c_str(), p, m, nu, r.hm_eq_q_maxerr, r.h_min_eig,
                          r.g_min_eig, r.qtq_min_eig, ok ? "PASS" : "FAIL");
            out << line;
          } catch (const std::exception& e) {
            std::snprintf(line, sizeof line, "%-4s %3td %3td %6.3g  FAIL (", to_string(v).c_str(),
                          p, m, nu);
            out << line << e.what() << ")\n";
          }
        }
      }
    }
  }
  out << "rows=" << rows << " pass=" << passed << " fail=" << rows - passed << '\n';
  return rows == passed ? 0 : 1;
}

int cmd_bench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run a seeded benchmark suite with both variants", "pcsplit bench"};
  std::string suite;
  std::uint64_t seed = 1;
  int instances = 3;
  std::string log_dir;
  SolverConfig base;
  app.add_option("--suite", suite, "eq-qp, ineq-qp, lasso or svm")->required();
  app.add_option("--seed", seed, "generator seed")->capture_default_str();
  app.add_option("--instances", instances, "instances per problem shape")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--log-dir", log_dir, "write one CSV log per run into this directory");
  app.add_option("--beta", base.beta, "penalty parameter")->capture_default_str();
  app.add_option("--nu", base.nu, "correction factor")->capture_default_str();
  app.add_option("--tol", base.tol, "stopping tolerance")->capture_default_str();
  app.add_option("--max-iters", base.max_iters, "iteration cap")->capture_default_str();
  if (auto code = parse(app, args, out, err)) {
    return *code;
  }

  try {
    base.validate();
    const std::vector<Instance> set = make_suite(suite, seed, instances);
    if (!log_dir.empty()) {
      std::filesystem::create_directories(log_dir);
    }
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-3s %6s %-18s %11s %11s %11s %10s\n", "instance",
                  "var", "iters", "reason", "primal_res", "compl_res", "obj_err", "violations");
    out << line;
    int runs = 0;
    int converged = 0;
    std::size_t violations = 0;
    double worst_compl = 0.0;
    for (const Instance& inst : set) {
      for (const Variant v : {Variant::PrimalDual, Variant::DualPrimal}) {
        SolverConfig cfg = base;
        cfg.variant = v;
        cfg.record_snapshots = true;
        const RunResult r = run(inst.bench.problem, cfg, std::nullopt, inst.bench.reference);
        const auto bad = contraction_check(r.log, inst.bench.problem, cfg, inst.bench.reference);
        ++runs;
        converged += r.reason.kind == StopKind::Converged ? 1 : 0;
        violations += bad.size();
        const IterationRecord last =
            r.log.records.empty() ? IterationRecord{} : r.log.records.back();
        worst_compl = std::max(worst_compl, last.compl_res);
        const double obj_err = std::abs(last.objective - inst.bench.objective) /
                               (1.0 + std::abs(inst.bench.objective));
        std::snprintf(line, sizeof line, "%-12s %-3s %6zu %-18s %11.3e %11.3e %11.3e %10zu\n",
                      inst.label.c_str(), to_string(v).c_str(), r.log.records.size(),
                      to_string(r.reason.kind).c_str(), last.primal_res, last.compl_res, obj_err,
                      bad.size());
        out << line;
        if (!log_dir.empty()) {
          std::string name = suite + "_" + inst.label + "_" + to_string(v) + ".csv";
          std::replace(name.begin(), name.end(), '#', '_');
          write_csv_log(std::filesystem::path(log_dir) / name, r.log);
        }
      }
    }
    out << "suite=" << suite << '\n'
        << "runs=" << runs << '\n'
        << "converged=" << converged << '\n'
        << "violations=" << violations << '\n'
        << "max_compl_res=" << num(worst_compl) << '\n';
    return converged == runs && violations == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_export(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Write a generated benchmark problem as JSON", "pcsplit export"};
  std::string suite;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string ref_path;
  app.add_option("--suite", suite, "eq-qp, ineq-qp, lasso or svm")->required();
  app.add_option("--seed", seed, "generator seed")->capture_default_str();
  app.add_option("--out", out_path, "problem JSON output")->required();
  app.add_option("--reference-out", ref_path, "reference saddle point JSON output");
  if (auto code = parse(app, args, out, err)) {
    return *code;
  }
  try {
    const std::vector<Instance> set = make_suite(suite, seed, 1);
    const Benchmark& b = set.front().bench;
    write_json_file(out_path, problem_to_json(b.problem));
    if (!ref_path.empty()) {
      write_json_file(ref_path, reference_to_json(b.reference));
    }
    out << "objective=" << num(b.objective) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static const char* usage =
      "usage: pcsplit <command> [options]\n"
      "commands:\n"
      "  solve            solve a problem from JSON\n"
      "  verify-matrices  check the framework matrix conditions\n"
      "  bench            run a seeded benchmark suite\n"
      "  export           write a generated problem as JSON\n"
      "run 'pcsplit <command> --help' for options\n";
  if (args.empty()) {
    err << usage;
    return 1;
  }
  const std::string& cmd = args.front();
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (cmd == "solve") {
    return cmd_solve(rest, out, err);
  }
  if (cmd == "verify-matrices") {
    return cmd_verify_matrices(rest, out, err);
  }
  if (cmd == "bench") {
    return cmd_bench(rest, out, err);
  }
  if (cmd == "export") {
    return cmd_export(rest, out, err);
  }
  if (cmd == "-h" || cmd == "--help") {
    out << usage;
    return 0;
  }
  err << "unknown command \"" << cmd << "\"\n" << usage;
  return 1;
}

}  // namespace pcsplit::cli
