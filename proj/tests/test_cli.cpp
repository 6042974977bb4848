#include "support.hpp"

#include "cli.hpp"
#include "pcsplit/io.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

using namespace pcsplit;
using namespace pcsplit::testing;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos && line.find(' ') == std::string::npos) {
      kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  return kv;
}

std::vector<std::string> table_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("pd ", 0) == 0 || line.rfind("dp ", 0) == 0) {
      rows.push_back(line);
    }
  }
  return rows;
}

std::string toy_problem_file() {
  const auto path = scratch_dir("cli") / "toy.json";
  write_json_file(path, problem_to_json(scalar_problem(0.0, 1.0, ConstraintSense::Equality)));
  return path.string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve the scalar toy") {
    const auto log = scratch_dir("cli") / "toy.csv";
    const Outcome o = invoke({"solve", "--problem", toy_problem_file(), "--log", log.string()});
    CHECK(o.code == 0);
    const auto kv = key_values(o.out);
    REQUIRE(kv.count("primal_res") == 1);
    CHECK(std::stod(kv.at("primal_res")) <= 1e-6);
    CHECK(std::stod(kv.at("objective")) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(kv.at("reason") == "converged");
    std::ifstream csv(log);
    std::string header;
    std::getline(csv, header);
    CHECK(header == kCsvHeader);
  }

  TEST_CASE("solve with both variants and a reference") {
    const auto dir = scratch_dir("cli");
    const Benchmark bm = gen_eq_qp(2, std::vector<Index>{3, 3}, 2, 3);
    write_json_file(dir / "qp.json", problem_to_json(bm.problem));
    write_json_file(dir / "qp_ref.json", reference_to_json(bm.reference));
    for (const std::string v : {"pd", "dp"}) {
      const Outcome o = invoke({"solve", "--problem", (dir / "qp.json").string(), "--variant", v,
                                "--reference", (dir / "qp_ref.json").string()});
      CHECK(o.code == 0);
      const auto kv = key_values(o.out);
      CHECK(kv.count("dist_H") == 1);
      CHECK(std::stod(kv.at("objective")) ==
            doctest::Approx(bm.objective).epsilon(1e-5));
    }
  }

  TEST_CASE("iteration cap exits with 2") {
    const Outcome o = invoke({"solve", "--problem", toy_problem_file(), "--max-iters", "1",
                              "--tol", "1e-14"});
    CHECK(o.code == 2);
    CHECK(key_values(o.out).at("reason") == "max_iters");
  }

  TEST_CASE("invalid arguments") {
    const Outcome nu = invoke({"solve", "--problem", toy_problem_file(), "--nu", "1.0"});
    CHECK(nu.code == 1);
    CHECK(nu.err.find("nu must lie in (0,1)") != std::string::npos);

    const Outcome missing = invoke({"solve"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("usage") != std::string::npos);

    const Outcome unknown = invoke({"frobnicate"});
    CHECK(unknown.code == 1);
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
  }

  TEST_CASE("malformed problem file names the key") {
    const auto path = scratch_dir("cli") / "bad.json";
    std::ofstream(path) << R"({"m": 1, "sense": "eq", "b": [1],
      "blocks": [{"n": 1, "A": [[1]], "theta": {"type": "l1"}}]})";
    const Outcome o = invoke({"solve", "--problem", path.string()});
    CHECK(o.code == 1);
    CHECK(o.err.find("blocks[0].theta.tau") != std::string::npos);
  }

  TEST_CASE("verify-matrices default grid") {
    const Outcome o = invoke({"verify-matrices"});
    CHECK(o.code == 0);
    CHECK(table_rows(o.out).size() == 80);
    CHECK(o.out.find("rows=80 pass=80 fail=0") != std::string::npos);
  }

  TEST_CASE("verify-matrices custom grid") {
    const Outcome o = invoke({"verify-matrices", "--nu-list", "0.5", "--p-max", "2"});
    CHECK(o.code == 0);
    const auto rows = table_rows(o.out);
    CHECK(rows.size() == 8);
    bool seen = false;
    for (const std::string& row : rows) {
      std::istringstream in(row);
      std::string var;
      int p = 0;
      int m = 0;
      double nu = 0.0;
      double hm = 0.0;
      double h = 0.0;
      double g = 0.0;
      in >> var >> p >> m >> nu >> hm >> h >> g;
      if (var == "dp" && p == 2 && m == 1) {
        CHECK(g == doctest::Approx(0.5).epsilon(1e-6));
        seen = true;
      }
    }
    CHECK(seen);
    CHECK(invoke({"verify-matrices", "--nu-list", "0.5,x"}).code == 1);
    CHECK(invoke({"verify-matrices", "--p-max", "0"}).code == 1);
  }

  TEST_CASE("bench suites") {
    const Outcome eq = invoke({"bench", "--suite", "eq-qp", "--seed", "7"});
    CHECK(eq.code == 0);
    CHECK(key_values(eq.out).at("violations") == "0");

    const Outcome ineq = invoke({"bench", "--suite", "ineq-qp"});
    CHECK(ineq.code == 0);
    CHECK(std::stod(key_values(ineq.out).at("max_compl_res")) <= 1e-6);

    const Outcome bogus = invoke({"bench", "--suite", "bogus"});
    CHECK(bogus.code == 1);
  }

  TEST_CASE("bench writes one log per run") {
    const auto dir = scratch_dir("cli_logs");
    const Outcome o = invoke({"bench", "--suite", "svm", "--instances", "1", "--log-dir",
                              dir.string()});
    CHECK(o.code == 0);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      files += entry.path().extension() == ".csv" ? 1 : 0;
    }
    CHECK(files == std::stoul(key_values(o.out).at("runs")));
  }

  TEST_CASE("export writes a solvable problem") {
    const auto dir = scratch_dir("cli_export");
    const auto prob = (dir / "lasso.json").string();
    const auto ref = (dir / "lasso_ref.json").string();
    CHECK(invoke({"export", "--suite", "lasso", "--out", prob, "--reference-out", ref}).code == 0);
    const Outcome o = invoke({"solve", "--problem", prob, "--reference", ref});
    CHECK(o.code == 0);
  }
}
