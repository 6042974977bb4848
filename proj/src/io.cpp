#include "pcsplit/io.hpp"

#include "pcsplit/detail/overloaded.hpp"
#include "pcsplit/errors.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pcsplit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ParseError("key \"" + key + "\": " + what);
}

const json& field(const json& obj, const std::string& name, const std::string& path) {
  const std::string key = path.empty() ? name : path + "." + name;
  if (!obj.is_object()) {
    fail(path.empty() ? "<root>" : path, "expected an object");
  }
  const auto it = obj.find(name);
  if (it == obj.end()) {
    fail(key, "missing");
  }
  return *it;
}

std::string join(const std::string& path, const std::string& name) {
  return path.empty() ? name : path + "." + name;
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) {
    fail(key, "expected a number");
  }
  return j.get<double>();
}

Index count(const json& j, const std::string& key) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    fail(key, "expected an integer");
  }
  const auto v = j.get<long long>();
  if (v < 0) {
    fail(key, "must be nonnegative");
  }
  return static_cast<Index>(v);
}

Vector vector_of(const json& j, const std::string& key, Index expected = -1) {
  if (!j.is_array()) {
    fail(key, "expected an array of numbers");
  }
  const auto n = static_cast<Index>(j.size());
  if (expected >= 0 && n != expected) {
    fail(key, "expected " + std::to_string(expected) + " entries, got " + std::to_string(n));
  }
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = number(j[static_cast<std::size_t>(i)], key + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix matrix_of(const json& j, const std::string& key, Index rows, Index cols) {
  if (!j.is_array()) {
    fail(key, "expected an array of rows");
  }
  if (static_cast<Index>(j.size()) != rows) {
    fail(key, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  }
  Matrix out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    out.row(r) = vector_of(j[static_cast<std::size_t>(r)],
                           key + "[" + std::to_string(r) + "]", cols)
                     .transpose();
  }
  return out;
}

std::string text(const json& j, const std::string& key) {
  if (!j.is_string()) {
    fail(key, "expected a string");
  }
  return j.get<std::string>();
}

std::vector<Vector> vector_list(const json& j, const std::string& key) {
  if (!j.is_array()) {
    fail(key, "expected an array of arrays");
  }
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(vector_of(j[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ThetaAtom parse_theta(const json& j, const std::string& path, Index n) {
  const std::string type = text(field(j, "type", path), join(path, "type"));
  if (type == "quadratic") {
    Quadratic q;
    q.H = matrix_of(field(j, "H", path), join(path, "H"), n, n);
    q.c = j.contains("c") ? vector_of(j["c"], join(path, "c"), n) : Vector::Zero(n);
    return q;
  }
  if (type == "l1") {
    const double tau = number(field(j, "tau", path), join(path, "tau"));
    if (tau < 0.0) {
      fail(join(path, "tau"), "must be nonnegative");
    }
    return WeightedL1{tau};
  }
  if (type == "zero") {
    return Zero{};
  }
  fail(join(path, "type"), "unknown theta type \"" + type + "\"");
}

SetSpec parse_set(const json& j, const std::string& path, Index n) {
  const std::string type = text(field(j, "type", path), join(path, "type"));
  if (type == "free") {
    return FreeSet{};
  }
  if (type == "nonneg") {
    return NonNegSet{};
  }
  if (type == "box") {
    BoxSet box;
    box.lo = vector_of(field(j, "lo", path), join(path, "lo"), n);
    box.hi = vector_of(field(j, "hi", path), join(path, "hi"), n);
    return box;
  }
  fail(join(path, "type"), "unknown set type \"" + type + "\"");
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

json to_json(const Matrix& M) {
  json out = json::array();
  for (Index r = 0; r < M.rows(); ++r) {
    out.push_back(to_json(Vector(M.row(r).transpose())));
  }
  return out;
}

json to_json(const std::vector<Vector>& list) {
  json out = json::array();
  for (const Vector& v : list) {
    out.push_back(to_json(v));
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

double parse_double(const std::string& cell, std::size_t line_no) {
  // strtod handles inf/nan spellings that printf may emit.
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw ParseError("CSV line " + std::to_string(line_no) + ": bad number \"" + cell + "\"");
  }
  return v;
}

}  // namespace

SeparableProblem problem_from_json(const json& j) {
  SeparableProblem prob;
  const Index m = count(field(j, "m", ""), "m");
  if (m < 1) {
    fail("m", "must be at least 1");
  }
  const std::string sense = text(field(j, "sense", ""), "sense");
  if (sense == "eq") {
    prob.sense = ConstraintSense::Equality;
  } else if (sense == "ge") {
    prob.sense = ConstraintSense::GreaterEqual;
  } else {
    fail("sense", "expected \"eq\" or \"ge\", got \"" + sense + "\"");
  }
  prob.b = vector_of(field(j, "b", ""), "b", m);

  const json& blocks = field(j, "blocks", "");
  if (!blocks.is_array() || blocks.empty()) {
    fail("blocks", "expected a nonempty array");
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string path = "blocks[" + std::to_string(i) + "]";
    const json& bj = blocks[i];
    BlockSpec blk;
    blk.n = count(field(bj, "n", path), join(path, "n"));
    if (blk.n < 1) {
      fail(join(path, "n"), "must be at least 1");
    }
    blk.A = matrix_of(field(bj, "A", path), join(path, "A"), m, blk.n);
    blk.theta = parse_theta(field(bj, "theta", path), join(path, "theta"), blk.n);
    if (bj.contains("set")) {
      blk.set = parse_set(bj["set"], join(path, "set"), blk.n);
    }
    if (bj.contains("orthonormal")) {
      if (!bj["orthonormal"].is_boolean()) {
        fail(join(path, "orthonormal"), "expected true or false");
      }
      blk.orthonormal_scaled = bj["orthonormal"].get<bool>();
    }
    prob.blocks.push_back(std::move(blk));
  }
  return prob;
}

json problem_to_json(const SeparableProblem& problem) {
  json out;
  out["m"] = problem.m();
  out["sense"] = to_string(problem.sense);
  out["b"] = to_json(problem.b);
  json blocks = json::array();
  for (std::size_t i = 0; i < problem.blocks.size(); ++i) {
    const BlockSpec& blk = problem.blocks[i];
    json bj;
    bj["n"] = blk.n;
    bj["A"] = to_json(blk.A);
    bj["theta"] = std::visit(
        detail::Overloaded{
            [](const Quadratic& q) -> json {
              return {{"type", "quadratic"}, {"H", to_json(q.H)}, {"c", to_json(q.c)}};
            },
            [](const WeightedL1& l1) -> json { return {{"type", "l1"}, {"tau", l1.tau}}; },
            [](const Zero&) -> json { return {{"type", "zero"}}; },
            [i](const CustomTheta&) -> json {
              throw InvalidArgument("block " + std::to_string(i + 1) +
                                    ": custom atoms cannot be serialized");
            }},
        blk.theta);
    bj["set"] = std::visit(
        detail::Overloaded{
            [](const FreeSet&) -> json { return {{"type", "free"}}; },
            [](const NonNegSet&) -> json { return {{"type", "nonneg"}}; },
            [](const BoxSet& box) -> json {
              return {{"type", "box"}, {"lo", to_json(box.lo)}, {"hi", to_json(box.hi)}};
            }},
        blk.set);
    if (blk.orthonormal_scaled) {
      bj["orthonormal"] = true;
    }
    blocks.push_back(std::move(bj));
  }
  out["blocks"] = std::move(blocks);
  return out;
}

ReferenceSolution reference_from_json(const json& j) {
  ReferenceSolution ref;
  ref.a = vector_list(field(j, "a", ""), "a");
  ref.lambda = vector_of(field(j, "lambda", ""), "lambda");
  return ref;
}

json reference_to_json(const ReferenceSolution& ref) {
  return {{"a", to_json(ref.a)}, {"lambda", to_json(ref.lambda)}};
}

InitialPoint init_from_json(const json& j) {
  InitialPoint init;
  init.x = vector_list(field(j, "x", ""), "x");
  init.lambda = vector_of(field(j, "lambda", ""), "lambda");
  return init;
}

json init_to_json(const InitialPoint& init) {
  return {{"x", to_json(init.x)}, {"lambda", to_json(init.lambda)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

void write_csv_log(std::ostream& out, const RunLog& log) {
  out << kCsvHeader << '\n';
  for (const IterationRecord& r : log.records) {
    out << r.iter << ',' << format_number(r.primal_res) << ',' << format_number(r.compl_res)
        << ',' << format_number(r.pred_gap) << ','
        << (r.dist_H ? format_number(*r.dist_H) : std::string()) << ','
        << format_number(r.objective) << '\n';
  }
}

void write_csv_log(const std::filesystem::path& path, const RunLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgument("cannot write " + path.string());
  }
  write_csv_log(out, log);
}

CsvLog read_csv_log(std::istream& in) {
  CsvLog out;
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("CSV log is empty");
  }
  if (line != kCsvHeader) {
    throw ParseError("CSV header mismatch: \"" + line + "\"");
  }
  out.header = split(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> cells = split(line);
    if (cells.size() != out.header.size()) {
      throw ParseError("CSV line " + std::to_string(line_no) + ": expected " +
                       std::to_string(out.header.size()) + " columns, got " +
                       std::to_string(cells.size()));
    }
    IterationRecord r;
    int iter = 0;
    const auto [ptr, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), iter);
    if (ec != std::errc() || ptr != cells[0].data() + cells[0].size()) {
      throw ParseError("CSV line " + std::to_string(line_no) + ": bad iter \"" + cells[0] + "\"");
    }
    r.iter = iter;
    r.primal_res = parse_double(cells[1], line_no);
    r.compl_res = parse_double(cells[2], line_no);
    r.pred_gap = parse_double(cells[3], line_no);
    if (!cells[4].empty()) {
      r.dist_H = parse_double(cells[4], line_no);
    }
    r.objective = parse_double(cells[5], line_no);
    out.records.push_back(r);
  }
  return out;
}

}  // namespace pcsplit
