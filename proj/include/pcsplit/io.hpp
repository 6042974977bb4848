#pragma once

// JSON problem files and CSV iteration logs.
//
// Problem schema:
//
//   {
//     "m": 2, "sense": "eq" | "ge", "b": [..m..],
//     "blocks": [
//       { "n": 3,
//         "A": [[..n..], ..m rows..],
//         "theta": {"type": "quadratic", "H": [[..]], "c": [..]}
//                | {"type": "l1", "tau": 0.5}
//                | {"type": "zero"},
//         "set":   {"type": "free"} | {"type": "nonneg"}
//                | {"type": "box", "lo": [..], "hi": [..]},      (optional, default free)
//         "orthonormal": false }                                   (optional)
//     ]
//   }
//
// "c" defaults to zeros. Reference files hold {"a": [[..m..] per block], "lambda": [..]},
// init files {"x": [[..n_i..] per block], "lambda": [..]}.

#include "pcsplit/model.hpp"
#include "pcsplit/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pcsplit {

/// Throws ParseError naming the offending key (e.g. "blocks[1].theta.tau").
SeparableProblem problem_from_json(const nlohmann::json& j);
/// Throws InvalidArgument for custom atoms, which have no JSON form.
nlohmann::json problem_to_json(const SeparableProblem& problem);

ReferenceSolution reference_from_json(const nlohmann::json& j);
nlohmann::json reference_to_json(const ReferenceSolution& ref);

InitialPoint init_from_json(const nlohmann::json& j);
nlohmann::json init_to_json(const InitialPoint& init);

/// Reads and parses a JSON file; syntax errors and missing files raise ParseError.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

inline constexpr const char* kCsvHeader = "iter,primal_res,compl_res,pred_gap,dist_H,objective";

/// Header plus one row per record; numbers printed with %.17g, dist_H left
/// empty when absent. Equal logs give byte-identical output.
void write_csv_log(std::ostream& out, const RunLog& log);
void write_csv_log(const std::filesystem::path& path, const RunLog& log);

struct CsvLog {
  std::vector<std::string> header;
  std::vector<IterationRecord> records;
};

/// Inverse of write_csv_log. Throws ParseError on a wrong header, a wrong
/// column count or an unparsable number.
CsvLog read_csv_log(std::istream& in);

}  // namespace pcsplit
