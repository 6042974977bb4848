#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcsplit::cli {

// Each command takes its arguments without the program or subcommand name and
// returns the process exit code.

/// --problem <json> [--variant pd|dp] [--beta] [--nu] [--tol] [--max-iters]
/// [--inner-tol] [--log <csv>] [--reference <json>] [--init <json>]
/// Exit 0 on convergence, 2 on hitting max-iters, 1 on any error.
int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// [--p-max N] [--m-max N] [--nu-list a,b,...]. Exit 0 iff every row passes.
int cmd_verify_matrices(const std::vector<std::string>& args, std::ostream& out,
                        std::ostream& err);

/// --suite eq-qp|ineq-qp|lasso|svm [--seed N] [--instances N] [--log-dir DIR].
/// Exit 0 iff every run converged with zero contraction violations.
int cmd_bench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// --suite NAME [--seed N] --out <json> [--reference-out <json>].
/// Writes the first instance of a bench suite in the problem JSON schema.
int cmd_export(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches on the first argument (solve, verify-matrices, bench, export).
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcsplit::cli
