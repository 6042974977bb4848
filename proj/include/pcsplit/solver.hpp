#pragma once

#include "pcsplit/model.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pcsplit {

struct IterationRecord {
  int iter = 0;
  double primal_res = 0.0;  // at the predictor
  double compl_res = 0.0;   // at the predictor
  double pred_gap = 0.0;    // ||xi^k - xi_tilde^k||_2
  std::optional<double> dist_H;  // ||xi^k - xi^*||_H, only with a reference
  double objective = 0.0;        // sum_i theta_i(x_tilde_i)
};

/// xi-coordinates around one correction, kept when SolverConfig::record_snapshots is set.
struct XiSnapshot {
  int iter = 0;
  Vector xi;
  Vector xi_tilde;
  Vector xi_next;
};

struct RunLog {
  std::vector<IterationRecord> records;
  std::vector<XiSnapshot> snapshots;
};

enum class StopKind { Converged, MaxIters, SubproblemFailure };

struct StopReason {
  StopKind kind = StopKind::MaxIters;
  std::string detail;
};

std::string to_string(StopKind kind);

struct InitialPoint {
  std::vector<Vector> x;
  Vector lambda;
};

struct RunResult {
  PredictorState solution;  // last predictor; x_tilde is the reported primal point
  IterateState state;       // last corrected aggregates
  RunLog log;
  StopReason reason;
};

using PredictFn = std::function<PredictorState(const SeparableProblem&, const IterateState&,
                                               double beta, double inner_tol,
                                               std::span<const Vector> warm)>;
using CorrectFn = std::function<IterateState(const IterateState&, const PredictorState&,
                                             double nu, double beta)>;

/// The two halves of one iteration. Swappable so that verification code can
/// run deliberately broken steps through the same driver.
struct IterationSteps {
  PredictFn predict;
  CorrectFn correct;
};

IterationSteps default_steps(Variant variant);

/// Alternate prediction and correction until
/// max(primal_res, compl_res, pred_gap) <= tol or max_iters predictions were made.
///
/// Without `init` the run starts from x^0 = 0, lambda^0 = 0. With `reference`
/// the H-distance to it is logged every iteration. Invalid problems or configs
/// throw InvalidArgument; subproblem failures end the run with a partial log.
RunResult run(const SeparableProblem& problem, const SolverConfig& config,
              const std::optional<InitialPoint>& init = std::nullopt,
              const std::optional<ReferenceSolution>& reference = std::nullopt);

RunResult run_with_steps(const SeparableProblem& problem, const SolverConfig& config,
                         const IterationSteps& steps,
                         const std::optional<InitialPoint>& init = std::nullopt,
                         const std::optional<ReferenceSolution>& reference = std::nullopt);

struct ContractionViolation {
  int iter = 0;
  double lhs = 0.0;    // ||xi^{k+1} - xi^*||_H^2
  double rhs = 0.0;    // ||xi^k - xi^*||_H^2 - ||xi^k - xi_tilde^k||_G^2
  double slack = 0.0;
};

/// Weight of inner_tol in the contraction slack budget.
inline constexpr double kContractionInnerTolFactor = 100.0;

/// Flags every recorded iteration where
///   ||xi^{k+1} - xi^*||_H^2 > ||xi^k - xi^*||_H^2 - ||xi^k - xi_tilde^k||_G^2 + slack,
/// slack = 1e-8 (1 + ||xi^k - xi^*||_H^2) + kContractionInnerTolFactor * inner_tol.
/// Throws MissingReference without a reference, InvalidArgument when the log
/// carries no snapshots for its corrections.
std::vector<ContractionViolation> contraction_check(
    const RunLog& log, const SeparableProblem& problem, const SolverConfig& config,
    const std::optional<ReferenceSolution>& reference);

/// sqrt((xi - xi^*)^T W (xi - xi^*)) with xi = (sqrt(beta) a_i, lambda / sqrt(beta)).
/// W must be symmetric positive definite.
double xi_distance(std::span<const Vector> a, const Vector& lambda,
                   std::span<const Vector> ref_a, const Vector& ref_lambda, const Matrix& W,
                   double beta);

}  // namespace pcsplit
