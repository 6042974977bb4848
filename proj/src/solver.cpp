#include "pcsplit/solver.hpp"

#include "pcsplit/corrector.hpp"
#include "pcsplit/errors.hpp"
#include "pcsplit/matrices.hpp"
#include "pcsplit/predictor.hpp"

#include <cmath>

namespace pcsplit {

namespace {

void require_valid(const SeparableProblem& problem, const SolverConfig& config) {
  config.validate();
  const auto violations = validate_problem(problem);
  if (!violations.empty()) {
    std::string msg = "invalid problem:";
    for (const auto& v : violations) {
      msg += "\n  " + v;
    }
    throw InvalidArgument(msg);
  }
}

void check_reference(const SeparableProblem& problem, const ReferenceSolution& ref) {
  if (ref.a.size() != problem.p() || ref.lambda.size() != problem.m()) {
    throw DimensionMismatch("reference solution does not match the problem dimensions");
  }
  for (const Vector& ai : ref.a) {
    if (ai.size() != problem.m()) {
      throw DimensionMismatch("reference aggregate has wrong length");
    }
  }
}

IterateState initial_state(const SeparableProblem& problem,
                           const std::optional<InitialPoint>& init) {
  IterateState s;
  s.a.reserve(problem.p());
  if (!init) {
    for (std::size_t i = 0; i < problem.p(); ++i) {
      s.a.push_back(Vector::Zero(problem.m()));
    }
    s.lambda = Vector::Zero(problem.m());
    return s;
  }
  if (init->x.size() != problem.p() || init->lambda.size() != problem.m()) {
    throw DimensionMismatch("initial point does not match the problem dimensions");
  }
  for (std::size_t i = 0; i < problem.p(); ++i) {
    if (init->x[i].size() != problem.blocks[i].A.cols()) {
      throw DimensionMismatch("initial x for block " + std::to_string(i + 1) +
                              " has wrong length");
    }
    s.a.push_back(problem.blocks[i].A * init->x[i]);
  }
  s.lambda = init->lambda;
  return s;
}

double h_norm_sq(const Vector& d, const Matrix& W) { return d.dot(W * d); }

}  // namespace

std::string to_string(StopKind kind) {
  switch (kind) {
    case StopKind::Converged:
      return "converged";
    case StopKind::MaxIters:
      return "max_iters";
    case StopKind::SubproblemFailure:
      return "subproblem_failure";
  }
  return "unknown";
}

IterationSteps default_steps(Variant variant) {
  if (variant == Variant::PrimalDual) {
    return {predict_pd, correct_pd};
  }
  return {predict_dp, correct_dp};
}

RunResult run(const SeparableProblem& problem, const SolverConfig& config,
              const std::optional<InitialPoint>& init,
              const std::optional<ReferenceSolution>& reference) {
  return run_with_steps(problem, config, default_steps(config.variant), init, reference);
}

RunResult run_with_steps(const SeparableProblem& problem, const SolverConfig& config,
                         const IterationSteps& steps, const std::optional<InitialPoint>& init,
                         const std::optional<ReferenceSolution>& reference) {
  require_valid(problem, config);
  const auto p = static_cast<Index>(problem.p());
  const Index m = problem.m();

  RunResult result;
  result.state = initial_state(problem, init);
  std::vector<Vector> warm = init ? init->x : std::vector<Vector>{};

  Matrix H;
  Vector xi_star;
  if (reference) {
    check_reference(problem, *reference);
    H = build_H(config.variant, p, m, config.nu);
    xi_star = stack_xi(reference->a, reference->lambda, config.beta);
  }

  bool stopped = false;
  for (int k = 0; k < config.max_iters; ++k) {
    PredictorState pred;
    try {
      pred = steps.predict(problem, result.state, config.beta, config.inner_tol, warm);
    } catch (const Error& e) {
      result.reason = {StopKind::SubproblemFailure, e.what()};
      stopped = true;
      break;
    }

    const Vector xi = stack_xi(result.state.a, result.state.lambda, config.beta);
    const Vector xi_tilde = stack_xi(pred.a_tilde, pred.lambda_tilde, config.beta);
    const Residuals res = feasibility_residual(problem, pred.a_tilde, pred.lambda_tilde);

    IterationRecord rec;
    rec.iter = k;
    rec.primal_res = res.primal;
    rec.compl_res = res.complementarity;
    rec.pred_gap = (xi - xi_tilde).norm();
    if (reference) {
      rec.dist_H = std::sqrt(std::max(0.0, h_norm_sq(xi - xi_star, H)));
    }
    rec.objective = objective_value(problem, pred.x_tilde);
    result.log.records.push_back(rec);

    warm = pred.x_tilde;
    result.solution = std::move(pred);

    if (std::max({rec.primal_res, rec.compl_res, rec.pred_gap}) <= config.tol) {
      result.reason = {StopKind::Converged, {}};
      stopped = true;
      break;
    }

    IterateState next = steps.correct(result.state, result.solution, config.nu, config.beta);
    if (config.record_snapshots) {
      result.log.snapshots.push_back(
          {k, xi, xi_tilde, stack_xi(next.a, next.lambda, config.beta)});
    }
    result.state = std::move(next);
  }
  if (!stopped) {
    result.reason = {StopKind::MaxIters, {}};
  }
  return result;
}

std::vector<ContractionViolation> contraction_check(
    const RunLog& log, const SeparableProblem& problem, const SolverConfig& config,
    const std::optional<ReferenceSolution>& reference) {
  if (!reference) {
    throw MissingReference("contraction_check needs a reference saddle point");
  }
  check_reference(problem, *reference);
  if (log.snapshots.empty() && log.records.size() > 1) {
    throw InvalidArgument("run log has no xi snapshots; enable record_snapshots");
  }
  const auto p = static_cast<Index>(problem.p());
  const Index m = problem.m();
  const Matrix H = build_H(config.variant, p, m, config.nu);
  const Matrix G = build_G(config.variant, p, m, config.nu);
  const Vector xi_star = stack_xi(reference->a, reference->lambda, config.beta);

  std::vector<ContractionViolation> out;
  for (const XiSnapshot& s : log.snapshots) {
    const double before = h_norm_sq(s.xi - xi_star, H);
    const double lhs = h_norm_sq(s.xi_next - xi_star, H);
    const double rhs = before - h_norm_sq(s.xi - s.xi_tilde, G);
    const double slack =
        1e-8 * (1.0 + before) + kContractionInnerTolFactor * config.inner_tol;
    if (lhs > rhs + slack) {
      out.push_back({s.iter, lhs, rhs, slack});
    }
  }
  return out;
}

double xi_distance(std::span<const Vector> a, const Vector& lambda,
                   std::span<const Vector> ref_a, const Vector& ref_lambda, const Matrix& W,
                   double beta) {
  if (!(beta > 0.0)) {
    throw InvalidArgument("beta must be positive");
  }
  const Vector d = stack_xi(a, lambda, beta) - stack_xi(ref_a, ref_lambda, beta);
  if (W.rows() != d.size() || W.cols() != d.size()) {
    throw DimensionMismatch("weight matrix has wrong shape");
  }
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("weight matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(W);
  if (llt.info() != Eigen::Success) {
    throw InvalidArgument("weight matrix is not positive definite");
  }
  return std::sqrt(std::max(0.0, h_norm_sq(d, W)));
}

}  // namespace pcsplit
