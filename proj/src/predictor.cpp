#include "pcsplit/predictor.hpp"

#include "pcsplit/errors.hpp"
#include "pcsplit/prox.hpp"

#include <string>

namespace pcsplit {

namespace {

void check_state(const SeparableProblem& problem, const IterateState& state, double beta) {
  if (!(beta > 0.0)) {
    throw InvalidArgument("beta must be positive");
  }
  if (state.a.size() != problem.p()) {
    throw DimensionMismatch("state has " + std::to_string(state.a.size()) +
                            " aggregates, problem has " + std::to_string(problem.p()) +
                            " blocks");
  }
  for (const Vector& ai : state.a) {
    if (ai.size() != problem.m()) {
      throw DimensionMismatch("state aggregate has wrong length");
    }
  }
  if (state.lambda.size() != problem.m()) {
    throw DimensionMismatch("state lambda has wrong length");
  }
}

// Rethrows prox errors as the same type with the 1-based block number attached.
template <class Fn>
SubproblemSolution annotated(std::size_t block, Fn&& fn) {
  const std::string tag = "block " + std::to_string(block + 1) + ": ";
  try {
    return fn();
  } catch (const SingularSystem& e) {
    throw SingularSystem(tag + e.what());
  } catch (const NonConvergence& e) {
    throw NonConvergence(tag + e.what());
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(tag + e.what());
  }
}

// Gauss-Seidel sweep over the blocks against a fixed multiplier `lam`.
// v_i = a[i] - sum_{j<i} (a_tilde[j] - a[j]) + lam / beta.
void sweep_blocks(const SeparableProblem& problem, const IterateState& state, const Vector& lam,
                  double beta, double inner_tol, std::span<const Vector> warm,
                  PredictorState& out) {
  const std::size_t p = problem.p();
  out.x_tilde.resize(p);
  out.a_tilde.resize(p);
  Vector shift = Vector::Zero(problem.m());  // sum_{j<i} (a_tilde[j] - a[j])
  const Vector lam_scaled = lam / beta;
  for (std::size_t i = 0; i < p; ++i) {
    SubproblemRequest req{problem.blocks[i], beta, state.a[i] - shift + lam_scaled};
    const Vector& start = i < warm.size() ? warm[i] : Vector();
    SubproblemSolution sol =
        annotated(i, [&] { return solve_block_subproblem(req, inner_tol, start); });
    shift += sol.a - state.a[i];
    out.x_tilde[i] = std::move(sol.x);
    out.a_tilde[i] = std::move(sol.a);
  }
}

}  // namespace

PredictorState predict_pd(const SeparableProblem& problem, const IterateState& state,
                          double beta, double inner_tol, std::span<const Vector> warm) {
  check_state(problem, state, beta);
  PredictorState out;
  sweep_blocks(problem, state, state.lambda, beta, inner_tol, warm, out);
  out.lambda_tilde = solve_lambda_subproblem(
      state.lambda, constraint_residual(problem, out.a_tilde), beta, problem.sense);
  return out;
}

PredictorState predict_dp(const SeparableProblem& problem, const IterateState& state,
                          double beta, double inner_tol, std::span<const Vector> warm) {
  check_state(problem, state, beta);
  PredictorState out;
  out.lambda_tilde = solve_lambda_subproblem(
      state.lambda, constraint_residual(problem, state.a), beta, problem.sense);
  sweep_blocks(problem, state, out.lambda_tilde, beta, inner_tol, warm, out);
  return out;
}

PredictorState predict(Variant variant, const SeparableProblem& problem,
                       const IterateState& state, double beta, double inner_tol,
                       std::span<const Vector> warm) {
  return variant == Variant::PrimalDual ? predict_pd(problem, state, beta, inner_tol, warm)
                                        : predict_dp(problem, state, beta, inner_tol, warm);
}

}  // namespace pcsplit
