#pragma once

#include "pcsplit/model.hpp"

#include <span>

namespace pcsplit {

/// One Gauss-Seidel prediction sweep, primal blocks 1..p first and the
/// multiplier last. Every block sees the current lambda^k; block i also sees
/// the fresh predictors of blocks 1..i-1 through their aggregates.
///
/// `warm` optionally holds one starting point per block for iterative inner
/// solvers. Prox errors are rethrown with the block number prepended.
PredictorState predict_pd(const SeparableProblem& problem, const IterateState& state,
                          double beta, double inner_tol, std::span<const Vector> warm = {});

/// Dual-primal sweep: the multiplier predictor is computed first from
/// sum_i a[i] - b, then blocks 1..p are solved against it.
PredictorState predict_dp(const SeparableProblem& problem, const IterateState& state,
                          double beta, double inner_tol, std::span<const Vector> warm = {});

PredictorState predict(Variant variant, const SeparableProblem& problem,
                       const IterateState& state, double beta, double inner_tol,
                       std::span<const Vector> warm = {});

}  // namespace pcsplit
