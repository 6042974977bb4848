#include "pcsplit/corrector.hpp"

#include "pcsplit/errors.hpp"

namespace pcsplit {

namespace {

void check_inputs(const IterateState& state, const PredictorState& pred, double nu) {
  if (!(nu > 0.0 && nu < 1.0)) {
    throw InvalidArgument("nu must lie in (0,1)");
  }
  if (state.a.empty() || pred.a_tilde.size() != state.a.size()) {
    throw DimensionMismatch("state and predictor have different block counts");
  }
  const Index m = state.lambda.size();
  if (pred.lambda_tilde.size() != m) {
    throw DimensionMismatch("state and predictor multipliers differ in length");
  }
  for (std::size_t i = 0; i < state.a.size(); ++i) {
    if (state.a[i].size() != m || pred.a_tilde[i].size() != m) {
      throw DimensionMismatch("aggregate length differs from multiplier length");
    }
  }
}

// Shared block rows: upper-bidiagonal nu*L^{-T} applied to d.
IterateState correct_aggregates(const IterateState& state, const PredictorState& pred,
                                double nu) {
  const std::size_t p = state.a.size();
  IterateState next;
  next.a.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    next.a[i] = state.a[i] - nu * (state.a[i] - pred.a_tilde[i]);
    if (i + 1 < p) {
      next.a[i] += nu * (state.a[i + 1] - pred.a_tilde[i + 1]);
    }
  }
  return next;
}

}  // namespace

IterateState correct_pd(const IterateState& state, const PredictorState& pred, double nu,
                        double beta) {
  check_inputs(state, pred, nu);
  IterateState next = correct_aggregates(state, pred, nu);
  next.lambda = pred.lambda_tilde + nu * beta * (state.a[0] - pred.a_tilde[0]);
  return next;
}

IterateState correct_dp(const IterateState& state, const PredictorState& pred, double nu,
                        double beta) {
  check_inputs(state, pred, nu);
  IterateState next = correct_aggregates(state, pred, nu);
  next.lambda = pred.lambda_tilde;
  for (std::size_t i = 0; i < state.a.size(); ++i) {
    next.lambda += beta * (state.a[i] - pred.a_tilde[i]);
  }
  return next;
}

IterateState correct(Variant variant, const IterateState& state, const PredictorState& pred,
                     double nu, double beta) {
  return variant == Variant::PrimalDual ? correct_pd(state, pred, nu, beta)
                                        : correct_dp(state, pred, nu, beta);
}

}  // namespace pcsplit
