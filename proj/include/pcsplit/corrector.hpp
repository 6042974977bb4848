#pragma once

#include "pcsplit/model.hpp"

namespace pcsplit {

// Corrections act on aggregates only. With d_i = a[i] - a_tilde[i] and
// d_lambda = lambda - lambda_tilde:
//
//   a'[i] = a[i] - nu*d_i + nu*d_{i+1}   (i < p)
//   a'[p] = a[p] - nu*d_p
//
// The multiplier row differs between the two variants.

/// lambda' = lambda + nu*beta*d_1 - d_lambda.
IterateState correct_pd(const IterateState& state, const PredictorState& pred, double nu,
                        double beta);

/// lambda' = lambda + beta*(d_1 + ... + d_p) - d_lambda.
IterateState correct_dp(const IterateState& state, const PredictorState& pred, double nu,
                        double beta);

IterateState correct(Variant variant, const IterateState& state, const PredictorState& pred,
                     double nu, double beta);

}  // namespace pcsplit
