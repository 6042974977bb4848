#pragma once

// Block subproblem solvers.
//
// Every primal minimization of a prediction sweep reduces, after completing
// the square, to
//
//     x_tilde = argmin_{x in X} theta(x) + beta/2 ||A x - v||^2
//
// and every multiplier update to a (possibly projected) explicit step.

#include "pcsplit/model.hpp"

namespace pcsplit {

/// Componentwise soft-threshold sign(v_j) * max(|v_j| - tau, 0). Requires tau >= 0.
Vector prox_shrink(const Vector& v, double tau);

/// Euclidean projection onto a Free / NonNeg / Box set.
Vector project_set(const Vector& v, const SetSpec& set);

/// True when x lies in the set (exactly, no tolerance).
bool in_set(const Vector& x, const SetSpec& set);

struct SubproblemRequest {
  const BlockSpec& block;  // theta, X and A
  double beta;
  Vector v;
};

struct SubproblemSolution {
  Vector x;  // minimizer, always inside X for NonNeg / Box sets
  Vector a;  // A * x
};

/// How a request is dispatched; exposed for diagnostics and tests.
enum class SubproblemMethod {
  QuadraticNormalEquations,  // Quadratic atom over a free set: direct SPD solve
  ClosedFormProx,            // WeightedL1 / Zero with an orthonormal-scaled A
  ProjectedGradient,         // anything else with a built-in atom
  Custom,                    // user callback
};

SubproblemMethod subproblem_method(const BlockSpec& block);

/// Solve one block subproblem to accuracy inner_tol (> 0). `warm` seeds the
/// iterative path and may be empty.
///
/// Throws SingularSystem when a Quadratic/Free block has singular
/// H + beta A^T A, and NonConvergence when projected gradient runs out of
/// iterations.
SubproblemSolution solve_block_subproblem(const SubproblemRequest& req, double inner_tol,
                                          const Vector& warm = Vector());

/// lambda_ref - beta * residual, projected onto R^m_+ for ">=" constraints.
Vector solve_lambda_subproblem(const Vector& lambda_ref, const Vector& residual, double beta,
                               ConstraintSense sense);

/// Iteration cap of the projected-gradient inner loop.
inline constexpr int kMaxInnerIterations = 200000;

}  // namespace pcsplit
