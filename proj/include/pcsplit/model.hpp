#pragma once

// Problem and iterate data model shared by every algorithm in the library.
//
// The problem class is
//
//     min  sum_i theta_i(x_i)
//     s.t. sum_i A_i x_i = b   (or >= b),   x_i in X_i,   i = 1..p
//
// with multiplier set Lambda = R^m for equality constraints and R^m_+ for
// ">=" constraints. p = 1 is the plain augmented-Lagrangian setting, p = 2 the
// classic two-block ADMM setting, and p >= 3 the multi-block one; all share
// the same code path.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pcsplit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ConstraintSense { Equality, GreaterEqual };

/// theta(x) = 1/2 x^T H x + c^T x with H symmetric positive semidefinite.
struct Quadratic {
  Matrix H;
  Vector c;
};

/// theta(x) = tau * ||x||_1.
struct WeightedL1 {
  double tau = 0.0;
};

struct Zero {};

/// User-supplied atom. `solve` must return argmin_{x in X} theta(x) + beta/2 ||A x - v||^2
/// to accuracy `inner_tol`, starting from `warm` (which may be empty).
struct CustomTheta {
  std::function<Vector(const Matrix& A, const Vector& v, double beta, const Vector& warm,
                       double inner_tol)>
      solve;
  std::function<double(const Vector& x)> value;
};

using ThetaAtom = std::variant<Quadratic, WeightedL1, Zero, CustomTheta>;

struct FreeSet {};
struct NonNegSet {};
struct BoxSet {
  Vector lo;
  Vector hi;
};

using SetSpec = std::variant<FreeSet, NonNegSet, BoxSet>;

struct BlockSpec {
  ThetaAtom theta = Zero{};
  SetSpec set = FreeSet{};
  Matrix A;  // m x n
  Index n = 0;
  // Declares A^T A = c I for some c > 0. Enables the closed-form prox for
  // WeightedL1 / Zero atoms; never inferred from A at solve time.
  bool orthonormal_scaled = false;
};

struct SeparableProblem {
  std::vector<BlockSpec> blocks;
  Vector b;
  ConstraintSense sense = ConstraintSense::Equality;

  [[nodiscard]] Index m() const { return b.size(); }
  [[nodiscard]] std::size_t p() const { return blocks.size(); }
};

/// Recursion state of the prediction-correction scheme. Only the aggregates
/// a[i] = A_i x_i^k and lambda^k are carried; no primal point is stored.
struct IterateState {
  std::vector<Vector> a;
  Vector lambda;
};

/// Output of one Gauss-Seidel prediction sweep.
struct PredictorState {
  std::vector<Vector> x_tilde;
  std::vector<Vector> a_tilde;  // a_tilde[i] = A_i * x_tilde[i]
  Vector lambda_tilde;
};

/// A known saddle point in aggregate form, used for H-distance diagnostics.
struct ReferenceSolution {
  std::vector<Vector> a;
  Vector lambda;
};

/// Primal-dual: blocks first, multiplier last. Dual-primal: multiplier first.
enum class Variant { PrimalDual, DualPrimal };

struct SolverConfig {
  Variant variant = Variant::PrimalDual;
  double beta = 1.0;
  double nu = 0.99;
  int max_iters = 10000;
  double tol = 1e-6;
  double inner_tol = 1e-10;
  // Keep xi^k, xi_tilde^k, xi^{k+1} per iteration for contraction_check.
  bool record_snapshots = false;

  /// Throws InvalidArgument on the first violated invariant.
  void validate() const;
};

std::string to_string(Variant v);
std::string to_string(ConstraintSense s);

/// Every violated structural invariant, as human-readable lines. Empty iff valid.
/// Blocks are numbered from 1 in the messages.
std::vector<std::string> validate_problem(const SeparableProblem& problem);

/// theta(x) for one atom. Set membership is not part of the value.
double theta_value(const ThetaAtom& theta, const Vector& x);

/// sum_i theta_i(x_i).
double objective_value(const SeparableProblem& problem, std::span<const Vector> x);

/// L(x, lambda) = sum_i theta_i(x_i) - lambda^T (sum_i A_i x_i - b).
/// Indicator sets contribute nothing; keeping x_i in X_i is the prox module's job.
double lagrangian_value(const SeparableProblem& problem, std::span<const Vector> x,
                        const Vector& lambda);

/// r = sum_i a[i] - b.
Vector constraint_residual(const SeparableProblem& problem, std::span<const Vector> a);

struct Residuals {
  double primal = 0.0;
  double complementarity = 0.0;
};

/// Equality: (||r||, 0). GreaterEqual: (||min(r,0)||, max(|lambda^T r|, ||min(lambda,0)||)).
Residuals feasibility_residual(const SeparableProblem& problem, std::span<const Vector> a,
                               const Vector& lambda);

}  // namespace pcsplit
