#pragma once

// Seeded benchmark instances with reference saddle points.
//
// Every reference comes from a solver that shares no code with the
// prediction / correction path: a dense KKT solve, brute-force active-set
// enumeration, or proximal gradient on the composite LASSO objective.
//
// Random data distribution: entries of A_i, c_i, b and LASSO data are standard
// normal (Box-Muller over mt19937_64, so streams are identical on every
// platform); H_i = U diag(s) U^T with U orthogonal from a QR of a Gaussian
// matrix and s uniform on [1, 10].

#include "pcsplit/model.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace pcsplit {

/// Portable normal / uniform stream on top of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  Vector normal_vector(Index n);
  Matrix normal_matrix(Index rows, Index cols);
  /// Symmetric positive definite with spectrum drawn uniformly from [lo, hi].
  Matrix spd_matrix(Index n, double lo, double hi);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Benchmark {
  SeparableProblem problem;
  std::vector<Vector> x_star;
  ReferenceSolution reference;  // a*_i = A_i x*_i and lambda*
  double objective = 0.0;       // sum_i theta_i(x*_i)
};

/// Equality-constrained separable QP with Quadratic/Free blocks. Requires
/// sum(block_dims) >= m. Reference from the full KKT system.
Benchmark gen_eq_qp(Index p, std::span<const Index> block_dims, Index m, std::uint64_t seed);

/// ">=" constrained separable QP, m <= 4. b is placed so that roughly half of
/// the constraints bind at the optimum. Reference from active-set enumeration.
Benchmark gen_ineq_qp(Index p, std::span<const Index> block_dims, Index m, std::uint64_t seed);

/// min 1/2 ||D x - d||^2 + tau ||y||_1  s.t. x - y = 0, as a two-block problem
/// (block 1 Quadratic with A = I, block 2 WeightedL1 with A = -I). The
/// constant 1/2 ||d||^2 is dropped from theta_1.
Benchmark gen_lasso(Index n, Index samples, double tau, std::uint64_t seed);

struct LabeledPoint {
  Vector features;
  double label = 1.0;  // +1 or -1
};

/// Soft-margin linear SVM without bias:
///   min 1/2 ||w||^2 + C sum_j s_j  s.t. y_j x_j^T w + s_j >= 1, s >= 0
/// as a two-block ">=" problem (w Quadratic/Free, s linear-cost Quadratic/NonNeg).
SeparableProblem gen_toy_svm(std::span<const LabeledPoint> points, double slack_cost = 1.0);

/// gen_toy_svm plus an active-set reference. At most 4 points.
Benchmark svm_benchmark(std::span<const LabeledPoint> points, double slack_cost = 1.0);

/// `count` points in `dim` dimensions with alternating labels, separable
/// through the origin with margin at least `margin`.
std::vector<LabeledPoint> random_svm_points(Index count, Index dim, double margin,
                                            std::uint64_t seed);

// ---- oracles -------------------------------------------------------------

struct KktSolution {
  Vector x;
  Vector lambda;
};

/// min 1/2 x^T H x + c^T x  s.t. A x = b, via the dense system
/// [H, -A^T; A, 0] (x, lambda) = (-c, b). Throws SingularSystem.
KktSolution solve_eq_qp_kkt(const Matrix& H, const Vector& c, const Matrix& A, const Vector& b);

/// min 1/2 x^T H x + c^T x  s.t. G x >= h by enumerating every active set
/// (at most 16 rows). Multipliers are >= 0 exactly. Throws InvalidArgument when
/// no active set yields a KKT point.
KktSolution solve_qp_by_active_sets(const Matrix& H, const Vector& c, const Matrix& G,
                                    const Vector& h);

/// Proximal gradient on 1/2 ||D x - d||^2 + tau ||x||_1 until the gradient
/// map is <= tol, followed by an exact solve on the detected support when that
/// keeps the optimality conditions.
Vector solve_lasso_prox_gradient(const Matrix& D, const Vector& d, double tau, double tol);

}  // namespace pcsplit
