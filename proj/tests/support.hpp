#pragma once

// Test-only generators and dense reference computations. Nothing here calls
// the predictor or corrector.

#include "pcsplit/model.hpp"
#include "pcsplit/problems.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pcsplit::testing {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (const double x : values) {
    v(i++) = x;
  }
  return v;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Index>(rows.size());
  const auto c = static_cast<Index>(rows.begin()->size());
  Matrix out(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const double x : row) {
      out(i, j++) = x;
    }
    ++i;
  }
  return out;
}

inline double max_abs(const Matrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

/// p = 1 scalar problem min 1/2 (x - shift)^2 s.t. x = rhs (or x >= rhs).
inline SeparableProblem scalar_problem(double shift, double rhs, ConstraintSense sense) {
  SeparableProblem prob;
  BlockSpec blk;
  blk.theta = Quadratic{Matrix::Identity(1, 1), Vector::Constant(1, -shift)};
  blk.A = Matrix::Identity(1, 1);
  blk.n = 1;
  prob.blocks.push_back(blk);
  prob.b = Vector::Constant(1, rhs);
  prob.sense = sense;
  return prob;
}

/// Blocks with random Quadratic/Free atoms (H SPD), as in gen_eq_qp but with a
/// test-side choice of sense and b.
inline SeparableProblem random_quadratic_problem(Rng& rng, Index p, Index n, Index m,
                                                 ConstraintSense sense) {
  SeparableProblem prob;
  for (Index i = 0; i < p; ++i) {
    BlockSpec blk;
    blk.theta = Quadratic{rng.spd_matrix(n, 1.0, 10.0), rng.normal_vector(n)};
    blk.A = rng.normal_matrix(m, n);
    blk.n = n;
    prob.blocks.push_back(blk);
  }
  prob.b = rng.normal_vector(m);
  prob.sense = sense;
  return prob;
}

/// Mixed atoms and sets; block i cycles through Quadratic/Free, L1/Box,
/// Zero/NonNeg and Quadratic/Box.
inline SeparableProblem random_mixed_problem(Rng& rng, Index p, Index m) {
  SeparableProblem prob;
  for (Index i = 0; i < p; ++i) {
    const Index n = 1 + static_cast<Index>(rng.uniform() * 4.0);
    BlockSpec blk;
    blk.A = rng.normal_matrix(m, n);
    blk.n = n;
    switch (i % 4) {
      case 0:
        blk.theta = Quadratic{rng.spd_matrix(n, 1.0, 10.0), rng.normal_vector(n)};
        break;
      case 1:
        blk.theta = WeightedL1{rng.uniform(0.1, 1.0)};
        blk.set = BoxSet{Vector::Constant(n, -2.0), Vector::Constant(n, 2.0)};
        break;
      case 2:
        blk.theta = Zero{};
        blk.set = NonNegSet{};
        break;
      default:
        blk.theta = Quadratic{rng.spd_matrix(n, 1.0, 10.0), rng.normal_vector(n)};
        blk.set = BoxSet{Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)};
        break;
    }
    prob.blocks.push_back(blk);
  }
  prob.b = rng.normal_vector(m);
  return prob;
}

inline IterateState random_state(Rng& rng, Index p, Index m) {
  IterateState s;
  for (Index i = 0; i < p; ++i) {
    s.a.push_back(rng.normal_vector(m));
  }
  s.lambda = rng.normal_vector(m);
  return s;
}

inline PredictorState random_predictor(Rng& rng, Index p, Index m) {
  PredictorState s;
  for (Index i = 0; i < p; ++i) {
    s.a_tilde.push_back(rng.normal_vector(m));
    s.x_tilde.push_back(Vector());
  }
  s.lambda_tilde = rng.normal_vector(m);
  return s;
}

inline IterateState state_from_x(const SeparableProblem& prob, const std::vector<Vector>& x,
                                 const Vector& lambda) {
  IterateState s;
  for (std::size_t i = 0; i < prob.blocks.size(); ++i) {
    s.a.push_back(prob.blocks[i].A * x[i]);
  }
  s.lambda = lambda;
  return s;
}

/// Gradient of a Quadratic atom; zero for the other built-in atoms' smooth part.
inline Vector smooth_gradient(const ThetaAtom& theta, const Vector& x) {
  if (const auto* q = std::get_if<Quadratic>(&theta)) {
    return q->H * x + q->c;
  }
  return Vector::Zero(x.size());
}

inline double l1_part(const ThetaAtom& theta, const Vector& x) {
  if (const auto* l1 = std::get_if<WeightedL1>(&theta)) {
    return l1->tau * x.lpNorm<1>();
  }
  return 0.0;
}

/// Scratch directory for files written by tests.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pcsplit_tests_" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pcsplit::testing
