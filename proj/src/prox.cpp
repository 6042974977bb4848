#include "pcsplit/prox.hpp"

#include "pcsplit/detail/overloaded.hpp"
#include "pcsplit/errors.hpp"

#include <cmath>
#include <string>

namespace pcsplit {

using detail::Overloaded;

Vector prox_shrink(const Vector& v, double tau) {
  if (!(tau >= 0.0)) {
    throw InvalidArgument("prox_shrink: tau must be nonnegative");
  }
  return v.array().sign() * (v.array().abs() - tau).max(0.0);
}

Vector project_set(const Vector& v, const SetSpec& set) {
  return std::visit(Overloaded{
                        [&](const FreeSet&) -> Vector { return v; },
                        [&](const NonNegSet&) -> Vector { return v.cwiseMax(0.0); },
                        [&](const BoxSet& box) -> Vector {
                          return v.cwiseMax(box.lo).cwiseMin(box.hi);
                        },
                    },
                    set);
}

bool in_set(const Vector& x, const SetSpec& set) {
  return std::visit(Overloaded{
                        [](const FreeSet&) { return true; },
                        [&](const NonNegSet&) { return (x.array() >= 0.0).all(); },
                        [&](const BoxSet& box) {
                          return (x.array() >= box.lo.array()).all() &&
                                 (x.array() <= box.hi.array()).all();
                        },
                    },
                    set);
}

SubproblemMethod subproblem_method(const BlockSpec& block) {
  if (std::holds_alternative<CustomTheta>(block.theta)) {
    return SubproblemMethod::Custom;
  }
  if (std::holds_alternative<Quadratic>(block.theta) &&
      std::holds_alternative<FreeSet>(block.set)) {
    return SubproblemMethod::QuadraticNormalEquations;
  }
  const bool prox_friendly =
      std::holds_alternative<WeightedL1>(block.theta) || std::holds_alternative<Zero>(block.theta);
  if (prox_friendly && block.orthonormal_scaled) {
    return SubproblemMethod::ClosedFormProx;
  }
  return SubproblemMethod::ProjectedGradient;
}

namespace {

double l1_weight(const ThetaAtom& theta) {
  if (const auto* l1 = std::get_if<WeightedL1>(&theta)) {
    return l1->tau;
  }
  return 0.0;
}

Vector solve_normal_equations(const Quadratic& q, const Matrix& A, double beta, const Vector& v) {
  const Matrix K = q.H + beta * A.transpose() * A;
  const Vector rhs = beta * A.transpose() * v - q.c;
  Eigen::LDLT<Matrix> ldlt(K);
  const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
  const double min_pivot = ldlt.vectorD().cwiseAbs().minCoeff();
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || min_pivot <= 1e-13 * scale) {
    throw SingularSystem("H + beta*A^T*A is singular and the block has no set constraint");
  }
  return ldlt.solve(rhs);
}

Vector solve_closed_form(const BlockSpec& block, double beta, const Vector& v) {
  const Matrix& A = block.A;
  const double c = A.squaredNorm() / static_cast<double>(A.cols());
  const Vector u = A.transpose() * v / c;
  const double tau = l1_weight(block.theta);
  return project_set(prox_shrink(u, tau / (beta * c)), block.set);
}

// Proximal (projected) gradient on f(x) = q(x) + beta/2 ||A x - v||^2 with the
// nonsmooth part tau*||x||_1 + indicator of X handled by shrink-then-project,
// which is the exact prox of the sum for separable sets.
Vector solve_projected_gradient(const BlockSpec& block, double beta, const Vector& v,
                                double inner_tol, const Vector& warm) {
  const Matrix& A = block.A;
  const Index n = A.cols();
  Matrix K = beta * A.transpose() * A;
  Vector g0 = -beta * A.transpose() * v;
  if (const auto* q = std::get_if<Quadratic>(&block.theta)) {
    K += q->H;
    g0 += q->c;
  }
  const double tau = l1_weight(block.theta);

  Eigen::SelfAdjointEigenSolver<Matrix> es(K, Eigen::EigenvaluesOnly);
  const double lipschitz = es.eigenvalues().maxCoeff();
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  Vector x = warm.size() == n ? project_set(warm, block.set) : project_set(Vector::Zero(n), block.set);
  for (int it = 0; it < kMaxInnerIterations; ++it) {
    const Vector grad = K * x + g0;
    Vector next = project_set(prox_shrink(x - step * grad, step * tau), block.set);
    const double gradient_map = (next - x).norm() / step;
    x = std::move(next);
    if (gradient_map <= inner_tol) {
      return x;
    }
  }
  throw NonConvergence("projected gradient did not reach inner_tol within " +
                       std::to_string(kMaxInnerIterations) + " iterations");
}

}  // namespace

SubproblemSolution solve_block_subproblem(const SubproblemRequest& req, double inner_tol,
                                          const Vector& warm) {
  const BlockSpec& block = req.block;
  if (!(req.beta > 0.0)) {
    throw InvalidArgument("beta must be positive");
  }
  if (!(inner_tol > 0.0)) {
    throw InvalidArgument("inner_tol must be positive");
  }
  if (req.v.size() != block.A.rows()) {
    throw DimensionMismatch("subproblem v has length " + std::to_string(req.v.size()) +
                            ", expected " + std::to_string(block.A.rows()));
  }

  Vector x;
  switch (subproblem_method(block)) {
    case SubproblemMethod::QuadraticNormalEquations:
      x = solve_normal_equations(std::get<Quadratic>(block.theta), block.A, req.beta, req.v);
      break;
    case SubproblemMethod::ClosedFormProx:
      x = solve_closed_form(block, req.beta, req.v);
      break;
    case SubproblemMethod::ProjectedGradient:
      x = solve_projected_gradient(block, req.beta, req.v, inner_tol, warm);
      break;
    case SubproblemMethod::Custom:
      x = std::get<CustomTheta>(block.theta).solve(block.A, req.v, req.beta, warm, inner_tol);
      if (x.size() != block.A.cols()) {
        throw DimensionMismatch("custom solver returned a vector of the wrong length");
      }
      break;
  }
  Vector a = block.A * x;
  return {std::move(x), std::move(a)};
}

Vector solve_lambda_subproblem(const Vector& lambda_ref, const Vector& residual, double beta,
                               ConstraintSense sense) {
  if (!(beta > 0.0)) {
    throw InvalidArgument("beta must be positive");
  }
  if (lambda_ref.size() != residual.size()) {
    throw DimensionMismatch("lambda and residual lengths differ");
  }
  Vector out = lambda_ref - beta * residual;
  if (sense == ConstraintSense::GreaterEqual) {
    out = out.cwiseMax(0.0);
  }
  return out;
}

}  // namespace pcsplit
