#include "pcsplit/model.hpp"

#include "pcsplit/detail/overloaded.hpp"
#include "pcsplit/errors.hpp"

#include <cmath>
#include <sstream>

namespace pcsplit {

namespace {

using detail::Overloaded;

void check_aggregate_dims(const SeparableProblem& problem, std::span<const Vector> a) {
  if (a.size() != problem.p()) {
    throw DimensionMismatch("expected " + std::to_string(problem.p()) + " aggregates, got " +
                            std::to_string(a.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != problem.m()) {
      throw DimensionMismatch("aggregate " + std::to_string(i + 1) + " has length " +
                              std::to_string(a[i].size()) + ", expected " +
                              std::to_string(problem.m()));
    }
  }
}

void check_primal_dims(const SeparableProblem& problem, std::span<const Vector> x) {
  if (x.size() != problem.p()) {
    throw DimensionMismatch("expected " + std::to_string(problem.p()) + " primal blocks, got " +
                            std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != problem.blocks[i].A.cols()) {
      throw DimensionMismatch("block " + std::to_string(i + 1) + ": x has length " +
                              std::to_string(x[i].size()) + ", expected " +
                              std::to_string(problem.blocks[i].A.cols()));
    }
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument("beta must be positive and finite");
  }
  if (!(nu > 0.0 && nu < 1.0)) {
    throw InvalidArgument("nu must lie in (0,1)");
  }
  if (max_iters < 0) {
    throw InvalidArgument("max_iters must be nonnegative");
  }
  if (!(tol >= 0.0)) {
    throw InvalidArgument("tol must be nonnegative");
  }
  if (!(inner_tol > 0.0)) {
    throw InvalidArgument("inner_tol must be positive");
  }
}

std::string to_string(Variant v) { return v == Variant::PrimalDual ? "pd" : "dp"; }

std::string to_string(ConstraintSense s) { return s == ConstraintSense::Equality ? "eq" : "ge"; }

std::vector<std::string> validate_problem(const SeparableProblem& problem) {
  std::vector<std::string> out;
  if (problem.blocks.empty()) {
    out.emplace_back("problem has no blocks");
  }
  if (problem.m() < 1) {
    out.emplace_back("b is empty (m must be at least 1)");
  }
  if (!problem.b.allFinite()) {
    out.emplace_back("b has non-finite entries");
  }

  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    const BlockSpec& blk = problem.blocks[k];
    const std::string tag = "block " + std::to_string(k + 1) + ": ";
    const Index n = blk.n;

    if (n < 1) {
      out.push_back(tag + "n must be at least 1");
    }
    if (blk.A.rows() != problem.m()) {
      out.push_back(tag + "A has wrong row count");
    }
    if (blk.A.cols() != n) {
      out.push_back(tag + "A has wrong column count");
    }
    if (!blk.A.allFinite()) {
      out.push_back(tag + "A has non-finite entries");
    }

    std::visit(Overloaded{
                   [&](const Quadratic& q) {
                     if (q.H.rows() != n || q.H.cols() != n) {
                       out.push_back(tag + "Quadratic.H has wrong shape");
                       return;
                     }
                     if (q.c.size() != n) {
                       out.push_back(tag + "Quadratic.c has wrong length");
                     }
                     if ((q.H - q.H.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
                       out.push_back(tag + "Quadratic.H is not symmetric");
                       return;
                     }
                     if (n > 0) {
                       Eigen::SelfAdjointEigenSolver<Matrix> es(q.H, Eigen::EigenvaluesOnly);
                       const double scale = std::max(1.0, q.H.cwiseAbs().maxCoeff());
                       if (es.eigenvalues().minCoeff() < -1e-10 * scale) {
                         out.push_back(tag + "Quadratic.H is not positive semidefinite");
                       }
                     }
                   },
                   [&](const WeightedL1& l1) {
                     if (!(l1.tau >= 0.0) || !std::isfinite(l1.tau)) {
                       out.push_back(tag + "WeightedL1.tau must be nonnegative");
                     }
                   },
                   [](const Zero&) {},
                   [&](const CustomTheta& c) {
                     if (!c.solve || !c.value) {
                       out.push_back(tag + "Custom atom needs both solve and value callbacks");
                     }
                   },
               },
               blk.theta);

    if (const auto* box = std::get_if<BoxSet>(&blk.set)) {
      if (box->lo.size() != n || box->hi.size() != n) {
        out.push_back(tag + "Box bounds have wrong length");
      } else if ((box->lo.array() > box->hi.array()).any()) {
        out.push_back(tag + "Box has lo > hi");
      }
    }

    if (blk.orthonormal_scaled && blk.A.cols() == n && n > 0) {
      const Matrix gram = blk.A.transpose() * blk.A;
      const double c = gram.trace() / static_cast<double>(n);
      const double dev = (gram - c * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
      if (!(c > 0.0) || dev > 1e-10 * std::max(1.0, c)) {
        out.push_back(tag + "A is flagged orthonormal-scaled but A^T A is not a multiple of I");
      }
    }
  }
  return out;
}

double theta_value(const ThetaAtom& theta, const Vector& x) {
  return std::visit(Overloaded{
                        [&](const Quadratic& q) { return 0.5 * x.dot(q.H * x) + q.c.dot(x); },
                        [&](const WeightedL1& l1) { return l1.tau * x.lpNorm<1>(); },
                        [](const Zero&) { return 0.0; },
                        [&](const CustomTheta& c) { return c.value(x); },
                    },
                    theta);
}

double objective_value(const SeparableProblem& problem, std::span<const Vector> x) {
  check_primal_dims(problem, x);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += theta_value(problem.blocks[i].theta, x[i]);
  }
  return total;
}

double lagrangian_value(const SeparableProblem& problem, std::span<const Vector> x,
                        const Vector& lambda) {
  check_primal_dims(problem, x);
  if (lambda.size() != problem.m()) {
    throw DimensionMismatch("lambda has wrong length");
  }
  Vector r = -problem.b;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.noalias() += problem.blocks[i].A * x[i];
  }
  return objective_value(problem, x) - lambda.dot(r);
}

Vector constraint_residual(const SeparableProblem& problem, std::span<const Vector> a) {
  check_aggregate_dims(problem, a);
  Vector r = -problem.b;
  for (const Vector& ai : a) {
    r += ai;
  }
  return r;
}

Residuals feasibility_residual(const SeparableProblem& problem, std::span<const Vector> a,
                               const Vector& lambda) {
  if (lambda.size() != problem.m()) {
    throw DimensionMismatch("lambda has wrong length");
  }
  const Vector r = constraint_residual(problem, a);
  if (problem.sense == ConstraintSense::Equality) {
    return {r.norm(), 0.0};
  }
  const double primal = r.cwiseMin(0.0).norm();
  const double compl_gap = std::abs(lambda.dot(r));
  const double dual_infeas = lambda.cwiseMin(0.0).norm();
  return {primal, std::max(compl_gap, dual_infeas)};
}

}  // namespace pcsplit
