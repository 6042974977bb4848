#include "pcsplit/matrices.hpp"

#include "pcsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcsplit {

namespace {

void check_counts(Index p, Index m) {
  if (p < 1 || m < 1) {
    throw InvalidArgument("block count p and constraint dimension m must be at least 1");
  }
}

void check_nu(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) {
    throw InvalidArgument("nu must lie in (0,1)");
  }
}

// Sets block (bi, bj) of an m-blocked matrix to value * I_m.
void set_block(Matrix& out, Index bi, Index bj, Index m, double value) {
  out.block(bi * m, bj * m, m, m) = value * Matrix::Identity(m, m);
}

double min_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

BlockTemplates build_LIE(Index p, Index m) {
  check_counts(p, m);
  BlockTemplates t{Matrix::Zero(p * m, p * m), Matrix::Identity(p * m, p * m),
                   Matrix::Zero(m, p * m)};
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j <= i; ++j) {
      set_block(t.L, i, j, m, 1.0);
    }
    set_block(t.E, 0, i, m, 1.0);
  }
  return t;
}

Matrix build_L_inverse(Index p, Index m) {
  check_counts(p, m);
  Matrix out = Matrix::Zero(p * m, p * m);
  for (Index i = 0; i < p; ++i) {
    set_block(out, i, i, m, 1.0);
    if (i > 0) {
      set_block(out, i, i - 1, m, -1.0);
    }
  }
  return out;
}

Matrix build_P(const SeparableProblem& problem, double beta) {
  if (!(beta > 0.0)) {
    throw InvalidArgument("beta must be positive");
  }
  const Index m = problem.m();
  Index rows = m;
  Index cols = m;
  for (const BlockSpec& blk : problem.blocks) {
    rows += blk.A.rows();
    cols += blk.A.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  const double sb = std::sqrt(beta);
  Index r = 0;
  Index c = 0;
  for (const BlockSpec& blk : problem.blocks) {
    out.block(r, c, blk.A.rows(), blk.A.cols()) = sb * blk.A;
    r += blk.A.rows();
    c += blk.A.cols();
  }
  out.block(r, c, m, m) = Matrix::Identity(m, m) / sb;
  return out;
}

Matrix build_Q(Variant variant, Index p, Index m) {
  const BlockTemplates t = build_LIE(p, m);
  const Index pm = p * m;
  Matrix Q = Matrix::Zero(pm + m, pm + m);
  Q.topLeftCorner(pm, pm) = t.L;
  Q.bottomRightCorner(m, m) = Matrix::Identity(m, m);
  if (variant == Variant::PrimalDual) {
    Q.topRightCorner(pm, m) = t.E.transpose();
  } else {
    Q.bottomLeftCorner(m, pm) = -t.E;
  }
  return Q;
}

Matrix build_M(Variant variant, Index p, Index m, double nu) {
  check_counts(p, m);
  check_nu(nu);
  const Index pm = p * m;
  Matrix M = Matrix::Zero(pm + m, pm + m);
  // nu * L^{-T}: nu on the block diagonal, -nu on the block superdiagonal.
  for (Index i = 0; i < p; ++i) {
    set_block(M, i, i, m, nu);
    if (i + 1 < p) {
      set_block(M, i, i + 1, m, -nu);
    }
  }
  if (variant == Variant::PrimalDual) {
    // -nu * E L^{-T} = [-nu I, 0, ..., 0]
    set_block(M, p, 0, m, -nu);
  } else {
    for (Index j = 0; j < p; ++j) {
      set_block(M, p, j, m, -1.0);
    }
  }
  set_block(M, p, p, m, 1.0);
  return M;
}

Matrix build_H(Variant variant, Index p, Index m, double nu) {
  check_counts(p, m);
  check_nu(nu);
  const Index pm = p * m;
  Matrix H = Matrix::Zero(pm + m, pm + m);
  const double ete = variant == Variant::PrimalDual ? 1.0 : 0.0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      // (L L^T)_{ij} = (min(i, j) + 1) I
      const double llt = static_cast<double>(std::min(i, j) + 1);
      set_block(H, i, j, m, llt / nu + ete);
    }
    if (variant == Variant::PrimalDual) {
      set_block(H, i, p, m, 1.0);
      set_block(H, p, i, m, 1.0);
    }
  }
  set_block(H, p, p, m, 1.0);
  return H;
}

Matrix closed_form_G(Variant variant, Index p, Index m, double nu) {
  check_counts(p, m);
  check_nu(nu);
  const Index pm = p * m;
  Matrix G = Matrix::Zero(pm + m, pm + m);
  if (variant == Variant::PrimalDual) {
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < p; ++j) {
        set_block(G, i, j, m, i == j ? 2.0 - nu : 1.0);
      }
      set_block(G, i, p, m, 1.0);
      set_block(G, p, i, m, 1.0);
    }
  } else {
    for (Index i = 0; i < p; ++i) {
      set_block(G, i, i, m, 1.0 - nu);
    }
  }
  set_block(G, p, p, m, 1.0);
  return G;
}

Matrix build_G(Variant variant, Index p, Index m, double nu) {
  const Matrix Q = build_Q(variant, p, m);
  const Matrix M = build_M(variant, p, m, nu);
  const Matrix H = build_H(variant, p, m, nu);
  Matrix G = Q.transpose() + Q - M.transpose() * H * M;
  const Matrix expected = closed_form_G(variant, p, m, nu);
  const double err = (G - expected).cwiseAbs().maxCoeff();
  if (!(err <= 1e-13)) {
    std::ostringstream msg;
    msg << "G for " << to_string(variant) << " p=" << p << " m=" << m << " nu=" << nu
        << " deviates from its closed form by " << err;
    throw ClosedFormMismatch(msg.str());
  }
  return G;
}

FrameworkMatrices build_framework(Variant variant, Index p, Index m, double nu) {
  FrameworkMatrices fm;
  fm.Q = build_Q(variant, p, m);
  fm.M = build_M(variant, p, m, nu);
  fm.H = build_H(variant, p, m, nu);
  fm.G = build_G(variant, p, m, nu);
  fm.nu = nu;
  fm.variant = variant;
  fm.p = p;
  fm.m = m;
  return fm;
}

FrameworkReport verify_framework(Variant variant, Index p, Index m, double nu) {
  const FrameworkMatrices fm = build_framework(variant, p, m, nu);
  FrameworkReport r;
  r.hm_eq_q_maxerr = (fm.H * fm.M - fm.Q).cwiseAbs().maxCoeff();
  r.h_min_eig = min_eigenvalue(fm.H);
  r.g_min_eig = min_eigenvalue(fm.G);
  r.qtq_min_eig = min_eigenvalue(fm.Q.transpose() + fm.Q);
  return r;
}

Matrix build_w_space_Q(Variant variant, const SeparableProblem& problem, double beta) {
  const Matrix P = build_P(problem, beta);
  return P.transpose() * build_Q(variant, static_cast<Index>(problem.p()), problem.m()) * P;
}

Vector stack_xi(std::span<const Vector> a, const Vector& lambda, double beta) {
  const Index m = lambda.size();
  const double sb = std::sqrt(beta);
  Vector xi(static_cast<Index>(a.size()) * m + m);
  Index off = 0;
  for (const Vector& ai : a) {
    if (ai.size() != m) {
      throw DimensionMismatch("aggregate length differs from multiplier length");
    }
    xi.segment(off, m) = sb * ai;
    off += m;
  }
  xi.tail(m) = lambda / sb;
  return xi;
}

Vector stack_w(std::span<const Vector> x, const Vector& lambda) {
  Index total = lambda.size();
  for (const Vector& xi : x) {
    total += xi.size();
  }
  Vector w(total);
  Index off = 0;
  for (const Vector& xi : x) {
    w.segment(off, xi.size()) = xi;
    off += xi.size();
  }
  w.tail(lambda.size()) = lambda;
  return w;
}

Vector vi_operator(const SeparableProblem& problem, const Vector& w) {
  const Index m = problem.m();
  Index total = m;
  for (const BlockSpec& blk : problem.blocks) {
    total += blk.A.cols();
  }
  if (w.size() != total) {
    throw DimensionMismatch("stacked point has length " + std::to_string(w.size()) +
                            ", expected " + std::to_string(total));
  }
  const Vector lambda = w.tail(m);
  Vector F(total);
  Vector r = -problem.b;
  Index off = 0;
  for (const BlockSpec& blk : problem.blocks) {
    const Index n = blk.A.cols();
    F.segment(off, n) = -blk.A.transpose() * lambda;
    r.noalias() += blk.A * w.segment(off, n);
    off += n;
  }
  F.tail(m) = r;
  return F;
}

double check_skew(const SeparableProblem& problem, const Vector& w1, const Vector& w2) {
  return (w1 - w2).dot(vi_operator(problem, w1) - vi_operator(problem, w2));
}

}  // namespace pcsplit
