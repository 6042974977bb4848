#include "pcsplit/problems.hpp"

#include "pcsplit/errors.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace pcsplit {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Vector Rng::normal_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = normal();
  }
  return v;
}

Matrix Rng::normal_matrix(Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      out(i, j) = normal();
    }
  }
  return out;
}

Matrix Rng::spd_matrix(Index n, double lo, double hi) {
  const Matrix U = Eigen::HouseholderQR<Matrix>(normal_matrix(n, n)).householderQ();
  Vector s(n);
  for (Index i = 0; i < n; ++i) {
    s(i) = uniform(lo, hi);
  }
  const Matrix H = U * s.asDiagonal() * U.transpose();
  return 0.5 * (H + H.transpose());
}

namespace {

struct DenseQp {
  Matrix H;
  Vector c;
  Matrix A;  // m x N, blocks side by side
};

void check_dims(Index p, std::span<const Index> block_dims, Index m) {
  if (p < 1 || m < 1) {
    throw InvalidArgument("p and m must be at least 1");
  }
  if (static_cast<Index>(block_dims.size()) != p) {
    throw InvalidArgument("block_dims must list one size per block");
  }
  for (const Index n : block_dims) {
    if (n < 1) {
      throw InvalidArgument("block dimensions must be positive");
    }
  }
}

// Quadratic/Free blocks with SPD H_i (spectrum in [1, 10]), normal c_i and A_i.
SeparableProblem random_quadratic_blocks(Rng& rng, std::span<const Index> block_dims, Index m) {
  SeparableProblem prob;
  for (const Index n : block_dims) {
    BlockSpec blk;
    Quadratic q;
    q.H = rng.spd_matrix(n, 1.0, 10.0);
    q.c = rng.normal_vector(n);
    blk.theta = std::move(q);
    blk.A = rng.normal_matrix(m, n);
    blk.n = n;
    prob.blocks.push_back(std::move(blk));
  }
  return prob;
}

DenseQp assemble(const SeparableProblem& prob) {
  const Index m = prob.blocks.front().A.rows();
  Index total = 0;
  for (const BlockSpec& blk : prob.blocks) {
    total += blk.n;
  }
  DenseQp qp{Matrix::Zero(total, total), Vector::Zero(total), Matrix::Zero(m, total)};
  Index off = 0;
  for (const BlockSpec& blk : prob.blocks) {
    const auto& q = std::get<Quadratic>(blk.theta);
    qp.H.block(off, off, blk.n, blk.n) = q.H;
    qp.c.segment(off, blk.n) = q.c;
    qp.A.middleCols(off, blk.n) = blk.A;
    off += blk.n;
  }
  return qp;
}

Benchmark finish(SeparableProblem prob, const Vector& x, const Vector& lambda) {
  Benchmark out;
  Index off = 0;
  for (const BlockSpec& blk : prob.blocks) {
    out.x_star.push_back(x.segment(off, blk.n));
    out.reference.a.push_back(blk.A * out.x_star.back());
    off += blk.n;
  }
  out.reference.lambda = lambda;
  out.objective = objective_value(prob, out.x_star);
  out.problem = std::move(prob);
  return out;
}

}  // namespace

KktSolution solve_eq_qp_kkt(const Matrix& H, const Vector& c, const Matrix& A, const Vector& b) {
  const Index n = H.rows();
  const Index m = A.rows();
  if (H.cols() != n || c.size() != n || A.cols() != n || b.size() != m) {
    throw DimensionMismatch("KKT data has inconsistent dimensions");
  }
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = H;
  K.topRightCorner(n, m) = -A.transpose();
  K.bottomLeftCorner(m, n) = A;
  Vector rhs(n + m);
  rhs << -c, b;

  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible()) {
    throw SingularSystem("KKT matrix is singular");
  }
  const Vector sol = lu.solve(rhs);
  const double res = (K * sol - rhs).norm();
  if (!(res <= 1e-10 * (1.0 + rhs.norm()) * (1.0 + K.norm()))) {
    throw SingularSystem("KKT solve is inaccurate (residual " + std::to_string(res) + ")");
  }
  return {sol.head(n), sol.tail(m)};
}

KktSolution solve_qp_by_active_sets(const Matrix& H, const Vector& c, const Matrix& G,
                                    const Vector& h) {
  const Index n = H.rows();
  const Index r = G.rows();
  if (H.cols() != n || c.size() != n || G.cols() != n || h.size() != r) {
    throw DimensionMismatch("QP data has inconsistent dimensions");
  }
  if (r > 16) {
    throw InvalidArgument("active-set enumeration is capped at 16 inequality rows");
  }
  const double scale = 1.0 + H.cwiseAbs().maxCoeff() + G.cwiseAbs().maxCoeff() +
                       c.cwiseAbs().maxCoeff() + (r > 0 ? h.cwiseAbs().maxCoeff() : 0.0);
  const double tol = 1e-9 * scale;

  bool found = false;
  double best_obj = 0.0;
  KktSolution best;
  const unsigned subsets = 1u << static_cast<unsigned>(r);
  for (unsigned mask = 0; mask < subsets; ++mask) {
    const auto k = static_cast<Index>(std::popcount(mask));
    std::vector<Index> rows;
    for (Index j = 0; j < r; ++j) {
      if (mask & (1u << static_cast<unsigned>(j))) {
        rows.push_back(j);
      }
    }
    Matrix K = Matrix::Zero(n + k, n + k);
    K.topLeftCorner(n, n) = H;
    Vector rhs(n + k);
    rhs.head(n) = -c;
    for (Index t = 0; t < k; ++t) {
      K.block(n + t, 0, 1, n) = G.row(rows[t]);
      K.block(0, n + t, n, 1) = -G.row(rows[t]).transpose();
      rhs(n + t) = h(rows[t]);
    }
    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible()) {
      continue;
    }
    const Vector sol = lu.solve(rhs);
    if ((K * sol - rhs).norm() > tol) {
      continue;
    }
    const Vector x = sol.head(n);
    const Vector mu = sol.tail(k);
    if (k > 0 && mu.minCoeff() < -tol) {
      continue;
    }
    if (r > 0 && (G * x - h).minCoeff() < -tol) {
      continue;
    }
    const double obj = 0.5 * x.dot(H * x) + c.dot(x);
    if (!found || obj < best_obj - 1e-12 * (1.0 + std::abs(best_obj))) {
      found = true;
      best_obj = obj;
      best.x = x;
      best.lambda = Vector::Zero(r);
      for (Index t = 0; t < k; ++t) {
        best.lambda(rows[t]) = std::max(0.0, mu(t));
      }
    }
  }
  if (!found) {
    throw InvalidArgument("no active set yields a KKT point (infeasible instance?)");
  }
  return best;
}

Vector solve_lasso_prox_gradient(const Matrix& D, const Vector& d, double tau, double tol) {
  if (!(tau > 0.0)) {
    throw InvalidArgument("tau must be positive");
  }
  if (D.rows() != d.size()) {
    throw DimensionMismatch("D and d disagree on the sample count");
  }
  const Matrix DtD = D.transpose() * D;
  const Vector Dtd = D.transpose() * d;
  const Index n = D.cols();
  Eigen::SelfAdjointEigenSolver<Matrix> es(DtD, Eigen::EigenvaluesOnly);
  const double L = std::max(es.eigenvalues().maxCoeff(), 1e-300);
  const double step = 1.0 / L;

  Vector x = Vector::Zero(n);
  bool done = false;
  for (int it = 0; it < 10'000'000; ++it) {
    const Vector z = x - step * (DtD * x - Dtd);
    // Soft-threshold kept local so the oracle shares no code with the prox module.
    const Vector next = z.unaryExpr([t = step * tau](double v) {
      return v > t ? v - t : (v < -t ? v + t : 0.0);
    });
    const double gmap = (x - next).norm() / step;
    x = next;
    if (gmap <= tol) {
      done = true;
      break;
    }
  }
  if (!done) {
    throw NonConvergence("LASSO proximal-gradient oracle hit its iteration cap");
  }

  // Exact solve on the support with the detected signs.
  std::vector<Index> support;
  for (Index j = 0; j < n; ++j) {
    if (x(j) != 0.0) {
      support.push_back(j);
    }
  }
  if (support.empty()) {
    return x;
  }
  const auto s = static_cast<Index>(support.size());
  Matrix Dss(s, s);
  Vector rhs(s);
  for (Index i = 0; i < s; ++i) {
    for (Index j = 0; j < s; ++j) {
      Dss(i, j) = DtD(support[i], support[j]);
    }
    rhs(i) = Dtd(support[i]) - tau * (x(support[i]) > 0.0 ? 1.0 : -1.0);
  }
  Eigen::LDLT<Matrix> ldlt(Dss);
  if (ldlt.info() != Eigen::Success) {
    return x;
  }
  const Vector z = ldlt.solve(rhs);
  Vector polished = Vector::Zero(n);
  for (Index i = 0; i < s; ++i) {
    if ((z(i) > 0.0) != (x(support[i]) > 0.0) || z(i) == 0.0) {
      return x;
    }
    polished(support[i]) = z(i);
  }
  const Vector grad = DtD * polished - Dtd;
  for (Index j = 0; j < n; ++j) {
    if (polished(j) == 0.0 && std::abs(grad(j)) > tau * (1.0 + 1e-9)) {
      return x;
    }
  }
  return polished;
}

Benchmark gen_eq_qp(Index p, std::span<const Index> block_dims, Index m, std::uint64_t seed) {
  check_dims(p, block_dims, m);
  Index total = 0;
  for (const Index n : block_dims) {
    total += n;
  }
  if (total < m) {
    throw InvalidArgument("sum of block dimensions must be at least m");
  }
  Rng rng(seed);
  SeparableProblem prob = random_quadratic_blocks(rng, block_dims, m);
  prob.b = rng.normal_vector(m);
  prob.sense = ConstraintSense::Equality;

  const DenseQp qp = assemble(prob);
  const KktSolution kkt = solve_eq_qp_kkt(qp.H, qp.c, qp.A, prob.b);
  return finish(std::move(prob), kkt.x, kkt.lambda);
}

Benchmark gen_ineq_qp(Index p, std::span<const Index> block_dims, Index m, std::uint64_t seed) {
  check_dims(p, block_dims, m);
  if (m > 4) {
    throw InvalidArgument("gen_ineq_qp supports m <= 4");
  }
  Rng rng(seed);
  SeparableProblem prob = random_quadratic_blocks(rng, block_dims, m);
  prob.sense = ConstraintSense::GreaterEqual;
  prob.b = Vector::Zero(m);

  const DenseQp qp = assemble(prob);
  // Unconstrained minimizer, then b offset by N(0,1): a positive offset makes
  // the row violated there, so about half of the rows end up binding.
  const Vector x_free = qp.H.ldlt().solve(-qp.c);
  prob.b = qp.A * x_free + rng.normal_vector(m);

  const KktSolution kkt = solve_qp_by_active_sets(qp.H, qp.c, qp.A, prob.b);
  return finish(std::move(prob), kkt.x, kkt.lambda);
}

Benchmark gen_lasso(Index n, Index samples, double tau, std::uint64_t seed) {
  if (n < 1 || samples < 1) {
    throw InvalidArgument("n and samples must be at least 1");
  }
  if (!(tau > 0.0)) {
    throw InvalidArgument("tau must be positive");
  }
  Rng rng(seed);
  const Matrix D = rng.normal_matrix(samples, n) / std::sqrt(static_cast<double>(samples));
  const Vector d = rng.normal_vector(samples);

  SeparableProblem prob;
  BlockSpec smooth;
  smooth.theta = Quadratic{D.transpose() * D, -(D.transpose() * d)};
  smooth.A = Matrix::Identity(n, n);
  smooth.n = n;
  BlockSpec sparse;
  sparse.theta = WeightedL1{tau};
  sparse.A = -Matrix::Identity(n, n);
  sparse.n = n;
  sparse.orthonormal_scaled = true;
  prob.blocks = {std::move(smooth), std::move(sparse)};
  prob.b = Vector::Zero(n);
  prob.sense = ConstraintSense::Equality;

  const Vector x = solve_lasso_prox_gradient(D, d, tau, 1e-10);
  Benchmark out;
  out.x_star = {x, x};
  out.reference.a = {x, -x};
  out.reference.lambda = D.transpose() * (D * x - d);
  out.objective = objective_value(prob, out.x_star);
  out.problem = std::move(prob);
  return out;
}

SeparableProblem gen_toy_svm(std::span<const LabeledPoint> points, double slack_cost) {
  if (points.size() < 2) {
    throw InvalidArgument("SVM needs at least two points");
  }
  if (!(slack_cost > 0.0)) {
    throw InvalidArgument("slack cost must be positive");
  }
  const Index dim = points.front().features.size();
  const auto count = static_cast<Index>(points.size());
  bool pos = false;
  bool neg = false;
  Matrix A1(count, dim);
  for (Index j = 0; j < count; ++j) {
    const LabeledPoint& pt = points[static_cast<std::size_t>(j)];
    if (pt.features.size() != dim || dim == 0) {
      throw DimensionMismatch("SVM points must share a nonzero feature dimension");
    }
    if (pt.label == 1.0) {
      pos = true;
    } else if (pt.label == -1.0) {
      neg = true;
    } else {
      throw InvalidArgument("SVM labels must be +1 or -1");
    }
    A1.row(j) = pt.label * pt.features.transpose();
  }
  if (!pos || !neg) {
    throw InvalidArgument("SVM input has a single class");
  }

  SeparableProblem prob;
  BlockSpec w;
  w.theta = Quadratic{Matrix::Identity(dim, dim), Vector::Zero(dim)};
  w.A = A1;
  w.n = dim;
  BlockSpec s;
  s.theta = Quadratic{Matrix::Zero(count, count), Vector::Constant(count, slack_cost)};
  s.set = NonNegSet{};
  s.A = Matrix::Identity(count, count);
  s.n = count;
  s.orthonormal_scaled = true;
  prob.blocks = {std::move(w), std::move(s)};
  prob.b = Vector::Ones(count);
  prob.sense = ConstraintSense::GreaterEqual;
  return prob;
}

Benchmark svm_benchmark(std::span<const LabeledPoint> points, double slack_cost) {
  SeparableProblem prob = gen_toy_svm(points, slack_cost);
  const Index count = prob.m();
  if (count > 4) {
    throw InvalidArgument("svm_benchmark reference needs at most 4 points");
  }
  const Index dim = prob.blocks[0].n;
  const Index total = dim + count;

  // z = (w, s): coupling rows A1 w + s >= 1, then s >= 0.
  Matrix H = Matrix::Zero(total, total);
  H.topLeftCorner(dim, dim) = Matrix::Identity(dim, dim);
  Vector c = Vector::Zero(total);
  c.tail(count).setConstant(slack_cost);
  Matrix G = Matrix::Zero(2 * count, total);
  G.topLeftCorner(count, dim) = prob.blocks[0].A;
  G.topRightCorner(count, count) = Matrix::Identity(count, count);
  G.bottomRightCorner(count, count) = Matrix::Identity(count, count);
  Vector h = Vector::Zero(2 * count);
  h.head(count).setOnes();

  const KktSolution kkt = solve_qp_by_active_sets(H, c, G, h);
  Vector x = kkt.x;
  x.tail(count) = x.tail(count).cwiseMax(0.0);
  return finish(std::move(prob), x, kkt.lambda.head(count));
}

std::vector<LabeledPoint> random_svm_points(Index count, Index dim, double margin,
                                            std::uint64_t seed) {
  if (count < 2 || dim < 1) {
    throw InvalidArgument("need at least two points in at least one dimension");
  }
  if (!(margin >= 0.0)) {
    throw InvalidArgument("margin must be nonnegative");
  }
  Rng rng(seed);
  Vector dir = rng.normal_vector(dim);
  dir /= dir.norm();
  std::vector<LabeledPoint> out;
  for (Index j = 0; j < count; ++j) {
    const double y = j % 2 == 0 ? 1.0 : -1.0;
    Vector z = rng.normal_vector(dim);
    z -= z.dot(dir) * dir;
    z += y * (margin + std::abs(rng.normal())) * dir;
    out.push_back({z, y});
  }
  return out;
}

}  // namespace pcsplit
