#include "support.hpp"

#include "pcsplit/errors.hpp"
#include "pcsplit/prox.hpp"

#include <doctest.h>

using namespace pcsplit;
using namespace pcsplit::testing;

namespace {

BlockSpec scalar_block(ThetaAtom theta, SetSpec set = FreeSet{}) {
  BlockSpec blk;
  blk.theta = std::move(theta);
  blk.set = std::move(set);
  blk.A = Matrix::Identity(1, 1);
  blk.n = 1;
  return blk;
}

// Smallest value over probes z of
//   l1(z) - l1(x) + (z - x)^T grad f(x),   f = quadratic part + beta/2 ||A x - v||^2,
// with z = project(x + d), ||d|| <= 0.5. Nonnegative up to the inner accuracy
// iff x solves the subproblem.
double vi_probe_min(const BlockSpec& blk, double beta, const Vector& v, const Vector& x,
                    Rng& rng, int probes) {
  const Vector grad = smooth_gradient(blk.theta, x) + beta * blk.A.transpose() * (blk.A * x - v);
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    Vector d = rng.normal_vector(x.size());
    d *= 0.5 * rng.uniform() / std::max(d.norm(), 1e-300);
    const Vector z = project_set(x + d, blk.set);
    const double val = l1_part(blk.theta, z) - l1_part(blk.theta, x) + (z - x).dot(grad);
    worst = std::min(worst, val);
  }
  return worst;
}

}  // namespace

TEST_SUITE("prox") {
  TEST_CASE("soft threshold") {
    CHECK(prox_shrink(vec({3}), 1.0)(0) == 2.0);
    CHECK(prox_shrink(vec({-0.5}), 1.0)(0) == 0.0);
    CHECK(prox_shrink(vec({-4}), 1.0)(0) == -3.0);
    const Vector v = vec({1.5, -2.25, 0.0, 7.0});
    CHECK(prox_shrink(v, 0.0) == v);
    CHECK_THROWS_AS(prox_shrink(v, -1.0), InvalidArgument);
  }

  TEST_CASE("soft threshold is nonexpansive") {
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
      const Vector v1 = 3.0 * rng.normal_vector(6);
      const Vector v2 = 3.0 * rng.normal_vector(6);
      const double tau = rng.uniform(0.0, 2.0);
      CHECK((prox_shrink(v1, tau) - prox_shrink(v2, tau)).norm() <= (v1 - v2).norm() + 1e-15);
    }
  }

  TEST_CASE("projections") {
    CHECK(project_set(vec({-7, 2}), FreeSet{}) == vec({-7, 2}));
    CHECK(project_set(vec({-1, 3}), NonNegSet{}) == vec({0, 3}));
    CHECK(project_set(vec({2}), BoxSet{vec({0}), vec({1})}) == vec({1}));
    CHECK(in_set(vec({0, 1}), NonNegSet{}));
    CHECK_FALSE(in_set(vec({-1e-300}), NonNegSet{}));
  }

  TEST_CASE("projection is idempotent") {
    Rng rng(6);
    const std::vector<SetSpec> sets{FreeSet{}, NonNegSet{},
                                    BoxSet{vec({-1, 0, 2}), vec({1, 0, 5})}};
    for (int k = 0; k < 100; ++k) {
      const Vector v = 4.0 * rng.normal_vector(3);
      for (const SetSpec& s : sets) {
        const Vector once = project_set(v, s);
        CHECK(project_set(once, s) == once);
        CHECK(in_set(once, s));
      }
    }
  }

  TEST_CASE("scalar subproblems by hand") {
    const BlockSpec quad = scalar_block(Quadratic{mat({{1}}), vec({0})});
    CHECK(solve_block_subproblem({quad, 1.0, vec({0})}, 1e-10).x(0) == 0.0);
    // (1 + 1) x = 2
    const SubproblemSolution s = solve_block_subproblem({quad, 1.0, vec({2})}, 1e-10);
    CHECK(s.x(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.a(0) == doctest::Approx(1.0).epsilon(1e-15));

    BlockSpec l1 = scalar_block(WeightedL1{1.0});
    l1.orthonormal_scaled = true;
    CHECK(subproblem_method(l1) == SubproblemMethod::ClosedFormProx);
    CHECK(solve_block_subproblem({l1, 1.0, vec({3})}, 1e-10).x(0) == 2.0);

    // Same atom without the flag goes through the iterative path.
    l1.orthonormal_scaled = false;
    CHECK(subproblem_method(l1) == SubproblemMethod::ProjectedGradient);
    CHECK(solve_block_subproblem({l1, 1.0, vec({3})}, 1e-12).x(0) == doctest::Approx(2.0));
  }

  TEST_CASE("dispatch") {
    CHECK(subproblem_method(scalar_block(Quadratic{mat({{1}}), vec({0})})) ==
          SubproblemMethod::QuadraticNormalEquations);
    CHECK(subproblem_method(scalar_block(Quadratic{mat({{1}}), vec({0})}, NonNegSet{})) ==
          SubproblemMethod::ProjectedGradient);
    CHECK(subproblem_method(scalar_block(Zero{}, NonNegSet{})) ==
          SubproblemMethod::ProjectedGradient);
    CustomTheta custom;
    CHECK(subproblem_method(scalar_block(custom)) == SubproblemMethod::Custom);
  }

  TEST_CASE("quadratic free blocks match a dense solve") {
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
      const Index n = 1 + k % 6;
      const Index m = 1 + k % 4;
      BlockSpec blk;
      Quadratic q{rng.spd_matrix(n, 1.0, 10.0), rng.normal_vector(n)};
      blk.theta = q;
      blk.A = rng.normal_matrix(m, n);
      blk.n = n;
      const double beta = rng.uniform(0.1, 10.0);
      const Vector v = rng.normal_vector(m);
      const Vector x = solve_block_subproblem({blk, beta, v}, 1e-10).x;
      const Matrix K = q.H + beta * blk.A.transpose() * blk.A;
      const Vector ref = Eigen::FullPivLU<Matrix>(K).solve(beta * blk.A.transpose() * v - q.c);
      CHECK((x - ref).norm() <= 1e-10 * (1.0 + ref.norm()));
    }
  }

  TEST_CASE("iterative path satisfies the variational inequality") {
    Rng rng(8);
    const double inner_tol = 1e-10;
    for (int k = 0; k < 30; ++k) {
      const Index n = 1 + k % 5;
      const Index m = 1 + (k / 5) % 3;
      BlockSpec blk;
      blk.A = rng.normal_matrix(m, n);
      blk.n = n;
      switch (k % 3) {
        case 0:
          blk.theta = WeightedL1{rng.uniform(0.1, 2.0)};
          blk.set = BoxSet{Vector::Constant(n, -1.0), Vector::Constant(n, 1.5)};
          break;
        case 1:
          blk.theta = Zero{};
          blk.set = NonNegSet{};
          break;
        default:
          blk.theta = Quadratic{rng.spd_matrix(n, 1.0, 10.0), rng.normal_vector(n)};
          blk.set = BoxSet{Vector::Constant(n, -0.3), Vector::Constant(n, 0.3)};
          break;
      }
      const double beta = rng.uniform(0.5, 4.0);
      const Vector v = 2.0 * rng.normal_vector(m);
      const SubproblemSolution sol = solve_block_subproblem({blk, beta, v}, inner_tol);
      CHECK(in_set(sol.x, blk.set));
      CHECK(max_abs(sol.a - blk.A * sol.x) == 0.0);
      CHECK(vi_probe_min(blk, beta, v, sol.x, rng, 100) >= -inner_tol);
    }
  }

  TEST_CASE("closed form with a scaled orthonormal A") {
    Rng rng(9);
    const Matrix U = Eigen::HouseholderQR<Matrix>(rng.normal_matrix(4, 4)).householderQ();
    BlockSpec blk;
    blk.theta = WeightedL1{0.7};
    blk.set = BoxSet{Vector::Constant(4, -1.0), Vector::Constant(4, 1.0)};
    blk.A = 2.0 * U;
    blk.n = 4;
    blk.orthonormal_scaled = true;
    BlockSpec slow = blk;
    slow.orthonormal_scaled = false;
    const Vector v = 3.0 * rng.normal_vector(4);
    const Vector fast_x = solve_block_subproblem({blk, 1.3, v}, 1e-12).x;
    const Vector slow_x = solve_block_subproblem({slow, 1.3, v}, 1e-12).x;
    CHECK((fast_x - slow_x).norm() <= 1e-10);
  }

  TEST_CASE("custom atoms use their callback") {
    CustomTheta custom;
    int calls = 0;
    custom.solve = [&calls](const Matrix&, const Vector& v, double beta, const Vector&, double) {
      ++calls;
      return Vector(v / (1.0 + beta));
    };
    custom.value = [](const Vector& x) { return x.squaredNorm(); };
    const BlockSpec blk = scalar_block(custom);
    CHECK(solve_block_subproblem({blk, 1.0, vec({4})}, 1e-10).x(0) == 2.0);
    CHECK(calls == 1);
  }

  TEST_CASE("singular and non-convergent subproblems") {
    BlockSpec singular;
    singular.theta = Quadratic{Matrix::Zero(2, 2), vec({0, 0})};
    singular.A = mat({{1, 1}});
    singular.n = 2;
    CHECK_THROWS_AS(solve_block_subproblem({singular, 1.0, vec({1})}, 1e-10), SingularSystem);

    BlockSpec slow;
    slow.theta = Quadratic{mat({{1e-9, 0}, {0, 1}}), vec({1, 1})};
    slow.set = BoxSet{vec({-1e9, -1e9}), vec({1e9, 1e9})};
    slow.A = mat({{0, 1}});
    slow.n = 2;
    CHECK_THROWS_AS(solve_block_subproblem({slow, 1.0, vec({0})}, 1e-300), NonConvergence);
  }

  TEST_CASE("argument checks") {
    const BlockSpec quad = scalar_block(Quadratic{mat({{1}}), vec({0})});
    CHECK_THROWS_AS(solve_block_subproblem({quad, 0.0, vec({0})}, 1e-10), InvalidArgument);
    CHECK_THROWS_AS(solve_block_subproblem({quad, 1.0, vec({0})}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(solve_block_subproblem({quad, 1.0, vec({0, 1})}, 1e-10), DimensionMismatch);
  }

  TEST_CASE("multiplier step") {
    CHECK(solve_lambda_subproblem(vec({1}), vec({0.5}), 2.0, ConstraintSense::Equality)(0) ==
          0.0);
    CHECK(solve_lambda_subproblem(vec({0.5}), vec({1}), 1.0, ConstraintSense::GreaterEqual)(0) ==
          0.0);
    CHECK(solve_lambda_subproblem(vec({0.5}), vec({1}), 1.0, ConstraintSense::Equality)(0) ==
          -0.5);
    const Vector lam = vec({-1, 2, 3});
    CHECK(solve_lambda_subproblem(lam, Vector::Zero(3), 5.0, ConstraintSense::Equality) == lam);
    CHECK_THROWS_AS(solve_lambda_subproblem(lam, vec({1}), 1.0, ConstraintSense::Equality),
                    DimensionMismatch);
  }
}
