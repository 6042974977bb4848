#pragma once

// Framework matrices in xi-coordinates.
//
// With xi = P w = (sqrt(beta) A_1 x_1, ..., sqrt(beta) A_p x_p, lambda / sqrt(beta)),
// one prediction-correction step of either variant reads
//
//     prediction satisfies the VI perturbed by Q (xi^k - xi_tilde^k)
//     xi^{k+1} = xi^k - M (xi^k - xi_tilde^k)
//
// and convergence follows once some H > 0 satisfies H M = Q and
// G = Q^T + Q - M^T H M > 0. Everything here is built from the p x p block
// templates L (lower-triangular ones), I and the 1 x p row E, each block being
// an m x m identity.

#include "pcsplit/model.hpp"

#include <span>

namespace pcsplit {

struct BlockTemplates {
  Matrix L;  // pm x pm, identity blocks on and below the block diagonal
  Matrix I;  // pm x pm identity
  Matrix E;  // m x pm, row of identity blocks
};

BlockTemplates build_LIE(Index p, Index m);

/// L^{-1}: identity blocks on the diagonal, -I on the block subdiagonal.
Matrix build_L_inverse(Index p, Index m);

/// blkdiag(sqrt(beta) A_1, ..., sqrt(beta) A_p, I_m / sqrt(beta)).
Matrix build_P(const SeparableProblem& problem, double beta);

/// PD: [[L, E^T], [0, I]].  DP: [[L, 0], [-E, I]].
Matrix build_Q(Variant variant, Index p, Index m);

/// PD: [[nu L^{-T}, 0], [-nu E L^{-T}, I]].  DP: [[nu L^{-T}, 0], [-E, I]].
Matrix build_M(Variant variant, Index p, Index m, double nu);

/// PD: [[L L^T / nu + E^T E, E^T], [E, I]].  DP: [[L L^T / nu, 0], [0, I]].
Matrix build_H(Variant variant, Index p, Index m, double nu);

/// Hand-derived form of Q^T + Q - M^T H M.
/// PD: [[(1-nu) I + E^T E, E^T], [E, I]].  DP: diag((1-nu) I, I).
Matrix closed_form_G(Variant variant, Index p, Index m, double nu);

/// Q^T + Q - M^T H M from the factories, cross-checked entrywise (1e-13)
/// against closed_form_G. Throws ClosedFormMismatch on disagreement.
Matrix build_G(Variant variant, Index p, Index m, double nu);

struct FrameworkMatrices {
  Matrix Q, M, H, G;
  double nu = 0.0;
  Variant variant = Variant::PrimalDual;
  Index p = 0;
  Index m = 0;
};

FrameworkMatrices build_framework(Variant variant, Index p, Index m, double nu);

struct FrameworkReport {
  double hm_eq_q_maxerr = 0.0;
  double h_min_eig = 0.0;
  double g_min_eig = 0.0;
  double qtq_min_eig = 0.0;  // smallest eigenvalue of Q^T + Q

  [[nodiscard]] bool pass() const {
    return hm_eq_q_maxerr <= 1e-13 && h_min_eig > 0.0 && g_min_eig > 0.0 && qtq_min_eig > 0.0;
  }
};

/// Machine check of H M = Q, H > 0, G > 0 and Q^T + Q > 0 for one configuration.
FrameworkReport verify_framework(Variant variant, Index p, Index m, double nu);

/// Prediction matrix in w-space, P^T Q P (the block-lower-triangular
/// beta A_i^T A_j pattern with the multiplier coupling of the variant).
Matrix build_w_space_Q(Variant variant, const SeparableProblem& problem, double beta);

/// xi = (sqrt(beta) a_1, ..., sqrt(beta) a_p, lambda / sqrt(beta)).
Vector stack_xi(std::span<const Vector> a, const Vector& lambda, double beta);

/// w = (x_1, ..., x_p, lambda).
Vector stack_w(std::span<const Vector> x, const Vector& lambda);

/// F(w) = (-A_1^T lambda, ..., -A_p^T lambda, sum_i A_i x_i - b).
Vector vi_operator(const SeparableProblem& problem, const Vector& w);

/// (w1 - w2)^T (F(w1) - F(w2)); identically zero because F is affine with a
/// skew-symmetric linear part.
double check_skew(const SeparableProblem& problem, const Vector& w1, const Vector& w2);

}  // namespace pcsplit
