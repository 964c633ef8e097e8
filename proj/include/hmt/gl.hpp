#pragma once

#include "hmt/flops.hpp"
#include "hmt/linalg.hpp"

namespace hmt {

/// Leading k columns of one group factor in reduced form: perm·G = [g11; g21] with g11
/// invertible. The full factor is taken to be permᵀ·[g11, 0; g21, I].
struct ModeBlocks {
  Permutation perm;
  Matrix g11;
  Matrix g21;

  Index n() const { return g11.rows() + g21.rows(); }
  Index k() const { return g11.cols(); }
  /// The leading columns G in the original row order.
  Matrix leading_columns() const;
  /// Reduces an n×k full-rank column block with select_submatrix.
  static ModeBlocks from_columns(const Matrix& columns, double tol = kRankTol);
};

/// Horizontal tangent factor in compact form. In the permuted frame of the owning
/// ModeBlocks the full tangent factor is [x11, x11·gamma12; x21, x21·gamma12].
struct HorizontalBlocks {
  Matrix x11;
  Matrix x21;
  Matrix gamma12;

  /// The first k columns of the tangent factor in the original row order.
  Matrix leading_columns(const Permutation& perm) const;
};

/// Σ tr(Z_i W_iᵀ)
double euclidean_inner(const AlgebraElement& z, const AlgebraElement& w);
/// Σ ⟨x_i g_i⁻¹, y_i g_i⁻¹⟩
double right_invariant_inner(const GroupElement& g, const AlgebraElement& x, const AlgebraElement& y);

GroupElement inverse(const GroupElement& g);
GroupElement operator*(const GroupElement& a, const GroupElement& b);
/// Tangent vector x at a group element translated on the right: x_i·h_i.
AlgebraElement right_translate(const AlgebraElement& x, const GroupElement& h);

/// Geodesic of the right-invariant metric: per factor with W = t·x·g⁻¹,
/// exp(W − Wᵀ)·exp(Wᵀ)·g.
GroupElement gl_exp(const GroupElement& g, const AlgebraElement& x, double t);

/// h·x·h⁻¹ per factor.
AlgebraElement adjoint(const GroupElement& h, const AlgebraElement& x);

/// Γ₁₂ = g11⁻¹ (I − M(I + M)⁻¹) g11⁻ᵀ g21ᵀ with M = g11⁻ᵀ g21ᵀ g21 g11⁻¹. Only k×k systems
/// are solved. Records "gamma12.*" entries.
Matrix gamma12(const ModeBlocks& blocks, FlopLedger& ledger);

struct StepOptions {
  /// Lower bound for the shared scaling exponent of both ψ₁ evaluations.
  int min_z = 1;
};

struct StepResult {
  ModeBlocks blocks;
  int z = 0;
};

/// Leading k columns of gl_exp at the densified factor, computed from the rank-k and
/// rank-2k factorizations of the horizontal velocity; no n×n intermediate is formed.
/// The result is re-reduced with select_submatrix.
StepResult lowrank_geodesic_step(const ModeBlocks& blocks, const HorizontalBlocks& tangent, double t,
                                 FlopLedger& ledger, const StepOptions& options = {});

/// n×n factor permᵀ·[g11, 0; g21, I]. Intended for tests and oracle comparisons.
Matrix densify(const ModeBlocks& blocks);
/// n×n tangent factor permᵀ·[x11, x11Γ; x21, x21Γ]. Intended for tests and oracle comparisons.
Matrix densify(const ModeBlocks& blocks, const HorizontalBlocks& tangent);

}  // namespace hmt
