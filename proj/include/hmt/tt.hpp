#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hmt/quotient.hpp"

namespace hmt {

/// Tensors of TT rank (s_1, …, s_{d−1}). Bond sizes are s_0 = s_d = 1 at the boundary, and
/// mode i stores k_i = s_{i−1}·s_i leading columns.
struct TtShape {
  std::vector<Index> dims;
  std::vector<Index> ranks;

  /// Requires d ≥ 3, n_i ≥ 2, s_j ≥ 1 and s_{i−1}s_i ≤ n_i.
  void validate() const;
  bool square() const;
  /// (1, s_1, …, s_{d−1}, 1)
  std::vector<Index> bonds() const;
  std::vector<Index> ks() const;
};

struct TtPoint {
  TtShape shape;
  std::vector<ModeBlocks> modes;
};

using TtTangent = HorizontalTangent;

/// Stabilizer element: mode i is [A_{i−1}⁻ᵀ⊗A_i, M_i; 0, B_i] with A_0 = A_d = 1.
/// `a` holds A_1 … A_{d−1}.
struct TtStabilizerSample {
  std::vector<Matrix> a;
  std::vector<Matrix> m;
  std::vector<Matrix> b;

  GroupElement assemble() const;
};

QuotientStructure tt_structure(const TtShape& shape);
/// Contraction of cores whose unfoldings are identity matrices, zero-padded to the mode sizes.
DenseTensor tt_reference_tensor(const TtShape& shape);
/// Point from unfolded cores F_i (n_i × s_{i−1}s_i, column index (α_{i−1}, α_i) row-major).
TtPoint tt_point_from_cores(const std::vector<Matrix>& cores);
DenseTensor tt_embed(const TtPoint& p);

TtStabilizerSample tt_stabilizer_sample(const TtShape& shape, std::uint64_t seed);

/// For L on ℝ^p⊗ℝ^q: tr₁(A⊗B) = (tr A)·B.
Matrix tt_trace_first(const Matrix& l, Index p, Index q);
/// For L on ℝ^p⊗ℝ^q: tr₂(A⊗B) = (tr B)·Aᵀ.
Matrix tt_trace_second(const Matrix& l, Index p, Index q);
/// Largest violation of the complement conditions at the identity: zero trailing columns and
/// the chain L_1 = tr₂L_2, tr₁L_{i−1} = tr₂L_i, tr₁L_{d−1} = L_dᵀ.
double tt_m_residual(const TtShape& shape, const AlgebraElement& x);
bool tt_m_membership(const TtShape& shape, const AlgebraElement& x, double tol);

std::vector<AlgebraElement> tt_vertical_basis(const TtPoint& p);
TtTangent tt_project_horizontal(const TtPoint& p, const AlgebraElement& z);
TtTangent tt_project_leading_columns(const TtPoint& p, const std::vector<Matrix>& leading);
AlgebraElement tt_project_vertical(const TtShape& shape, const GroupElement& g, const AlgebraElement& v);
bool tt_is_horizontal(const TtPoint& p, const TtTangent& x, double tol);

TtPoint tt_geodesic(const TtPoint& p, const TtTangent& x, double t, GeodesicTrace* trace = nullptr,
                    const StepOptions& options = {});

/// Σ_i [110 n_i k_i²/3 + (146 + 36 z_i) k_i³] with k_i = s_{i−1}s_i.
Rational tt_flop_formula(const TtShape& shape, std::span<const int> z);

ReductiveReport tt_reductive_check(const TtShape& shape, int trials, std::uint64_t seed);

}  // namespace hmt
