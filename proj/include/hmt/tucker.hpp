#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hmt/quotient.hpp"

namespace hmt {

/// Tensors of multilinear rank (t_1, …, t_d) with t_1 = t_2⋯t_d. Mode 0 is the large mode;
/// callers with the large mode elsewhere must permute modes first.
struct TuckerShape {
  std::vector<Index> dims;
  std::vector<Index> ranks;

  /// Requires d ≥ 3, n_i ≥ 2, 1 ≤ t_i ≤ n_i and t_1 = t_2⋯t_d.
  void validate() const;
  bool square() const;
};

struct TuckerPoint {
  TuckerShape shape;
  std::vector<ModeBlocks> modes;
};

using TuckerTangent = HorizontalTangent;

/// Stabilizer element: mode 0 is [A_2⁻ᵀ⊗…⊗A_d⁻ᵀ, M_1; 0, B_1], mode i ≥ 1 is [A_i, M_i; 0, B_i].
/// `a[0]` is unused and left empty.
struct TuckerStabilizerSample {
  std::vector<Matrix> a;
  std::vector<Matrix> m;
  std::vector<Matrix> b;

  GroupElement assemble() const;
};

/// Integer window ⌈(P + √(P² − 4Σt_j²))/2⌉ ≤ t_1 ≤ P for P = t_2⋯t_d, from the dimension count
/// t_1·P ≤ t_1² + Σ t_j². When the discriminant is negative the lower end is 1.
std::pair<Index, Index> tucker_rank_window(std::span<const Index> trailing_ranks);

QuotientStructure tucker_structure(const TuckerShape& shape);
/// Identity t_1×t_1 core viewed in ℝ^{t_1}⊗…⊗ℝ^{t_d}, zero-padded to the mode sizes.
DenseTensor tucker_reference_tensor(const TuckerShape& shape);
/// Point whose embedding is C ×_1 G_1 ⋯ ×_d G_d. Rejects rank-deficient G_i and a singular
/// mode-0 unfolding of C.
TuckerPoint tucker_point_from_decomposition(const DenseTensor& core, const std::vector<Matrix>& factors);
DenseTensor tucker_embed(const TuckerPoint& p);

TuckerStabilizerSample tucker_stabilizer_sample(const TuckerShape& shape, std::uint64_t seed);

/// tr_i of a t_1×t_1 matrix over ℝ^{t_2}⊗…⊗ℝ^{t_d}: trace over every factor except `factor`
/// (0-based among the trailing modes), then transpose, so tr_i(A_2⊗…⊗A_d) = ∏_{j≠i} tr A_j · A_iᵀ.
Matrix tucker_partial_trace(const Matrix& l1, std::span<const Index> trailing_ranks, Index factor);
/// Largest violation of the complement conditions at the identity: zero trailing columns in
/// every mode and L_i = tr_i L_1 for the leading blocks.
double tucker_m_residual(const TuckerShape& shape, const AlgebraElement& x);
bool tucker_m_membership(const TuckerShape& shape, const AlgebraElement& x, double tol);

std::vector<AlgebraElement> tucker_vertical_basis(const TuckerPoint& p);
TuckerTangent tucker_project_horizontal(const TuckerPoint& p, const AlgebraElement& z);
TuckerTangent tucker_project_leading_columns(const TuckerPoint& p, const std::vector<Matrix>& leading);
AlgebraElement tucker_project_vertical(const TuckerShape& shape, const GroupElement& g, const AlgebraElement& v);
bool tucker_is_horizontal(const TuckerPoint& p, const TuckerTangent& x, double tol);

TuckerPoint tucker_geodesic(const TuckerPoint& p, const TuckerTangent& x, double t, GeodesicTrace* trace = nullptr,
                            const StepOptions& options = {});

/// Σ_i [110 n_i t_i²/3 + (146 + 36 z_i) t_i³]
Rational tucker_flop_formula(const TuckerShape& shape, std::span<const int> z);

ReductiveReport tucker_reductive_check(const TuckerShape& shape, int trials, std::uint64_t seed);

}  // namespace hmt
