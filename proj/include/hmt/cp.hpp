#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hmt/quotient.hpp"

namespace hmt {

/// Tensors of CP rank r in ℝ^{n_1}⊗…⊗ℝ^{n_d} with linearly independent factor columns.
struct CpShape {
  std::vector<Index> dims;
  Index r = 0;

  /// Requires d ≥ 3, n_i ≥ 2 and 1 ≤ r ≤ n_i.
  void validate() const;
  bool square() const;
};

struct CpPoint {
  CpShape shape;
  std::vector<ModeBlocks> modes;
};

using CpTangent = HorizontalTangent;

/// Stabilizer element: h_i = [D_i·Q, M_i; 0, A_i] with D_1⋯D_d = I and a shared permutation Q
/// (row j of Q is e_{q.image[j]}ᵀ).
struct CpStabilizerSample {
  std::vector<Vector> diagonals;
  Permutation q;
  std::vector<Matrix> m;
  std::vector<Matrix> a;

  GroupElement assemble() const;
};

QuotientStructure cp_structure(const CpShape& shape);
/// Σ_{j<r} e_j ⊗ … ⊗ e_j
DenseTensor cp_reference_tensor(const CpShape& shape);
/// Point whose embedding is Σ_j v_1^j ⊗ … ⊗ v_d^j. Rejects factors with condition number above 1e8.
CpPoint cp_point_from_factors(const std::vector<Matrix>& factors);
DenseTensor cp_embed(const CpPoint& p);

/// Deterministic in the seed. Diagonal entries are signed powers of two, so D_1⋯D_d = I holds exactly.
CpStabilizerSample cp_stabilizer_sample(const CpShape& shape, std::uint64_t seed);

std::vector<AlgebraElement> cp_vertical_basis(const CpPoint& p);
CpTangent cp_project_horizontal(const CpPoint& p, const AlgebraElement& z);
CpTangent cp_project_leading_columns(const CpPoint& p, const std::vector<Matrix>& leading);
AlgebraElement cp_project_vertical(const CpShape& shape, const GroupElement& g, const AlgebraElement& v);
bool cp_is_horizontal(const CpPoint& p, const CpTangent& x, double tol);
/// Spread across modes of diag(G_iᵀ A_i S_i⁻¹), which must agree for a horizontal tangent.
double cp_diagonal_condition_residual(const CpPoint& p, const CpTangent& x);

CpPoint cp_geodesic(const CpPoint& p, const CpTangent& x, double t, GeodesicTrace* trace = nullptr,
                    const StepOptions& options = {});

/// Σ_i [110 n_i r²/3 + (146 + 36 z_i) r³]
Rational cp_flop_formula(const CpShape& shape, std::span<const int> z);

ReductiveReport cp_reductive_check(const CpShape& shape, int trials, std::uint64_t seed);

}  // namespace hmt
