#pragma once

#include <vector>

#include "hmt/linalg.hpp"

/// Brute-force reference implementations for tests and audits. These depend on the linear
/// algebra core only and share no code with the production kernels.
namespace hmt::oracle {

struct OracleConfig {
  int series_terms = 60;
  double fd_step = 1e-6;

  /// Requires series_terms ≥ 20 and fd_step in (0, 1e-3].
  void validate() const;
};

struct SeriesResult {
  Matrix value;
  /// Bound ‖m‖^N/(N+1)! · 1/(1 − ‖m‖/(N+2)) on the truncated tail.
  double tail_bound = 0.0;
};

/// Σ_{j<N} m^j/(j+1)! in double-double arithmetic, rounded to double. Requires ‖m‖_F ≤ 4.
SeriesResult psi1_series(const Matrix& m, const OracleConfig& cfg = {});

/// ψ₁(m) for any norm: series on m/2^s in double-double, then s steps of
/// ψ₁(2x) = ψ₁(x)(eˣ + 1)/2 and e^{2x} = (eˣ)² in double-double.
Matrix psi1_doubling(const Matrix& m, const OracleConfig& cfg = {});

/// Dense exponential (Eigen's scaling-and-squaring implementation).
Matrix mexp_dense(const Matrix& m);

/// exp(W − Wᵀ)·exp(Wᵀ)·g per factor with W = t·x·g⁻¹, using dense exponentials.
GroupElement dense_geodesic(const GroupElement& g, const AlgebraElement& x, double t);

/// Σ_j v_1^j ⊗ … ⊗ v_d^j by explicit loops.
DenseTensor contract_cp(const std::vector<Matrix>& factors);
/// C ×_1 G_1 ⋯ ×_d G_d by explicit loops.
DenseTensor contract_tucker(const DenseTensor& core, const std::vector<Matrix>& factors);
/// Σ_α F_1[i_1, α_1] F_2[i_2, (α_1, α_2)] ⋯ F_d[i_d, α_{d−1}] by explicit loops.
DenseTensor contract_tt(const std::vector<Matrix>& cores);

/// Rank via full-pivoting LU (independent of the SVD path used in production).
Index lu_rank(const Matrix& m, double tol = 1e-10);
/// Multilinear rank from index-arithmetic unfoldings and lu_rank.
std::vector<Index> multilinear_rank(const DenseTensor& t, double tol = 1e-10);

/// Largest |det| over all r-row subsets of an n×r matrix (n ≤ 12), and the subset attaining it.
std::pair<double, std::vector<Index>> max_volume_rows(const Matrix& m);

}  // namespace hmt::oracle
