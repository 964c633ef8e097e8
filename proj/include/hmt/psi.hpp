#pragma once

#include <string_view>

#include "hmt/flops.hpp"
#include "hmt/linalg.hpp"

namespace hmt {

/// Scaling exponent z for scaling-and-squaring, chosen so that norm·2^-z ≤ 1/2.
struct ScalingPlan {
  int z = 0;
  double norm_used = 0.0;
};

/// I + left·core·right, stored without forming the n×n matrix.
struct LowRankUpdate {
  Matrix core;
  LowRankPair pair;
};

/// z = 0 when norm ≤ 1/2, otherwise ⌈log₂ norm⌉ + 2. Throws on negative or non-finite input.
ScalingPlan make_scaling_plan(double norm);

/// (6,6) Padé approximant of ψ₁(x) = (eˣ − 1)/x. Requires ‖m‖_F ≤ 1/2.
Matrix psi1_pade(const Matrix& m);

/// ψ₁(m) with the Frobenius-norm scaling plan. Records "<label>.*" entries in the ledger.
Matrix psi1(const Matrix& m, FlopLedger& ledger, std::string_view label = "psi1");

/// ψ₁(m) evaluated with a fixed scaling exponent; requires ‖m‖_F·2^-z ≤ 1/2.
Matrix psi1_scaled(const Matrix& m, int z, FlopLedger& ledger, std::string_view label = "psi1");

/// Matrix exponential by (6,6) Padé with scaling and squaring.
Matrix mexp_small(const Matrix& m);

/// exp(A·B) = I + A·ψ₁(B·A)·B for the pair (A, B).
LowRankUpdate mexp_lowrank(const LowRankPair& p, FlopLedger& ledger);

/// (I + A·B)⁻¹ = I − A·(I + B·A)⁻¹·B. Throws SingularError when I + B·A is singular.
LowRankUpdate inv_lowrank_update(const LowRankPair& p, FlopLedger& ledger);

/// Forms the n×n matrix I + left·core·right. Intended for tests and oracle comparisons.
Matrix densify(const LowRankUpdate& u);

}  // namespace hmt
