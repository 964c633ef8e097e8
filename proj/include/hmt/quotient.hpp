#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hmt/flops.hpp"
#include "hmt/gl.hpp"
#include "hmt/linalg.hpp"

namespace hmt {

/// Basis of the leading-block part of the stabilizer algebra. Each element lists one
/// k_i×k_i block per mode.
using BlockBasis = std::vector<std::vector<Matrix>>;

/// What the three tensor manifolds have in common: mode sizes, the number k_i of leading
/// columns stored per mode, the core tensor (the reference tensor with n_i = k_i), and the
/// leading-block stabilizer directions.
struct QuotientStructure {
  std::vector<Index> dims;
  std::vector<Index> ks;
  DenseTensor core;
  BlockBasis leading_basis;

  Index order() const { return static_cast<Index>(dims.size()); }
  /// dim G − dim of the manifold.
  Index vertical_dimension() const;
};

/// Horizontal tangent vector stored as compact per-mode blocks.
struct HorizontalTangent {
  std::vector<HorizontalBlocks> modes;
};

/// Per-step instrumentation of a geodesic evaluation.
struct GeodesicTrace {
  FlopLedger ledger;
  std::vector<int> z;
};

/// Outcome of a reductivity test. For square shapes `max_residual` is the largest
/// normalized distance of Ad_h(x) from the complement over the sampled pairs; otherwise
/// it is the best witness found.
struct ReductiveReport {
  bool square = false;
  int trials = 0;
  double max_residual = 0.0;
  std::optional<GroupElement> witness_h;
  std::optional<AlgebraElement> witness_x;
  /// True when the outcome matches the expected dichotomy.
  bool consistent = false;
};

/// Expected thresholds for the reductivity dichotomy.
inline constexpr double kReductiveInvarianceTol = 1e-12;
inline constexpr double kReductiveWitnessMin = 0.05;

void validate_points(const QuotientStructure& q, std::span<const ModeBlocks> modes);
void validate_tangent(const QuotientStructure& q, std::span<const ModeBlocks> modes, const HorizontalTangent& x);

/// Reference tensor: the core zero-padded to the full mode sizes.
DenseTensor reference_tensor(const QuotientStructure& q);
/// Orbit map evaluated on leading columns only: the core multiplied by G_i in every mode.
DenseTensor embed(const QuotientStructure& q, std::span<const ModeBlocks> modes);
GroupElement densify(std::span<const ModeBlocks> modes);
AlgebraElement lift(std::span<const ModeBlocks> modes, const HorizontalTangent& x);

/// Horizontal tangent whose velocity has leading columns equal to the projection of
/// `leading` (n_i×k_i per mode, original row order). Cost O(Σ n_i k_i²).
HorizontalTangent project_leading_columns(const QuotientStructure& q, std::span<const ModeBlocks> modes,
                                          const std::vector<Matrix>& leading);
/// Orthogonal projection of a tangent vector at the densified point onto the horizontal space.
HorizontalTangent project_horizontal(const QuotientStructure& q, std::span<const ModeBlocks> modes,
                                     const AlgebraElement& z);
/// Vertical part of v at an arbitrary group element g (same leading-column structure as q).
AlgebraElement project_vertical(const QuotientStructure& q, const GroupElement& g, const AlgebraElement& v);
/// Spanning set of the vertical space at the densified point, exactly vertical_dimension() elements.
std::vector<AlgebraElement> vertical_basis(const QuotientStructure& q, std::span<const ModeBlocks> modes);

/// Norm of the tangent in the right-invariant metric.
double tangent_norm(std::span<const ModeBlocks> modes, const HorizontalTangent& x);
/// Largest of the Γ₁₂ consistency residual and the leading-block orthogonality residual.
double horizontal_residual(const QuotientStructure& q, std::span<const ModeBlocks> modes, const HorizontalTangent& x);
bool is_horizontal(const QuotientStructure& q, std::span<const ModeBlocks> modes, const HorizontalTangent& x,
                   double tol);

/// Quotient geodesic: one low-rank step per mode with k = k_i.
std::vector<ModeBlocks> geodesic(std::span<const ModeBlocks> modes, const HorizontalTangent& x, double t,
                                 GeodesicTrace* trace = nullptr, const StepOptions& options = {});

/// Euclidean projection at the identity onto the complement 𝔪 of the stabilizer algebra.
AlgebraElement project_complement(const QuotientStructure& q, const AlgebraElement& x);
/// ‖x − project_complement(x)‖_F
double complement_distance(const QuotientStructure& q, const AlgebraElement& x);
/// complement_distance(Ad_h x)/‖x‖ for x in 𝔪.
double reductive_residual(const QuotientStructure& q, const GroupElement& h, const AlgebraElement& x);

/// Samples (h, x) pairs, h from `sampler(seed)`, x a random complement element, and reports
/// the dichotomy outcome for `square` shapes (invariance) or non-square shapes (witness).
ReductiveReport reductive_check(const QuotientStructure& q, bool square,
                                const std::function<GroupElement(std::uint64_t)>& sampler, int trials,
                                std::uint64_t seed);

}  // namespace hmt
