#pragma once

#include <cmath>
#include <vector>

#include "hmt/gl.hpp"
#include "hmt/quotient.hpp"

/// Property checks shared by the unit tests, the verify suites and the acceptance binary.
namespace hmt::checks {

/// Relative change of the reference tensor under the stabilizer candidate h.
inline double fixed_point_residual(const QuotientStructure& q, const GroupElement& h) {
  const DenseTensor t = reference_tensor(q);
  return (mode_apply(h, t) - t).norm() / t.norm();
}

/// Representative of the same point obtained by right-multiplying the densified group
/// element by h ∈ H and reducing its leading columns again.
inline std::vector<ModeBlocks> translate_representative(std::span<const ModeBlocks> modes, const GroupElement& h) {
  const GroupElement g = densify(modes);
  std::vector<ModeBlocks> out;
  for (size_t i = 0; i < modes.size(); ++i) {
    const Matrix gh = g.factors[i] * h.factors[i];
    out.push_back(ModeBlocks::from_columns(gh.leftCols(modes[i].k())));
  }
  return out;
}

/// Horizontal tangent at `to` with the same velocity X·g⁻¹ as x at `from`.
inline HorizontalTangent transport_tangent(const QuotientStructure& q, std::span<const ModeBlocks> from,
                                           const HorizontalTangent& x, std::span<const ModeBlocks> to) {
  const GroupElement g = densify(from);
  const GroupElement g2 = densify(to);
  const AlgebraElement v = lift(from, x);
  AlgebraElement moved;
  for (size_t i = 0; i < from.size(); ++i) moved.factors.push_back(right_divide(v.factors[i], g.factors[i]) * g2.factors[i]);
  return project_horizontal(q, to, moved);
}

/// Relative size, in the right-invariant metric, of the vertical part of the finite-difference
/// velocity of the group geodesic through the densified point with initial velocity x.
inline double vertical_velocity_fraction(const QuotientStructure& q, std::span<const ModeBlocks> modes,
                                         const HorizontalTangent& x, double t, double h = 1e-6) {
  const GroupElement g = densify(modes);
  const AlgebraElement v = lift(modes, x);
  const GroupElement at = gl_exp(g, v, t);
  const GroupElement plus = gl_exp(g, v, t + h);
  const GroupElement minus = gl_exp(g, v, t - h);
  AlgebraElement velocity;
  for (size_t i = 0; i < modes.size(); ++i) velocity.factors.push_back((plus.factors[i] - minus.factors[i]) / (2 * h));
  const AlgebraElement vertical = project_vertical(q, at, velocity);
  const double vert = std::sqrt(right_invariant_inner(at, vertical, vertical));
  const double full = std::sqrt(right_invariant_inner(at, velocity, velocity));
  return vert / full;
}

/// Largest relative deviation between the leading columns of the group geodesic and the
/// low-rank quotient geodesic.
inline double leading_column_mismatch(std::span<const ModeBlocks> modes, const HorizontalTangent& x, double t) {
  const GroupElement dense = gl_exp(densify(modes), lift(modes, x), t);
  const auto out = geodesic(modes, x, t);
  double worst = 0;
  for (size_t i = 0; i < modes.size(); ++i) {
    const Matrix ref = dense.factors[i].leftCols(modes[i].k());
    worst = std::max(worst, (out[i].leading_columns() - ref).norm() / ref.norm());
  }
  return worst;
}

}  // namespace hmt::checks
