#include "hmt/psi.hpp"

#include <array>
#include <cmath>
#include <string>

namespace hmt {

namespace {

// ψ₁ (6,6) Padé denominator coefficients of M^0..M^6. The numerator is
// 1 + M/26 + 5M²/156 + M³/858 + M⁴/5720 + M⁵/205920 + M⁶/8648640.
constexpr std::array<double, 7> kPsiDen = {1.0,           -6.0 / 13.0,     5.0 / 52.0,       -5.0 / 429.0,
                                           1.0 / 1144.0,  -1.0 / 25740.0,  1.0 / 1235520.0};
// Numerator minus denominator. Evaluating I + D⁻¹(N − D) keeps the exact identity out of
// the rounded solve, which matters when ψ₁ is close to I.
constexpr std::array<double, 7> kPsiDiff = {0.0,          1.0 / 2.0,     -5.0 / 78.0,       1.0 / 78.0,
                                            -1.0 / 1430.0, 1.0 / 22880.0, -1.0 / 1441440.0};
// exp (6,6) Padé numerator; the denominator is the same polynomial at −M.
constexpr std::array<double, 7> kExpNum = {1.0,          1.0 / 2.0,     5.0 / 44.0,     1.0 / 66.0,
                                           1.0 / 792.0,  1.0 / 15840.0, 1.0 / 665280.0};
// Numerator minus denominator of the exp approximant (odd part, doubled).
constexpr std::array<double, 7> kExpDiff = {0.0, 1.0, 0.0, 1.0 / 33.0, 0.0, 1.0 / 7920.0, 0.0};

using Powers = std::array<Matrix, 7>;

Powers powers_of(const Matrix& m) {
  Powers p;
  p[0] = Matrix::Identity(m.rows(), m.cols());
  p[1] = m;
  for (size_t j = 2; j < p.size(); ++j) p[j].noalias() = p[j - 1] * m;
  return p;
}

Matrix polynomial(const Powers& p, const std::array<double, 7>& c, double sign = 1.0) {
  Matrix out = c[0] * p[0];
  double s = 1.0;
  for (size_t j = 1; j < p.size(); ++j) {
    s *= sign;
    out += (s * c[j]) * p[j];
  }
  return out;
}

/// I + den⁻¹·diff for the approximant with denominator `den` and numerator − denominator `diff`.
Matrix pade_quotient(const Powers& p, const std::array<double, 7>& den, const std::array<double, 7>& diff,
                     double den_sign = 1.0) {
  Matrix out = left_divide(polynomial(p, den, den_sign), polynomial(p, diff));
  out.diagonal().array() += 1.0;
  return out;
}

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DimensionError(std::string(what) + ": matrix must be square");
}

std::string step(std::string_view label, const char* name) { return std::string(label) + "." + name; }

}  // namespace

ScalingPlan make_scaling_plan(double norm) {
  if (!(norm >= 0.0) || !std::isfinite(norm)) throw std::invalid_argument("scaling plan needs a finite nonnegative norm");
  ScalingPlan plan;
  plan.norm_used = norm;
  if (norm > 0.5) plan.z = static_cast<int>(std::ceil(std::log2(norm))) + 2;
  return plan;
}

Matrix psi1_pade(const Matrix& m) {
  check_square(m, "psi1_pade");
  if (m.norm() > 0.5) throw std::domain_error("psi1_pade: Frobenius norm exceeds 1/2");
  const Powers p = powers_of(m);
  return pade_quotient(p, kPsiDen, kPsiDiff);
}

Matrix psi1(const Matrix& m, FlopLedger& ledger, std::string_view label) {
  check_square(m, "psi1");
  return psi1_scaled(m, make_scaling_plan(m.norm()).z, ledger, label);
}

Matrix psi1_scaled(const Matrix& m, int z, FlopLedger& ledger, std::string_view label) {
  check_square(m, "psi1");
  if (z < 0) throw std::invalid_argument("psi1: negative scaling exponent");
  const double scale = std::ldexp(1.0, -z);
  if (m.norm() * scale > 0.5) throw std::domain_error("psi1: scaling exponent too small for the input norm");
  const Index k = m.rows();
  const Matrix s = scale * m;
  const Powers p = powers_of(s);
  ledger.mul(step(label, "powers"), 5 * k, k, k);
  Matrix psi = pade_quotient(p, kPsiDen, kPsiDiff);
  ledger.div(step(label, "quotient"), k, k, k);
  if (z == 0) return psi;

  // ψ₁(M) = 2^-z ψ₁(2^-z M) ∏_{j=z}^{1} (exp(2^-j M) + I), with exp(2^-j M) by squaring.
  Matrix e = pade_quotient(p, kExpNum, kExpDiff, -1.0);
  ledger.div(step(label, "mexp"), k, k, k);
  const Matrix id = Matrix::Identity(k, k);
  for (int j = z; j >= 1; --j) {
    psi = psi * (e + id);
    ledger.mul(step(label, "factors"), k, k, k);
    if (j > 1) {
      e = e * e;
      ledger.mul(step(label, "squarings"), k, k, k);
    }
  }
  return scale * psi;
}

Matrix mexp_small(const Matrix& m) {
  check_square(m, "mexp_small");
  const ScalingPlan plan = make_scaling_plan(m.norm());
  const Powers p = powers_of(std::ldexp(1.0, -plan.z) * m);
  Matrix e = pade_quotient(p, kExpNum, kExpDiff, -1.0);
  for (int j = 0; j < plan.z; ++j) e = e * e;
  return e;
}

namespace {
void check_pair(const LowRankPair& p) {
  if (p.right.rows() != p.left.cols() || p.right.cols() != p.left.rows())
    throw DimensionError("low-rank pair: left must be n×k and right k×n");
}
}  // namespace

LowRankUpdate mexp_lowrank(const LowRankPair& p, FlopLedger& ledger) {
  check_pair(p);
  const Matrix ba = p.right * p.left;
  ledger.mul("BA", p.rank(), p.n(), p.rank());
  return LowRankUpdate{psi1(ba, ledger, "psi1_BA"), p};
}

LowRankUpdate inv_lowrank_update(const LowRankPair& p, FlopLedger& ledger) {
  check_pair(p);
  const Index k = p.rank();
  const Matrix ba = p.right * p.left;
  ledger.mul("BA", k, p.n(), k);
  const Matrix id = Matrix::Identity(k, k);
  Matrix core = -left_divide(id + ba, id);
  ledger.div("solve", k, k, k);
  return LowRankUpdate{std::move(core), p};
}

Matrix densify(const LowRankUpdate& u) {
  const Index n = u.pair.n();
  return Matrix::Identity(n, n) + u.pair.left * u.core * u.pair.right;
}

}  // namespace hmt
