#include "hmt/gl.hpp"

#include <algorithm>

#include "hmt/psi.hpp"

namespace hmt {

namespace {

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

void check_same_orders(const GroupElement& g, const AlgebraElement& x) {
  if (g.order() != x.order()) throw DimensionError("group element and algebra element orders differ");
  for (size_t i = 0; i < g.factors.size(); ++i)
    if (g.factors[i].rows() != x.factors[i].rows() || g.factors[i].cols() != x.factors[i].cols())
      throw DimensionError("group and algebra factor sizes differ");
}

}  // namespace

Matrix ModeBlocks::leading_columns() const { return perm.unapply(stack(g11, g21)); }

ModeBlocks ModeBlocks::from_columns(const Matrix& columns, double tol) {
  ModeBlocks b;
  b.perm = select_submatrix(columns, tol);
  const Matrix permuted = b.perm.apply(columns);
  const Index k = columns.cols();
  b.g11 = permuted.topRows(k);
  b.g21 = permuted.bottomRows(columns.rows() - k);
  return b;
}

Matrix HorizontalBlocks::leading_columns(const Permutation& perm) const { return perm.unapply(stack(x11, x21)); }

double euclidean_inner(const AlgebraElement& z, const AlgebraElement& w) {
  if (z.order() != w.order()) throw DimensionError("euclidean_inner: profiles differ");
  double s = 0;
  for (size_t i = 0; i < z.factors.size(); ++i) {
    if (z.factors[i].rows() != w.factors[i].rows() || z.factors[i].cols() != w.factors[i].cols())
      throw DimensionError("euclidean_inner: profiles differ");
    s += z.factors[i].cwiseProduct(w.factors[i]).sum();
  }
  return s;
}

double right_invariant_inner(const GroupElement& g, const AlgebraElement& x, const AlgebraElement& y) {
  check_same_orders(g, x);
  check_same_orders(g, y);
  double s = 0;
  for (size_t i = 0; i < g.factors.size(); ++i)
    s += right_divide(x.factors[i], g.factors[i]).cwiseProduct(right_divide(y.factors[i], g.factors[i])).sum();
  return s;
}

GroupElement inverse(const GroupElement& g) {
  GroupElement out;
  for (const auto& f : g.factors) out.factors.push_back(left_divide(f, Matrix::Identity(f.rows(), f.cols())));
  return out;
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (a.order() != b.order()) throw DimensionError("group elements have different orders");
  GroupElement out;
  for (size_t i = 0; i < a.factors.size(); ++i) out.factors.push_back(a.factors[i] * b.factors[i]);
  return out;
}

AlgebraElement right_translate(const AlgebraElement& x, const GroupElement& h) {
  if (x.order() != h.order()) throw DimensionError("right_translate: orders differ");
  AlgebraElement out;
  for (size_t i = 0; i < x.factors.size(); ++i) out.factors.push_back(x.factors[i] * h.factors[i]);
  return out;
}

GroupElement gl_exp(const GroupElement& g, const AlgebraElement& x, double t) {
  check_same_orders(g, x);
  GroupElement out;
  for (size_t i = 0; i < g.factors.size(); ++i) {
    const Matrix w = t * right_divide(x.factors[i], g.factors[i]);
    const Matrix wt = w.transpose();
    out.factors.push_back(mexp_small(w - wt) * mexp_small(wt) * g.factors[i]);
  }
  return out;
}

AlgebraElement adjoint(const GroupElement& h, const AlgebraElement& x) {
  check_same_orders(h, x);
  AlgebraElement out;
  for (size_t i = 0; i < h.factors.size(); ++i)
    out.factors.push_back(right_divide(h.factors[i] * x.factors[i], h.factors[i]));
  return out;
}

Matrix gamma12(const ModeBlocks& blocks, FlopLedger& ledger) {
  const Index n = blocks.n();
  const Index k = blocks.k();
  if (blocks.g11.rows() != k || blocks.g21.cols() != k) throw DimensionError("gamma12: malformed blocks");
  const Matrix id = Matrix::Identity(k, k);
  const Matrix c21 = right_divide(blocks.g21, blocks.g11);
  ledger.div("gamma12.divide_g21_by_g11", n, k, k);
  const Matrix bracket = c21.transpose() * c21;
  ledger.mul("gamma12.bracket", k, n, k);
  const Matrix inv = left_divide(id + bracket, id);
  ledger.div("gamma12.invert", k, k, k);
  const Matrix fraction = bracket * inv;
  ledger.mul("gamma12.fraction", k, k, k);
  const Matrix lead = left_divide(blocks.g11, id - fraction);
  ledger.div("gamma12.divide_by_g11", k, k, k);
  Matrix out = lead * c21.transpose();
  ledger.mul("gamma12.multiply", k, k, n);
  return out;
}

StepResult lowrank_geodesic_step(const ModeBlocks& blocks, const HorizontalBlocks& tangent, double t,
                                 FlopLedger& ledger, const StepOptions& options) {
  const Index n = blocks.n();
  const Index k = blocks.k();
  if (tangent.x11.rows() != k || tangent.x11.cols() != k || tangent.x21.rows() != n - k || tangent.x21.cols() != k)
    throw DimensionError("lowrank_geodesic_step: tangent blocks do not match the point");
  const Matrix id = Matrix::Identity(k, k);

  // Horizontal velocity t·X·g⁻¹ = A·B with A = t·[x11; x21], B = [(I − Γ g21) g11⁻¹, Γ].
  const Matrix g = stack(blocks.g11, blocks.g21);
  const Matrix a = t * stack(tangent.x11, tangent.x21);
  const Matrix gam = gamma12(blocks, ledger);
  Matrix b(k, n);
  const Matrix gam_g21 = gam * blocks.g21;
  ledger.mul("build_B.multiply", k, n, k);
  b.leftCols(k) = right_divide(id - gam_g21, blocks.g11);
  ledger.div("build_B.divide", k, k, k);
  b.rightCols(n - k) = gam;

  const Matrix ba = b * a;
  ledger.mul("BA", k, n, k);

  // W − Wᵀ = A′·B′ with A′ = [A, −Bᵀ] (n×2k) and B′ = [B; Aᵀ] (2k×n).
  Matrix ap(n, 2 * k);
  ap << a, -b.transpose();
  Matrix bp(2 * k, n);
  bp << b, a.transpose();
  const Matrix bpap = bp * ap;
  ledger.mul("BpAp", 2 * k, n, 2 * k);

  const int z = std::max({options.min_z, make_scaling_plan(ba.norm()).z, make_scaling_plan(bpap.norm()).z});
  const Matrix psi = psi1_scaled(ba, z, ledger, "psi1_BA");
  const Matrix psip = psi1_scaled(bpap, z, ledger, "psi1_BpAp");

  // exp(W − Wᵀ)·exp(Wᵀ)·G = G + P·G + Q·G + Q·P·G with P = Bᵀψᵀ Aᵀ, Q = A′ψ′B′.
  const Matrix at_g = a.transpose() * g;
  ledger.mul("term2.AtG", k, n, k);
  const Matrix y = psi.transpose() * at_g;
  ledger.mul("term2.psi", k, k, k);
  const Matrix term2 = b.transpose() * y;
  ledger.mul("term2.Bt", n, k, k);

  const Matrix bp_g = bp * g;
  ledger.mul("term3.BpG", 2 * k, n, k);
  const Matrix term3 = ap * (psip * bp_g);
  ledger.mul("term3.psi", 2 * k, 2 * k, k);
  ledger.mul("term3.Ap", n, 2 * k, k);

  // B′Bᵀ = [B Bᵀ; (BA)ᵀ]; the lower half is already known.
  Matrix bp_bt(2 * k, k);
  bp_bt.topRows(k) = b * b.transpose();
  ledger.mul("term4.BBt", k, n, k);
  bp_bt.bottomRows(k) = ba.transpose();
  const Matrix c = bp_bt * y;
  ledger.mul("term4.CY", 2 * k, k, k);
  const Matrix term4 = ap * (psip * c);
  ledger.mul("term4.psi", 2 * k, 2 * k, k);
  ledger.mul("term4.Ap", n, 2 * k, k);

  const Matrix columns = g + term2 + term3 + term4;
  ledger.auxiliary("rereduce", Rational(n * k * k));
  StepResult result;
  result.blocks = ModeBlocks::from_columns(blocks.perm.unapply(columns), 0.0);
  result.z = z;
  return result;
}

Matrix densify(const ModeBlocks& blocks) {
  const Index n = blocks.n();
  const Index k = blocks.k();
  Matrix f = Matrix::Zero(n, n);
  f.block(0, 0, k, k) = blocks.g11;
  f.block(k, 0, n - k, k) = blocks.g21;
  f.block(k, k, n - k, n - k).setIdentity();
  return blocks.perm.unapply(f);
}

Matrix densify(const ModeBlocks& blocks, const HorizontalBlocks& tangent) {
  const Index n = blocks.n();
  const Index k = blocks.k();
  Matrix f(n, n);
  f.block(0, 0, k, k) = tangent.x11;
  f.block(k, 0, n - k, k) = tangent.x21;
  f.block(0, k, k, n - k) = tangent.x11 * tangent.gamma12;
  f.block(k, k, n - k, n - k) = tangent.x21 * tangent.gamma12;
  return blocks.perm.unapply(f);
}

}  // namespace hmt
