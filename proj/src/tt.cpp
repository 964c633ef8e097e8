#include "hmt/tt.hpp"

#include <algorithm>
#include <string>

#include "hmt/random.hpp"

namespace hmt {

void TtShape::validate() const {
  if (dims.size() < 3) throw DimensionError("TT shape needs at least three modes");
  if (ranks.size() + 1 != dims.size()) throw DimensionError("TT shape needs d − 1 ranks");
  for (Index s : ranks)
    if (s < 1) throw DimensionError("TT ranks must be positive");
  const auto k = ks();
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 2) throw DimensionError("TT mode sizes must be at least 2");
    if (k[i] > dims[i])
      throw DimensionError("TT mode " + std::to_string(i + 1) + " needs s_{i-1}·s_i = " + std::to_string(k[i]) +
                           " ≤ n_i = " + std::to_string(dims[i]));
  }
}

bool TtShape::square() const { return ks() == dims; }

std::vector<Index> TtShape::bonds() const {
  std::vector<Index> b{1};
  b.insert(b.end(), ranks.begin(), ranks.end());
  b.push_back(1);
  return b;
}

std::vector<Index> TtShape::ks() const {
  const auto b = bonds();
  std::vector<Index> k;
  for (size_t i = 0; i + 1 < b.size(); ++i) k.push_back(b[i] * b[i + 1]);
  return k;
}

GroupElement TtStabilizerSample::assemble() const {
  GroupElement h;
  const size_t d = m.size();
  for (size_t i = 0; i < d; ++i) {
    Matrix left = Matrix::Identity(1, 1);
    Matrix right = Matrix::Identity(1, 1);
    if (i > 0) left = left_divide(a[i - 1], Matrix::Identity(a[i - 1].rows(), a[i - 1].cols())).transpose();
    if (i + 1 < d) right = a[i];
    const Matrix lead = kron(left, right);
    const Index k = lead.rows();
    const Index rest = b[i].rows();
    Matrix f = Matrix::Zero(k + rest, k + rest);
    f.topLeftCorner(k, k) = lead;
    f.topRightCorner(k, rest) = m[i];
    f.bottomRightCorner(rest, rest) = b[i];
    h.factors.push_back(std::move(f));
  }
  return h;
}

QuotientStructure tt_structure(const TtShape& shape) {
  shape.validate();
  QuotientStructure q;
  q.dims = shape.dims;
  q.ks = shape.ks();
  const auto bond = shape.bonds();
  const size_t d = shape.dims.size();

  // Core: 1 at (α_1, (α_1,α_2), …, α_{d−1}) for every bond multi-index α.
  q.core = DenseTensor(q.ks);
  std::vector<Index> alpha(d + 1, 0);
  std::vector<Index> idx(d);
  while (true) {
    for (size_t i = 0; i < d; ++i) idx[i] = alpha[i] * bond[i + 1] + alpha[i + 1];
    q.core(idx) = 1.0;
    size_t j = d - 1;
    while (j >= 1) {
      if (++alpha[j] < bond[j]) break;
      alpha[j] = 0;
      --j;
    }
    if (j == 0) break;
  }

  // Bond j (1 ≤ j ≤ d−1): I⊗K on mode j−1 and −Kᵀ⊗I on mode j.
  for (size_t j = 1; j < d; ++j) {
    const Index s = bond[j];
    for (Index r = 0; r < s; ++r)
      for (Index c = 0; c < s; ++c) {
        std::vector<Matrix> y;
        for (Index k : q.ks) y.push_back(Matrix::Zero(k, k));
        Matrix kmat = Matrix::Zero(s, s);
        kmat(r, c) = 1.0;
        y[j - 1] = kron(Matrix::Identity(bond[j - 1], bond[j - 1]), kmat);
        y[j] = -kron(kmat.transpose(), Matrix::Identity(bond[j + 1], bond[j + 1]));
        q.leading_basis.push_back(std::move(y));
      }
  }
  return q;
}

DenseTensor tt_reference_tensor(const TtShape& shape) { return reference_tensor(tt_structure(shape)); }

TtPoint tt_point_from_cores(const std::vector<Matrix>& cores) {
  if (cores.size() < 3) throw DimensionError("TT point needs at least three cores");
  TtPoint p;
  Index left = 1;
  for (size_t i = 0; i < cores.size(); ++i) {
    p.shape.dims.push_back(cores[i].rows());
    const Index cols = cores[i].cols();
    if (cols % left != 0) throw DimensionError("core " + std::to_string(i) + " column count is not a multiple of its left bond");
    const Index right = cols / left;
    if (i + 1 < cores.size()) {
      p.shape.ranks.push_back(right);
    } else if (right != 1) {
      throw DimensionError("last core must have s_{d-1} columns");
    }
    left = right;
  }
  p.shape.validate();
  for (size_t i = 0; i < cores.size(); ++i) {
    if (condition_number(cores[i]) > 1e8)
      throw RankDeficientError("core " + std::to_string(i) + " is numerically rank deficient");
    p.modes.push_back(ModeBlocks::from_columns(cores[i]));
  }
  return p;
}

DenseTensor tt_embed(const TtPoint& p) { return embed(tt_structure(p.shape), p.modes); }

TtStabilizerSample tt_stabilizer_sample(const TtShape& shape, std::uint64_t seed) {
  shape.validate();
  Rng rng(seed);
  TtStabilizerSample s;
  for (Index r : shape.ranks) s.a.push_back(random_invertible(rng, r, 5.0));
  const auto k = shape.ks();
  for (size_t i = 0; i < shape.dims.size(); ++i) {
    const Index rest = shape.dims[i] - k[i];
    s.m.push_back(random_normal(rng, k[i], rest));
    s.b.push_back(rest > 0 ? random_invertible(rng, rest) : Matrix(0, 0));
  }
  return s;
}

Matrix tt_trace_first(const Matrix& l, Index p, Index q) {
  if (l.rows() != p * q || l.cols() != p * q) throw DimensionError("partial trace: matrix size mismatch");
  Matrix out = Matrix::Zero(q, q);
  for (Index a = 0; a < p; ++a) out += l.block(a * q, a * q, q, q);
  return out;
}

Matrix tt_trace_second(const Matrix& l, Index p, Index q) {
  if (l.rows() != p * q || l.cols() != p * q) throw DimensionError("partial trace: matrix size mismatch");
  Matrix out(p, p);
  for (Index a = 0; a < p; ++a)
    for (Index b = 0; b < p; ++b) out(a, b) = l.block(a * q, b * q, q, q).trace();
  return out.transpose();
}

double tt_m_residual(const TtShape& shape, const AlgebraElement& x) {
  shape.validate();
  const size_t d = shape.dims.size();
  if (x.order() != static_cast<Index>(d)) throw DimensionError("wrong number of modes");
  const auto k = shape.ks();
  const auto bond = shape.bonds();
  double worst = 0;
  std::vector<Matrix> lead;
  for (size_t i = 0; i < d; ++i) {
    if (x.factors[i].rows() != shape.dims[i] || x.factors[i].cols() != shape.dims[i])
      throw DimensionError("factor has the wrong size");
    worst = std::max(worst, x.factors[i].rightCols(shape.dims[i] - k[i]).norm());
    lead.push_back(x.factors[i].topLeftCorner(k[i], k[i]));
  }
  for (size_t j = 1; j < d; ++j) {
    const Matrix lhs = tt_trace_first(lead[j - 1], bond[j - 1], bond[j]);
    const Matrix rhs = tt_trace_second(lead[j], bond[j], bond[j + 1]);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

bool tt_m_membership(const TtShape& shape, const AlgebraElement& x, double tol) {
  return tt_m_residual(shape, x) <= tol * std::max(1.0, frobenius_norm(x));
}

std::vector<AlgebraElement> tt_vertical_basis(const TtPoint& p) { return vertical_basis(tt_structure(p.shape), p.modes); }

TtTangent tt_project_horizontal(const TtPoint& p, const AlgebraElement& z) {
  return project_horizontal(tt_structure(p.shape), p.modes, z);
}

TtTangent tt_project_leading_columns(const TtPoint& p, const std::vector<Matrix>& leading) {
  return project_leading_columns(tt_structure(p.shape), p.modes, leading);
}

AlgebraElement tt_project_vertical(const TtShape& shape, const GroupElement& g, const AlgebraElement& v) {
  return project_vertical(tt_structure(shape), g, v);
}

bool tt_is_horizontal(const TtPoint& p, const TtTangent& x, double tol) {
  return is_horizontal(tt_structure(p.shape), p.modes, x, tol);
}

TtPoint tt_geodesic(const TtPoint& p, const TtTangent& x, double t, GeodesicTrace* trace, const StepOptions& options) {
  validate_tangent(tt_structure(p.shape), p.modes, x);
  return TtPoint{p.shape, geodesic(p.modes, x, t, trace, options)};
}

Rational tt_flop_formula(const TtShape& shape, std::span<const int> z) {
  shape.validate();
  if (z.size() != shape.dims.size()) throw DimensionError("one scaling exponent per mode is required");
  const auto k = shape.ks();
  Rational total;
  for (size_t i = 0; i < z.size(); ++i) total += per_mode_geodesic_flops(shape.dims[i], k[i], z[i]);
  return total;
}

ReductiveReport tt_reductive_check(const TtShape& shape, int trials, std::uint64_t seed) {
  const QuotientStructure q = tt_structure(shape);
  return reductive_check(
      q, shape.square(), [&](std::uint64_t s) { return tt_stabilizer_sample(shape, s).assemble(); }, trials, seed);
}

}  // namespace hmt
