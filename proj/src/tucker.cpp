#include "hmt/tucker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmt/random.hpp"

namespace hmt {

namespace {

std::vector<Index> trailing(const std::vector<Index>& ranks) { return {ranks.begin() + 1, ranks.end()}; }

Matrix kron_all(const std::vector<Matrix>& factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

std::string window_text(const std::vector<Index>& ranks) {
  const auto tail = trailing(ranks);
  const auto [lo, hi] = tucker_rank_window(tail);
  return "admissible window for t_1 given the trailing ranks is [" + std::to_string(lo) + ", " + std::to_string(hi) +
         "]; only t_1 = " + std::to_string(hi) + " (the product of the trailing ranks) is supported";
}

}  // namespace

void TuckerShape::validate() const {
  if (dims.size() < 3) throw DimensionError("Tucker shape needs at least three modes");
  if (ranks.size() != dims.size()) throw DimensionError("Tucker shape needs one rank per mode");
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 2) throw DimensionError("Tucker mode sizes must be at least 2");
    if (ranks[i] < 1 || ranks[i] > dims[i])
      throw DimensionError("Tucker rank " + std::to_string(ranks[i]) + " is not in [1, " + std::to_string(dims[i]) + "]");
  }
  Index product = 1;
  for (size_t i = 1; i < ranks.size(); ++i) product *= ranks[i];
  if (ranks[0] != product)
    throw DimensionError("Tucker rank t_1 = " + std::to_string(ranks[0]) + " is unsupported: " + window_text(ranks));
}

bool TuckerShape::square() const { return dims == ranks; }

GroupElement TuckerStabilizerSample::assemble() const {
  GroupElement h;
  for (size_t i = 0; i < m.size(); ++i) {
    Matrix lead;
    if (i == 0) {
      std::vector<Matrix> inv_t;
      for (size_t j = 1; j < a.size(); ++j)
        inv_t.push_back(left_divide(a[j], Matrix::Identity(a[j].rows(), a[j].cols())).transpose());
      lead = kron_all(inv_t);
    } else {
      lead = a[i];
    }
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

std::pair<Index, Index> tucker_rank_window(std::span<const Index> trailing_ranks) {
  Index p = 1;
  Index s = 0;
  for (Index t : trailing_ranks) {
    p *= t;
    s += t * t;
  }
  const double disc = static_cast<double>(p) * static_cast<double>(p) - 4.0 * static_cast<double>(s);
  if (disc < 0) return {1, p};
  Index lo = std::max<Index>(1, static_cast<Index>(std::floor((static_cast<double>(p) + std::sqrt(disc)) / 2.0)) - 1);
  while (lo * lo - p * lo + s < 0 || 2 * lo < p) ++lo;
  return {lo, p};
}

QuotientStructure tucker_structure(const TuckerShape& shape) {
  shape.validate();
  QuotientStructure q;
  q.dims = shape.dims;
  q.ks = shape.ranks;
  const Index t1 = shape.ranks[0];
  q.core = fold(Matrix::Identity(t1, t1), shape.ranks, 0);
  const auto tail = trailing(shape.ranks);
  for (size_t f = 0; f < tail.size(); ++f) {
    const Index t = tail[f];
    for (Index r = 0; r < t; ++r)
      for (Index c = 0; c < t; ++c) {
        std::vector<Matrix> y;
        for (Index k : shape.ranks) y.push_back(Matrix::Zero(k, k));
        Matrix kmat = Matrix::Zero(t, t);
        kmat(r, c) = 1.0;
        std::vector<Matrix> parts;
        for (size_t j = 0; j < tail.size(); ++j) parts.push_back(j == f ? Matrix(kmat.transpose()) : Matrix::Identity(tail[j], tail[j]));
        y[0] = -kron_all(parts);
        y[f + 1] = kmat;
        q.leading_basis.push_back(std::move(y));
      }
  }
  return q;
}

DenseTensor tucker_reference_tensor(const TuckerShape& shape) { return reference_tensor(tucker_structure(shape)); }

TuckerPoint tucker_point_from_decomposition(const DenseTensor& core, const std::vector<Matrix>& factors) {
  if (static_cast<Index>(factors.size()) != core.order()) throw DimensionError("one factor per core mode is required");
  TuckerPoint p;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].cols() != core.dim(static_cast<Index>(i)))
      throw DimensionError("factor " + std::to_string(i) + " columns do not match the core");
    p.shape.dims.push_back(factors[i].rows());
    p.shape.ranks.push_back(factors[i].cols());
  }
  p.shape.validate();
  const Matrix c1 = unfold(core, 0);
  if (condition_number(c1) > 1e8) throw RankDeficientError("mode-1 unfolding of the core is singular");
  for (size_t i = 0; i < factors.size(); ++i) {
    if (condition_number(factors[i]) > 1e8)
      throw RankDeficientError("factor matrix " + std::to_string(i) + " is numerically rank deficient");
    p.modes.push_back(ModeBlocks::from_columns(i == 0 ? Matrix(factors[0] * c1) : factors[i]));
  }
  return p;
}

DenseTensor tucker_embed(const TuckerPoint& p) { return embed(tucker_structure(p.shape), p.modes); }

TuckerStabilizerSample tucker_stabilizer_sample(const TuckerShape& shape, std::uint64_t seed) {
  shape.validate();
  Rng rng(seed);
  TuckerStabilizerSample s;
  s.a.emplace_back();
  for (size_t i = 1; i < shape.ranks.size(); ++i) s.a.push_back(random_invertible(rng, shape.ranks[i], 5.0));
  for (size_t i = 0; i < shape.dims.size(); ++i) {
    const Index rest = shape.dims[i] - shape.ranks[i];
    s.m.push_back(random_normal(rng, shape.ranks[i], rest));
    s.b.push_back(rest > 0 ? random_invertible(rng, rest) : Matrix(0, 0));
  }
  return s;
}

Matrix tucker_partial_trace(const Matrix& l1, std::span<const Index> trailing_ranks, Index factor) {
  const Index count = static_cast<Index>(trailing_ranks.size());
  if (factor < 0 || factor >= count) throw DimensionError("partial trace factor out of range");
  Index total = 1;
  for (Index t : trailing_ranks) total *= t;
  if (l1.rows() != total || l1.cols() != total) throw DimensionError("partial trace: matrix size mismatch");
  // Stride of `factor` in the row-major flattening.
  Index stride = 1;
  for (Index j = factor + 1; j < count; ++j) stride *= trailing_ranks[static_cast<size_t>(j)];
  const Index t = trailing_ranks[static_cast<size_t>(factor)];
  Matrix m = Matrix::Zero(t, t);
  for (Index row = 0; row < total; ++row) {
    const Index digit = (row / stride) % t;
    const Index base = row - digit * stride;
    for (Index c = 0; c < t; ++c) m(digit, c) += l1(row, base + c * stride);
  }
  return m.transpose();
}

double tucker_m_residual(const TuckerShape& shape, const AlgebraElement& x) {
  shape.validate();
  if (x.order() != static_cast<Index>(shape.dims.size())) throw DimensionError("wrong number of modes");
  double worst = 0;
  for (size_t i = 0; i < shape.dims.size(); ++i) {
    if (x.factors[i].rows() != shape.dims[i] || x.factors[i].cols() != shape.dims[i])
      throw DimensionError("factor has the wrong size");
    worst = std::max(worst, x.factors[i].rightCols(shape.dims[i] - shape.ranks[i]).norm());
  }
  const auto tail = trailing(shape.ranks);
  const Matrix l1 = x.factors[0].topLeftCorner(shape.ranks[0], shape.ranks[0]);
  for (size_t f = 0; f < tail.size(); ++f) {
    const Matrix li = x.factors[f + 1].topLeftCorner(tail[f], tail[f]);
    worst = std::max(worst, (li - tucker_partial_trace(l1, tail, static_cast<Index>(f))).norm());
  }
  return worst;
}

bool tucker_m_membership(const TuckerShape& shape, const AlgebraElement& x, double tol) {
  return tucker_m_residual(shape, x) <= tol * std::max(1.0, frobenius_norm(x));
}

std::vector<AlgebraElement> tucker_vertical_basis(const TuckerPoint& p) {
  return vertical_basis(tucker_structure(p.shape), p.modes);
}

TuckerTangent tucker_project_horizontal(const TuckerPoint& p, const AlgebraElement& z) {
  return project_horizontal(tucker_structure(p.shape), p.modes, z);
}

TuckerTangent tucker_project_leading_columns(const TuckerPoint& p, const std::vector<Matrix>& leading) {
  return project_leading_columns(tucker_structure(p.shape), p.modes, leading);
}

AlgebraElement tucker_project_vertical(const TuckerShape& shape, const GroupElement& g, const AlgebraElement& v) {
  return project_vertical(tucker_structure(shape), g, v);
}

bool tucker_is_horizontal(const TuckerPoint& p, const TuckerTangent& x, double tol) {
  return is_horizontal(tucker_structure(p.shape), p.modes, x, tol);
}

TuckerPoint tucker_geodesic(const TuckerPoint& p, const TuckerTangent& x, double t, GeodesicTrace* trace,
                            const StepOptions& options) {
  validate_tangent(tucker_structure(p.shape), p.modes, x);
  return TuckerPoint{p.shape, geodesic(p.modes, x, t, trace, options)};
}

Rational tucker_flop_formula(const TuckerShape& shape, std::span<const int> z) {
  shape.validate();
  if (z.size() != shape.dims.size()) throw DimensionError("one scaling exponent per mode is required");
  Rational total;
  for (size_t i = 0; i < z.size(); ++i) total += per_mode_geodesic_flops(shape.dims[i], shape.ranks[i], z[i]);
  return total;
}

ReductiveReport tucker_reductive_check(const TuckerShape& shape, int trials, std::uint64_t seed) {
  const QuotientStructure q = tucker_structure(shape);
  return reductive_check(
      q, shape.square(), [&](std::uint64_t s) { return tucker_stabilizer_sample(shape, s).assemble(); }, trials, seed);
}

}  // namespace hmt
