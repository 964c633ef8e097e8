#include "hmt/cp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hmt/random.hpp"

namespace hmt {

void CpShape::validate() const {
  if (dims.size() < 3) throw DimensionError("CP shape needs at least three modes");
  if (r < 1) throw DimensionError("CP rank must be positive");
  for (Index n : dims) {
    if (n < 2) throw DimensionError("CP mode sizes must be at least 2");
    if (r > n) throw DimensionError("CP rank " + std::to_string(r) + " exceeds mode size " + std::to_string(n));
  }
}

bool CpShape::square() const {
  return std::all_of(dims.begin(), dims.end(), [&](Index n) { return n == r; });
}

GroupElement CpStabilizerSample::assemble() const {
  GroupElement h;
  for (size_t i = 0; i < diagonals.size(); ++i) {
    const Index r = diagonals[i].size();
    const Index rest = a[i].rows();
    Matrix f = Matrix::Zero(r + rest, r + rest);
    for (Index j = 0; j < r; ++j) f(j, q.image[static_cast<size_t>(j)]) = diagonals[i](j);
    f.block(0, r, r, rest) = m[i];
    f.block(r, r, rest, rest) = a[i];
    h.factors.push_back(std::move(f));
  }
  return h;
}

QuotientStructure cp_structure(const CpShape& shape) {
  shape.validate();
  QuotientStructure q;
  q.dims = shape.dims;
  const Index d = static_cast<Index>(shape.dims.size());
  const Index r = shape.r;
  q.ks.assign(shape.dims.size(), r);
  q.core = DenseTensor(std::vector<Index>(shape.dims.size(), r));
  for (Index j = 0; j < r; ++j) {
    std::vector<Index> idx(shape.dims.size(), j);
    q.core(idx) = 1.0;
  }
  // Diagonal leading blocks summing to zero: E_jj in mode i against −E_jj in the last mode.
  for (Index i = 0; i + 1 < d; ++i)
    for (Index j = 0; j < r; ++j) {
      std::vector<Matrix> y(shape.dims.size(), Matrix::Zero(r, r));
      y[static_cast<size_t>(i)](j, j) = 1.0;
      y.back()(j, j) = -1.0;
      q.leading_basis.push_back(std::move(y));
    }
  return q;
}

DenseTensor cp_reference_tensor(const CpShape& shape) { return reference_tensor(cp_structure(shape)); }

CpPoint cp_point_from_factors(const std::vector<Matrix>& factors) {
  if (factors.empty()) throw DimensionError("no factor matrices given");
  CpPoint p;
  p.shape.r = factors.front().cols();
  for (const auto& v : factors) {
    if (v.cols() != p.shape.r) throw DimensionError("factor matrices must share the column count r");
    p.shape.dims.push_back(v.rows());
  }
  p.shape.validate();
  for (size_t i = 0; i < factors.size(); ++i) {
    if (condition_number(factors[i]) > 1e8)
      throw RankDeficientError("factor matrix " + std::to_string(i) + " is numerically rank deficient");
    p.modes.push_back(ModeBlocks::from_columns(factors[i]));
  }
  return p;
}

DenseTensor cp_embed(const CpPoint& p) { return embed(cp_structure(p.shape), p.modes); }

CpStabilizerSample cp_stabilizer_sample(const CpShape& shape, std::uint64_t seed) {
  shape.validate();
  Rng rng(seed);
  const size_t d = shape.dims.size();
  const Index r = shape.r;
  std::uniform_int_distribution<int> exponent(-2, 2);
  std::bernoulli_distribution sign(0.5);
  CpStabilizerSample s;
  s.diagonals.assign(d, Vector::Ones(r));
  for (size_t i = 0; i + 1 < d; ++i)
    for (Index j = 0; j < r; ++j) {
      const double v = std::ldexp(1.0, exponent(rng)) * (sign(rng) ? -1.0 : 1.0);
      s.diagonals[i](j) = v;
      s.diagonals[d - 1](j) /= v;
    }
  s.q = Permutation::identity(r);
  std::shuffle(s.q.image.begin(), s.q.image.end(), rng);
  for (size_t i = 0; i < d; ++i) {
    const Index rest = shape.dims[i] - r;
    s.m.push_back(random_normal(rng, r, rest));
    s.a.push_back(rest > 0 ? random_invertible(rng, rest) : Matrix(0, 0));
  }
  return s;
}

std::vector<AlgebraElement> cp_vertical_basis(const CpPoint& p) { return vertical_basis(cp_structure(p.shape), p.modes); }

CpTangent cp_project_horizontal(const CpPoint& p, const AlgebraElement& z) {
  return project_horizontal(cp_structure(p.shape), p.modes, z);
}

CpTangent cp_project_leading_columns(const CpPoint& p, const std::vector<Matrix>& leading) {
  return project_leading_columns(cp_structure(p.shape), p.modes, leading);
}

AlgebraElement cp_project_vertical(const CpShape& shape, const GroupElement& g, const AlgebraElement& v) {
  return project_vertical(cp_structure(shape), g, v);
}

bool cp_is_horizontal(const CpPoint& p, const CpTangent& x, double tol) {
  return is_horizontal(cp_structure(p.shape), p.modes, x, tol);
}

double cp_diagonal_condition_residual(const CpPoint& p, const CpTangent& x) {
  std::vector<Vector> diags;
  for (size_t i = 0; i < p.modes.size(); ++i) {
    const Matrix g = p.modes[i].leading_columns();
    const Matrix a = x.modes[i].leading_columns(p.modes[i].perm);
    const Matrix s = g.transpose() * g;
    const Matrix r = right_divide(g.transpose() * a, s);
    diags.push_back(r.diagonal());
  }
  double worst = 0;
  for (size_t i = 1; i < diags.size(); ++i) worst = std::max(worst, (diags[i] - diags[0]).cwiseAbs().maxCoeff());
  return worst;
}

CpPoint cp_geodesic(const CpPoint& p, const CpTangent& x, double t, GeodesicTrace* trace, const StepOptions& options) {
  validate_tangent(cp_structure(p.shape), p.modes, x);
  return CpPoint{p.shape, geodesic(p.modes, x, t, trace, options)};
}

Rational cp_flop_formula(const CpShape& shape, std::span<const int> z) {
  if (z.size() != shape.dims.size()) throw DimensionError("one scaling exponent per mode is required");
  Rational total;
  for (size_t i = 0; i < z.size(); ++i) total += per_mode_geodesic_flops(shape.dims[i], shape.r, z[i]);
  return total;
}

ReductiveReport cp_reductive_check(const CpShape& shape, int trials, std::uint64_t seed) {
  const QuotientStructure q = cp_structure(shape);
  return reductive_check(
      q, shape.square(), [&](std::uint64_t s) { return cp_stabilizer_sample(shape, s).assemble(); }, trials, seed);
}

}  // namespace hmt
