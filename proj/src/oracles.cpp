#include "hmt/oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace hmt::oracle {

namespace {

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD operator+(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  const DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

DD operator*(DD a, DD b) {
  const double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p, e);
}

DD operator*(DD a, double b) { return a * DD{b, 0.0}; }

DD operator/(DD a, double b) {
  const double q1 = a.hi / b;
  const DD prod = DD{q1, 0.0} * b;
  const DD rem = a + DD{-prod.hi, -prod.lo};
  const double q2 = rem.hi / b;
  return quick_two_sum(q1, q2);
}

struct DDMatrix {
  Index n = 0;
  std::vector<DD> v;

  explicit DDMatrix(Index size) : n(size), v(static_cast<size_t>(size * size)) {}
  static DDMatrix identity(Index size) {
    DDMatrix m(size);
    for (Index i = 0; i < size; ++i) m(i, i) = DD{1.0, 0.0};
    return m;
  }
  static DDMatrix from(const Matrix& a) {
    DDMatrix m(a.rows());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) m(i, j) = DD{a(i, j), 0.0};
    return m;
  }
  DD& operator()(Index i, Index j) { return v[static_cast<size_t>(i * n + j)]; }
  const DD& operator()(Index i, Index j) const { return v[static_cast<size_t>(i * n + j)]; }
  Matrix rounded() const {
    Matrix out(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) out(i, j) = (*this)(i, j).hi + (*this)(i, j).lo;
    return out;
  }
};

DDMatrix operator*(const DDMatrix& a, const DDMatrix& b) {
  DDMatrix out(a.n);
  for (Index i = 0; i < a.n; ++i)
    for (Index j = 0; j < a.n; ++j) {
      DD s;
      for (Index l = 0; l < a.n; ++l) s = s + a(i, l) * b(l, j);
      out(i, j) = s;
    }
  return out;
}

DDMatrix operator+(const DDMatrix& a, const DDMatrix& b) {
  DDMatrix out(a.n);
  for (size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] + b.v[i];
  return out;
}

DDMatrix scaled(const DDMatrix& a, double divisor) {
  DDMatrix out(a.n);
  for (size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] / divisor;
  return out;
}

/// Σ_{j<N} m^j/(j+1)! in double-double.
DDMatrix series_dd(const DDMatrix& m, int terms) {
  DDMatrix term = DDMatrix::identity(m.n);
  DDMatrix sum = term;
  for (int j = 1; j < terms; ++j) {
    term = scaled(term * m, static_cast<double>(j + 1));
    sum = sum + term;
  }
  return sum;
}

void check_square(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("oracle: matrix must be square");
}

}  // namespace

void OracleConfig::validate() const {
  if (series_terms < 20) throw std::invalid_argument("series_terms must be at least 20");
  if (!(fd_step > 0.0 && fd_step <= 1e-3)) throw std::invalid_argument("fd_step must lie in (0, 1e-3]");
}

SeriesResult psi1_series(const Matrix& m, const OracleConfig& cfg) {
  cfg.validate();
  check_square(m);
  const double norm = m.norm();
  if (norm > 4.0) throw std::domain_error("psi1_series: Frobenius norm exceeds 4");
  SeriesResult out;
  out.value = series_dd(DDMatrix::from(m), cfg.series_terms).rounded();
  const int n = cfg.series_terms;
  double bound = 1.0;
  for (int j = 1; j <= n; ++j) bound *= norm / static_cast<double>(j + 1);
  // bound = ‖m‖^N/(N+1)!; the remaining terms form a dominated geometric series.
  out.tail_bound = bound / (1.0 - norm / static_cast<double>(n + 2));
  return out;
}

Matrix psi1_doubling(const Matrix& m, const OracleConfig& cfg) {
  cfg.validate();
  check_square(m);
  const double norm = m.norm();
  int s = 0;
  while (std::ldexp(norm, -s) > 0.5) ++s;
  const DDMatrix x = DDMatrix::from(std::ldexp(1.0, -s) * m);
  DDMatrix psi = series_dd(x, cfg.series_terms);
  DDMatrix e = DDMatrix::identity(m.rows()) + x * psi;
  const DDMatrix id = DDMatrix::identity(m.rows());
  for (int j = 0; j < s; ++j) {
    psi = scaled(psi * (e + id), 2.0);
    e = e * e;
  }
  return psi.rounded();
}

Matrix mexp_dense(const Matrix& m) {
  check_square(m);
  const Eigen::MatrixXd a = m;
  return a.exp();
}

GroupElement dense_geodesic(const GroupElement& g, const AlgebraElement& x, double t) {
  if (g.order() != x.order()) throw DimensionError("dense_geodesic: orders differ");
  GroupElement out;
  for (size_t i = 0; i < g.factors.size(); ++i) {
    const Eigen::MatrixXd gi = g.factors[i];
    const Eigen::MatrixXd xi = x.factors[i];
    // W = t·x·g⁻¹ via gᵀ Wᵀ = t xᵀ.
    const Eigen::MatrixXd w = t * Eigen::FullPivLU<Eigen::MatrixXd>(gi.transpose()).solve(xi.transpose()).transpose();
    const Eigen::MatrixXd wt = w.transpose();
    out.factors.push_back(mexp_dense(w - wt) * mexp_dense(wt) * g.factors[i]);
  }
  return out;
}

namespace {

std::vector<Index> shape_of(const std::vector<Matrix>& factors) {
  std::vector<Index> shape;
  for (const auto& f : factors) shape.push_back(f.rows());
  return shape;
}

/// Calls fn(idx) for every multi-index of `shape` in row-major order.
template <typename Fn>
void for_each_index(const std::vector<Index>& shape, Fn fn) {
  std::vector<Index> idx(shape.size(), 0);
  while (true) {
    fn(idx);
    size_t j = shape.size();
    while (j > 0) {
      --j;
      if (++idx[j] < shape[j]) break;
      idx[j] = 0;
      if (j == 0) return;
    }
    if (shape.empty()) return;
  }
}

}  // namespace

DenseTensor contract_cp(const std::vector<Matrix>& factors) {
  if (factors.empty()) throw DimensionError("contract_cp: no factors");
  const Index r = factors.front().cols();
  DenseTensor t(shape_of(factors));
  for_each_index(t.shape(), [&](const std::vector<Index>& idx) {
    double s = 0;
    for (Index j = 0; j < r; ++j) {
      double p = 1;
      for (size_t m = 0; m < factors.size(); ++m) p *= factors[m](idx[m], j);
      s += p;
    }
    t(idx) = s;
  });
  return t;
}

DenseTensor contract_tucker(const DenseTensor& core, const std::vector<Matrix>& factors) {
  if (static_cast<Index>(factors.size()) != core.order()) throw DimensionError("contract_tucker: factor count");
  DenseTensor t(shape_of(factors));
  for_each_index(t.shape(), [&](const std::vector<Index>& idx) {
    double s = 0;
    for_each_index(core.shape(), [&](const std::vector<Index>& a) {
      double p = core(a);
      for (size_t m = 0; m < factors.size() && p != 0.0; ++m) p *= factors[m](idx[m], a[m]);
      s += p;
    });
    t(idx) = s;
  });
  return t;
}

DenseTensor contract_tt(const std::vector<Matrix>& cores) {
  if (cores.empty()) throw DimensionError("contract_tt: no cores");
  std::vector<Index> bonds{1};
  for (const auto& c : cores) bonds.push_back(c.cols() / bonds.back());
  if (bonds.back() != 1) throw DimensionError("contract_tt: last core must close the chain");
  DenseTensor t(shape_of(cores));
  for_each_index(t.shape(), [&](const std::vector<Index>& idx) {
    // Row vector over the current bond, multiplied core by core.
    std::vector<double> v{1.0};
    for (size_t m = 0; m < cores.size(); ++m) {
      const Index left = bonds[m], right = bonds[m + 1];
      std::vector<double> next(static_cast<size_t>(right), 0.0);
      for (Index a = 0; a < left; ++a)
        for (Index b = 0; b < right; ++b) next[static_cast<size_t>(b)] += v[static_cast<size_t>(a)] * cores[m](idx[m], a * right + b);
      v = std::move(next);
    }
    t(idx) = v[0];
  });
  return t;
}

Index lu_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(tol);
  return lu.rank();
}

std::vector<Index> multilinear_rank(const DenseTensor& t, double tol) {
  std::vector<Index> ranks;
  for (Index mode = 0; mode < t.order(); ++mode) {
    const Index n = t.dim(mode);
    Matrix m(n, t.size() / n);
    std::vector<Index> col_count(static_cast<size_t>(n), 0);
    for_each_index(t.shape(), [&](const std::vector<Index>& idx) {
      const Index row = idx[static_cast<size_t>(mode)];
      m(row, col_count[static_cast<size_t>(row)]++) = t(idx);
    });
    ranks.push_back(lu_rank(m, tol));
  }
  return ranks;
}

std::pair<double, std::vector<Index>> max_volume_rows(const Matrix& m) {
  const Index n = m.rows(), r = m.cols();
  if (n > 12 || r > n) throw DimensionError("max_volume_rows: n ≤ 12 and r ≤ n required");
  double best = -1;
  std::vector<Index> best_rows;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != r) continue;
    std::vector<Index> rows;
    for (Index i = 0; i < n; ++i)
      if (mask & (1u << i)) rows.push_back(i);
    Eigen::MatrixXd sub(r, r);
    for (Index i = 0; i < r; ++i) sub.row(i) = m.row(rows[static_cast<size_t>(i)]);
    const double vol = std::abs(sub.determinant());
    if (vol > best) {
      best = vol;
      best_rows = rows;
    }
  }
  return {best, best_rows};
}

}  // namespace hmt::oracle
