#include "hmt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hmt {

namespace {

Index product(std::span<const Index> v) {
  Index p = 1;
  for (Index x : v) p *= x;
  return p;
}

void check_shape(const std::vector<Index>& shape) {
  if (shape.empty()) throw DimensionError("tensor must have at least one mode");
  for (Index n : shape)
    if (n < 1) throw DimensionError("tensor mode sizes must be positive");
}

void check_mode(const DenseTensor& t, Index mode) {
  if (mode < 0 || mode >= t.order()) throw DimensionError("mode index out of range");
}

}  // namespace

DenseTensor::DenseTensor(std::vector<Index> shape) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(static_cast<size_t>(product(shape_)), 0.0);
}

DenseTensor::DenseTensor(std::vector<Index> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  check_shape(shape_);
  if (static_cast<Index>(data_.size()) != product(shape_))
    throw DimensionError("tensor data length does not match its shape");
}

Index DenseTensor::flat_index(std::span<const Index> idx) const {
  if (static_cast<Index>(idx.size()) != order()) throw DimensionError("wrong number of tensor indices");
  Index flat = 0;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= shape_[i]) throw DimensionError("tensor index out of range");
    flat = flat * shape_[i] + idx[i];
  }
  return flat;
}

double DenseTensor::norm() const {
  double s = 0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("tensor shapes differ");
  std::vector<double> out(a.data().begin(), a.data().end());
  for (size_t i = 0; i < out.size(); ++i) out[i] -= b.data()[i];
  return DenseTensor(a.shape(), std::move(out));
}

Permutation Permutation::identity(Index n) {
  Permutation p;
  p.image.resize(static_cast<size_t>(n));
  std::iota(p.image.begin(), p.image.end(), Index{0});
  return p;
}

bool Permutation::is_identity() const {
  for (size_t i = 0; i < image.size(); ++i)
    if (image[i] != static_cast<Index>(i)) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.image.resize(image.size());
  for (size_t i = 0; i < image.size(); ++i) inv.image[static_cast<size_t>(image[i])] = static_cast<Index>(i);
  return inv;
}

Matrix Permutation::apply(const Matrix& m) const {
  if (m.rows() != size()) throw DimensionError("permutation size does not match row count");
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < size(); ++i) out.row(i) = m.row(image[static_cast<size_t>(i)]);
  return out;
}

Matrix Permutation::unapply(const Matrix& m) const {
  if (m.rows() != size()) throw DimensionError("permutation size does not match row count");
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < size(); ++i) out.row(image[static_cast<size_t>(i)]) = m.row(i);
  return out;
}

Matrix Permutation::matrix() const {
  Matrix p = Matrix::Zero(size(), size());
  for (Index i = 0; i < size(); ++i) p(i, image[static_cast<size_t>(i)]) = 1.0;
  return p;
}

void Permutation::validate() const {
  std::vector<bool> seen(image.size(), false);
  for (Index v : image) {
    if (v < 0 || v >= size() || seen[static_cast<size_t>(v)])
      throw DimensionError("index list is not a permutation");
    seen[static_cast<size_t>(v)] = true;
  }
}

GroupElement identity_element(std::span<const Index> dims) {
  GroupElement g;
  for (Index n : dims) g.factors.push_back(Matrix::Identity(n, n));
  return g;
}

AlgebraElement zero_algebra(std::span<const Index> dims) {
  AlgebraElement x;
  for (Index n : dims) x.factors.push_back(Matrix::Zero(n, n));
  return x;
}

namespace {
void check_profiles(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.order() != b.order()) throw DimensionError("algebra elements have different orders");
  for (size_t i = 0; i < a.factors.size(); ++i)
    if (a.factors[i].rows() != b.factors[i].rows() || a.factors[i].cols() != b.factors[i].cols())
      throw DimensionError("algebra element factor sizes differ");
}
}  // namespace

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  check_profiles(a, b);
  AlgebraElement out = a;
  for (size_t i = 0; i < out.factors.size(); ++i) out.factors[i] += b.factors[i];
  return out;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  check_profiles(a, b);
  AlgebraElement out = a;
  for (size_t i = 0; i < out.factors.size(); ++i) out.factors[i] -= b.factors[i];
  return out;
}

AlgebraElement operator*(double s, const AlgebraElement& a) {
  AlgebraElement out = a;
  for (auto& f : out.factors) f *= s;
  return out;
}

double frobenius_norm(const AlgebraElement& a) {
  double s = 0;
  for (const auto& f : a.factors) s += f.squaredNorm();
  return std::sqrt(s);
}

Matrix unfold(const DenseTensor& t, Index mode) {
  check_mode(t, mode);
  const auto& shape = t.shape();
  const Index n = shape[static_cast<size_t>(mode)];
  const Index pre = product(std::span<const Index>(shape.data(), static_cast<size_t>(mode)));
  const Index post = t.size() / (pre * n);
  Matrix m(n, pre * post);
  const double* src = t.data().data();
  for (Index a = 0; a < pre; ++a)
    for (Index i = 0; i < n; ++i)
      for (Index b = 0; b < post; ++b) m(i, a * post + b) = src[(a * n + i) * post + b];
  return m;
}

DenseTensor fold(const Matrix& m, const std::vector<Index>& shape, Index mode) {
  DenseTensor t(shape);
  check_mode(t, mode);
  const Index n = shape[static_cast<size_t>(mode)];
  const Index pre = product(std::span<const Index>(shape.data(), static_cast<size_t>(mode)));
  const Index post = t.size() / (pre * n);
  if (m.rows() != n || m.cols() != pre * post) throw DimensionError("matrix does not match the unfolded shape");
  double* dst = t.data().data();
  for (Index a = 0; a < pre; ++a)
    for (Index i = 0; i < n; ++i)
      for (Index b = 0; b < post; ++b) dst[(a * n + i) * post + b] = m(i, a * post + b);
  return t;
}

Matrix split_unfold(const DenseTensor& t, Index split) {
  if (split < 1 || split >= t.order()) throw DimensionError("split position out of range");
  const Index rows = product(std::span<const Index>(t.shape().data(), static_cast<size_t>(split)));
  return Eigen::Map<const Matrix>(t.data().data(), rows, t.size() / rows);
}

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

Index numerical_rank(const Matrix& m, double tol) {
  const Vector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  while (r < s.size() && s(r) > tol * s(0)) ++r;
  return r;
}

double condition_number(const Matrix& m) {
  const Vector s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

std::vector<Index> multilinear_rank(const DenseTensor& t, double tol) {
  std::vector<Index> r;
  for (Index i = 0; i < t.order(); ++i) r.push_back(numerical_rank(unfold(t, i), tol));
  return r;
}

std::vector<Index> tt_rank(const DenseTensor& t, double tol) {
  std::vector<Index> r;
  for (Index s = 1; s < t.order(); ++s) r.push_back(numerical_rank(split_unfold(t, s), tol));
  return r;
}

DenseTensor mode_multiply(const DenseTensor& t, Index mode, const Matrix& m) {
  check_mode(t, mode);
  const auto& shape = t.shape();
  const Index n = shape[static_cast<size_t>(mode)];
  if (m.cols() != n) throw DimensionError("mode_multiply: matrix columns must equal the mode size");
  std::vector<Index> out_shape = shape;
  out_shape[static_cast<size_t>(mode)] = m.rows();
  DenseTensor out(out_shape);
  const Index pre = product(std::span<const Index>(shape.data(), static_cast<size_t>(mode)));
  const Index post = t.size() / (pre * n);
  using Block = Eigen::Map<const Matrix>;
  using OutBlock = Eigen::Map<Matrix>;
  for (Index a = 0; a < pre; ++a) {
    Block in(t.data().data() + a * n * post, n, post);
    OutBlock dst(out.data().data() + a * m.rows() * post, m.rows(), post);
    dst.noalias() = m * in;
  }
  return out;
}

DenseTensor mode_apply(const GroupElement& g, const DenseTensor& t) {
  if (g.order() != t.order()) throw DimensionError("group element order does not match tensor order");
  DenseTensor out = t;
  for (Index i = 0; i < t.order(); ++i) {
    const Matrix& f = g.factors[static_cast<size_t>(i)];
    if (f.rows() != f.cols() || f.rows() != t.dim(i)) throw DimensionError("group factor size mismatch");
    out = mode_multiply(out, i, f);
  }
  return out;
}

Permutation select_submatrix(const Matrix& m, double tol) {
  const Index n = m.rows();
  const Index r = m.cols();
  if (r > n) throw DimensionError("select_submatrix: more columns than rows");
  Matrix work = m;
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (r > 0 && !(scale > 0.0)) throw RankDeficientError("select_submatrix: matrix is zero or not finite");
  std::vector<Index> rows(static_cast<size_t>(n));
  std::vector<Index> cols(static_cast<size_t>(r));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::iota(cols.begin(), cols.end(), Index{0});
  auto at = [&](Index i, Index c) -> double& { return work(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(c)]); };

  for (Index j = 0; j < r; ++j) {
    auto best_in_col = [&](Index c) {
      Index best = j;
      for (Index i = j + 1; i < n; ++i)
        if (std::abs(at(i, c)) > std::abs(at(best, c))) best = i;
      return best;
    };
    auto best_in_row = [&](Index i) {
      Index best = j;
      for (Index c = j + 1; c < r; ++c)
        if (std::abs(at(i, c)) > std::abs(at(i, best))) best = c;
      return best;
    };
    // Rook search: alternate column and row maximization until the entry dominates both.
    Index pc = j;
    Index pr = best_in_col(pc);
    while (true) {
      const Index c2 = best_in_row(pr);
      if (!(std::abs(at(pr, c2)) > std::abs(at(pr, pc)))) break;
      pc = c2;
      const Index r2 = best_in_col(pc);
      if (!(std::abs(at(r2, pc)) > std::abs(at(pr, pc)))) break;
      pr = r2;
    }
    const double pivot = at(pr, pc);
    if (!(std::abs(pivot) > tol * scale)) throw RankDeficientError("select_submatrix: matrix is numerically rank deficient");
    std::swap(rows[static_cast<size_t>(j)], rows[static_cast<size_t>(pr)]);
    std::swap(cols[static_cast<size_t>(j)], cols[static_cast<size_t>(pc)]);
    for (Index i = j + 1; i < n; ++i) {
      const double f = at(i, j) / pivot;
      if (f == 0.0) continue;
      for (Index c = j + 1; c < r; ++c) at(i, c) -= f * at(j, c);
    }
  }

  std::vector<Index> selected(rows.begin(), rows.begin() + r);
  std::vector<Index> rest(rows.begin() + r, rows.end());
  std::sort(selected.begin(), selected.end());
  std::sort(rest.begin(), rest.end());
  Permutation p;
  p.image = selected;
  p.image.insert(p.image.end(), rest.begin(), rest.end());
  return p;
}

Matrix basis_completion(const Matrix& f, double tol) {
  const Index n = f.rows();
  const Index k = f.cols();
  if (k > n) throw DimensionError("basis_completion: more columns than rows");
  if (numerical_rank(f, tol) != k) throw RankDeficientError("basis_completion: input lacks full column rank");
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(f).householderQ();
  return q.rightCols(n - k);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {
Eigen::PartialPivLU<Eigen::MatrixXd> checked_lu(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("division by a non-square matrix");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double rc = lu.rcond();
  if (!(rc > std::numeric_limits<double>::epsilon())) throw SingularError("matrix is numerically singular");
  return lu;
}
}  // namespace

Matrix right_divide(const Matrix& x, const Matrix& m) {
  if (x.cols() != m.rows()) throw DimensionError("right_divide: size mismatch");
  if (x.rows() == 0) return Matrix(0, m.cols());
  auto lu = checked_lu(m.transpose());
  return lu.solve(x.transpose()).transpose();
}

Matrix left_divide(const Matrix& m, const Matrix& x) {
  if (x.rows() != m.cols()) throw DimensionError("left_divide: size mismatch");
  if (x.cols() == 0) return Matrix(m.cols(), 0);
  auto lu = checked_lu(m);
  return lu.solve(x);
}

}  // namespace hmt
