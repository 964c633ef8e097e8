#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmt {

using Index = Eigen::Index;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Operand sizes do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that must have full column rank does not (numerically).
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A square system that must be solved is numerically singular.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative singular value threshold used for numerical rank decisions.
inline constexpr double kRankTol = 1e-10;

/// Row-major dense tensor. Modes are 0-based; the last index varies fastest.
class DenseTensor {
 public:
  DenseTensor() = default;
  /// Zero tensor of the given shape.
  explicit DenseTensor(std::vector<Index> shape);
  DenseTensor(std::vector<Index> shape, std::vector<double> data);

  const std::vector<Index>& shape() const { return shape_; }
  Index order() const { return static_cast<Index>(shape_.size()); }
  Index dim(Index mode) const { return shape_.at(static_cast<size_t>(mode)); }
  Index size() const { return static_cast<Index>(data_.size()); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Index flat_index(std::span<const Index> idx) const;
  double& operator()(std::span<const Index> idx) { return data_[static_cast<size_t>(flat_index(idx))]; }
  double operator()(std::span<const Index> idx) const { return data_[static_cast<size_t>(flat_index(idx))]; }
  double& operator()(std::initializer_list<Index> idx) { return (*this)(std::span<const Index>(idx.begin(), idx.size())); }
  double operator()(std::initializer_list<Index> idx) const {
    return (*this)(std::span<const Index>(idx.begin(), idx.size()));
  }

  double norm() const;

 private:
  std::vector<Index> shape_;
  std::vector<double> data_;
};

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);

/// Row permutation. Row i of `apply(m)` is row `image[i]` of m.
struct Permutation {
  std::vector<Index> image;

  static Permutation identity(Index n);
  Index size() const { return static_cast<Index>(image.size()); }
  bool is_identity() const;
  Permutation inverse() const;
  /// P·m
  Matrix apply(const Matrix& m) const;
  /// Pᵀ·m, the inverse reordering.
  Matrix unapply(const Matrix& m) const;
  Matrix matrix() const;
  /// Throws DimensionError unless `image` is a permutation of 0..n-1.
  void validate() const;
};

/// Factor pair (A, B) of a rank-k product A·B with A n×k and B k×n.
struct LowRankPair {
  Matrix left;
  Matrix right;
  Index n() const { return left.rows(); }
  Index rank() const { return left.cols(); }
};

/// Element of GL(n_1) × ... × GL(n_d), one square factor per mode.
struct GroupElement {
  std::vector<Matrix> factors;
  Index order() const { return static_cast<Index>(factors.size()); }
};

/// Element of the Lie algebra gl(n_1) × ... × gl(n_d), or a tangent vector at a group element.
struct AlgebraElement {
  std::vector<Matrix> factors;
  Index order() const { return static_cast<Index>(factors.size()); }
};

GroupElement identity_element(std::span<const Index> dims);
AlgebraElement zero_algebra(std::span<const Index> dims);
AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(double s, const AlgebraElement& a);
/// Sum of squared Frobenius norms of the factors, square-rooted.
double frobenius_norm(const AlgebraElement& a);

/// Mode-`mode` unfolding: n_mode rows, remaining modes enumerated row-major as columns.
Matrix unfold(const DenseTensor& t, Index mode);
/// Inverse of unfold for a tensor of the given shape.
DenseTensor fold(const Matrix& m, const std::vector<Index>& shape, Index mode);
/// Matricization with modes [0, split) as rows and [split, d) as columns.
Matrix split_unfold(const DenseTensor& t, Index split);

Vector singular_values(const Matrix& m);
/// Number of singular values above tol·σ_max (0 for the zero matrix).
Index numerical_rank(const Matrix& m, double tol = kRankTol);
double condition_number(const Matrix& m);

std::vector<Index> multilinear_rank(const DenseTensor& t, double tol = kRankTol);
/// Ranks of the split unfoldings at positions 1..d-1.
std::vector<Index> tt_rank(const DenseTensor& t, double tol = kRankTol);

/// Multiplies mode `mode` by m (p × n_mode); the mode size becomes p.
DenseTensor mode_multiply(const DenseTensor& t, Index mode, const Matrix& m);
/// (g_1 ⊗ ... ⊗ g_d)·t
DenseTensor mode_apply(const GroupElement& g, const DenseTensor& t);

/// Greedy rook-pivoted elimination on an n×r matrix. The returned permutation moves the
/// selected r rows to the top (in ascending original order), the rest follow ascending.
/// Throws RankDeficientError if a pivot falls to tol·max|m| or below.
Permutation select_submatrix(const Matrix& m, double tol = kRankTol);

/// Orthonormal basis of the orthogonal complement of the column space of f (n×k, rank k).
Matrix basis_completion(const Matrix& f, double tol = kRankTol);

/// Kronecker product with row-major index convention: (a⊗b)(i·p+k, j·q+l) = a(i,j)·b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

/// x·m⁻¹ via an LU solve; throws SingularError when m is numerically singular.
Matrix right_divide(const Matrix& x, const Matrix& m);
/// m⁻¹·x via an LU solve; throws SingularError when m is numerically singular.
Matrix left_divide(const Matrix& m, const Matrix& x);

}  // namespace hmt
