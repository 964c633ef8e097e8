#include "hmt/random.hpp"

#include <cmath>
#include <stdexcept>

namespace hmt {

Matrix random_normal(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

Matrix random_invertible(Rng& rng, Index n, double max_cond) {
  const double s = 0.5 / std::sqrt(static_cast<double>(n));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix m = Matrix::Identity(n, n) + s * random_normal(rng, n, n);
    if (condition_number(m) <= max_cond) return m;
  }
  throw std::runtime_error("random_invertible: could not meet the condition bound");
}

Matrix random_full_rank(Rng& rng, Index rows, Index cols, double max_cond) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix m = random_normal(rng, rows, cols);
    if (condition_number(m) <= max_cond) return m;
  }
  throw std::runtime_error("random_full_rank: could not meet the condition bound");
}

AlgebraElement random_algebra(Rng& rng, std::span<const Index> dims) {
  AlgebraElement x;
  for (Index n : dims) x.factors.push_back(random_normal(rng, n, n));
  return x;
}

}  // namespace hmt
