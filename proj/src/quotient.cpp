#include "hmt/quotient.hpp"

#include <cmath>
#include <string>

#include "hmt/random.hpp"

namespace hmt {

namespace {

struct ModeGeometry {
  Matrix columns;   // G, original row order
  Matrix gram;      // S = GᵀG
  Eigen::LLT<Eigen::MatrixXd> gram_llt;
};

ModeGeometry geometry_of(const Matrix& columns) {
  ModeGeometry m;
  m.columns = columns;
  m.gram = columns.transpose() * columns;
  m.gram_llt.compute(m.gram);
  if (m.gram_llt.info() != Eigen::Success) throw SingularError("leading columns are rank deficient");
  return m;
}

Matrix gram_inverse_right(const ModeGeometry& g, const Matrix& x) {
  // x·S⁻¹ (S symmetric)
  return g.gram_llt.solve(x.transpose()).transpose();
}

/// Coefficients c of the leading-block directions to remove from the leading columns `a`.
/// Solves Σ_b Γ_ab c_b = Σ_i ⟨G_iᵀ a_i S_i⁻¹, Y^a_i⟩ with Γ_ab = Σ_i tr(S_i Y^a_i S_i⁻¹ Y^bᵀ_i).
Vector leading_coefficients(const BlockBasis& basis, const std::vector<ModeGeometry>& geo,
                            const std::vector<Matrix>& a, Eigen::MatrixXd* gram_out = nullptr) {
  const Index m = static_cast<Index>(basis.size());
  if (m == 0) return Vector();
  const size_t d = geo.size();
  std::vector<Matrix> r(d);
  for (size_t i = 0; i < d; ++i) r[i] = gram_inverse_right(geo[i], geo[i].columns.transpose() * a[i]);

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  Vector rhs = Vector::Zero(m);
  std::vector<std::vector<Matrix>> transported(static_cast<size_t>(m), std::vector<Matrix>(d));
  for (Index p = 0; p < m; ++p)
    for (size_t i = 0; i < d; ++i) {
      const Matrix& y = basis[static_cast<size_t>(p)][i];
      transported[static_cast<size_t>(p)][i] = geo[i].gram * gram_inverse_right(geo[i], y);
      rhs(p) += r[i].cwiseProduct(y).sum();
    }
  for (Index p = 0; p < m; ++p)
    for (Index q = p; q < m; ++q) {
      double s = 0;
      for (size_t i = 0; i < d; ++i)
        s += transported[static_cast<size_t>(p)][i].cwiseProduct(basis[static_cast<size_t>(q)][i]).sum();
      gram(p, q) = s;
      gram(q, p) = s;
    }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14))
    throw SingularError("ill-conditioned Gram system in horizontal projection");
  if (gram_out) *gram_out = gram;
  return ldlt.solve(rhs);
}

std::vector<ModeGeometry> geometries(std::span<const ModeBlocks> modes) {
  std::vector<ModeGeometry> geo;
  for (const auto& b : modes) geo.push_back(geometry_of(b.leading_columns()));
  return geo;
}

std::vector<Matrix> tangent_columns(std::span<const ModeBlocks> modes, const HorizontalTangent& x) {
  std::vector<Matrix> a;
  for (size_t i = 0; i < modes.size(); ++i) a.push_back(x.modes[i].leading_columns(modes[i].perm));
  return a;
}

Matrix combine(const BlockBasis& basis, const Vector& c, size_t mode, Index k) {
  Matrix y = Matrix::Zero(k, k);
  for (size_t p = 0; p < basis.size(); ++p) y += c(static_cast<Index>(p)) * basis[p][mode];
  return y;
}

}  // namespace

Index QuotientStructure::vertical_dimension() const {
  Index v = static_cast<Index>(leading_basis.size());
  for (size_t i = 0; i < dims.size(); ++i) v += dims[i] * (dims[i] - ks[i]);
  return v;
}

void validate_points(const QuotientStructure& q, std::span<const ModeBlocks> modes) {
  if (static_cast<Index>(modes.size()) != q.order()) throw DimensionError("point has the wrong number of modes");
  for (size_t i = 0; i < modes.size(); ++i) {
    const auto& b = modes[i];
    if (b.n() != q.dims[i] || b.k() != q.ks[i] || b.g11.rows() != q.ks[i] || b.perm.size() != q.dims[i])
      throw DimensionError("mode " + std::to_string(i) + " blocks do not match the shape");
    b.perm.validate();
  }
}

void validate_tangent(const QuotientStructure& q, std::span<const ModeBlocks> modes, const HorizontalTangent& x) {
  validate_points(q, modes);
  if (x.modes.size() != modes.size()) throw DimensionError("tangent has the wrong number of modes");
  for (size_t i = 0; i < modes.size(); ++i) {
    const auto& t = x.modes[i];
    const Index n = q.dims[i], k = q.ks[i];
    if (t.x11.rows() != k || t.x11.cols() != k || t.x21.rows() != n - k || t.x21.cols() != k ||
        t.gamma12.rows() != k || t.gamma12.cols() != n - k)
      throw DimensionError("mode " + std::to_string(i) + " tangent blocks do not match the shape");
  }
}

DenseTensor reference_tensor(const QuotientStructure& q) {
  DenseTensor t = q.core;
  for (Index i = 0; i < q.order(); ++i)
    t = mode_multiply(t, i, Matrix::Identity(q.dims[static_cast<size_t>(i)], q.ks[static_cast<size_t>(i)]));
  return t;
}

DenseTensor embed(const QuotientStructure& q, std::span<const ModeBlocks> modes) {
  validate_points(q, modes);
  DenseTensor t = q.core;
  for (size_t i = 0; i < modes.size(); ++i) t = mode_multiply(t, static_cast<Index>(i), modes[i].leading_columns());
  return t;
}

GroupElement densify(std::span<const ModeBlocks> modes) {
  GroupElement g;
  for (const auto& b : modes) g.factors.push_back(densify(b));
  return g;
}

AlgebraElement lift(std::span<const ModeBlocks> modes, const HorizontalTangent& x) {
  AlgebraElement out;
  for (size_t i = 0; i < modes.size(); ++i) out.factors.push_back(densify(modes[i], x.modes[i]));
  return out;
}

HorizontalTangent project_leading_columns(const QuotientStructure& q, std::span<const ModeBlocks> modes,
                                          const std::vector<Matrix>& leading) {
  validate_points(q, modes);
  if (leading.size() != modes.size()) throw DimensionError("leading column list has the wrong length");
  for (size_t i = 0; i < modes.size(); ++i)
    if (leading[i].rows() != q.dims[i] || leading[i].cols() != q.ks[i])
      throw DimensionError("leading columns do not match the shape");
  const auto geo = geometries(modes);
  const Vector c = leading_coefficients(q.leading_basis, geo, leading);
  HorizontalTangent out;
  FlopLedger scratch;
  for (size_t i = 0; i < modes.size(); ++i) {
    const Index k = q.ks[i];
    Matrix a = leading[i];
    if (c.size() > 0) a -= geo[i].columns * combine(q.leading_basis, c, i, k);
    const Matrix permuted = modes[i].perm.apply(a);
    HorizontalBlocks h;
    h.x11 = permuted.topRows(k);
    h.x21 = permuted.bottomRows(q.dims[i] - k);
    h.gamma12 = gamma12(modes[i], scratch);
    out.modes.push_back(std::move(h));
  }
  return out;
}

HorizontalTangent project_horizontal(const QuotientStructure& q, std::span<const ModeBlocks> modes,
                                     const AlgebraElement& z) {
  if (static_cast<Index>(z.factors.size()) != q.order()) throw DimensionError("tangent has the wrong number of modes");
  std::vector<Matrix> leading;
  for (size_t i = 0; i < z.factors.size(); ++i) {
    if (z.factors[i].rows() != q.dims[i] || z.factors[i].cols() != q.dims[i])
      throw DimensionError("tangent factor has the wrong size");
    leading.push_back(z.factors[i].leftCols(q.ks[i]));
  }
  return project_leading_columns(q, modes, leading);
}

AlgebraElement project_vertical(const QuotientStructure& q, const GroupElement& g, const AlgebraElement& v) {
  if (g.order() != q.order() || v.order() != q.order()) throw DimensionError("project_vertical: wrong number of modes");
  std::vector<ModeGeometry> geo;
  std::vector<Matrix> leading;
  for (size_t i = 0; i < g.factors.size(); ++i) {
    geo.push_back(geometry_of(g.factors[i].leftCols(q.ks[i])));
    leading.push_back(v.factors[i].leftCols(q.ks[i]));
  }
  const Vector c = leading_coefficients(q.leading_basis, geo, leading);
  AlgebraElement out;
  for (size_t i = 0; i < g.factors.size(); ++i) {
    Matrix a = leading[i];
    if (c.size() > 0) a -= geo[i].columns * combine(q.leading_basis, c, i, q.ks[i]);
    // Horizontal part in velocity form is a·G⁺; as a tangent at g it is a·G⁺·g.
    const Matrix pinv_g = geo[i].gram_llt.solve(geo[i].columns.transpose() * g.factors[i]);
    out.factors.push_back(v.factors[i] - a * pinv_g);
  }
  return out;
}

std::vector<AlgebraElement> vertical_basis(const QuotientStructure& q, std::span<const ModeBlocks> modes) {
  validate_points(q, modes);
  const GroupElement g = densify(modes);
  std::vector<AlgebraElement> basis;
  const AlgebraElement zero = zero_algebra(q.dims);
  for (size_t i = 0; i < modes.size(); ++i) {
    const Index n = q.dims[i];
    for (Index a = 0; a < n; ++a)
      for (Index b = q.ks[i]; b < n; ++b) {
        AlgebraElement e = zero;
        e.factors[i].col(b) = g.factors[i].col(a);
        basis.push_back(std::move(e));
      }
  }
  for (const auto& y : q.leading_basis) {
    AlgebraElement e = zero;
    for (size_t i = 0; i < modes.size(); ++i) e.factors[i].leftCols(q.ks[i]) = g.factors[i].leftCols(q.ks[i]) * y[i];
    basis.push_back(std::move(e));
  }
  return basis;
}

double tangent_norm(std::span<const ModeBlocks> modes, const HorizontalTangent& x) {
  double s = 0;
  const auto a = tangent_columns(modes, x);
  for (size_t i = 0; i < modes.size(); ++i) {
    const ModeGeometry geo = geometry_of(modes[i].leading_columns());
    s += gram_inverse_right(geo, a[i]).cwiseProduct(a[i]).sum();
  }
  return std::sqrt(std::max(s, 0.0));
}

double horizontal_residual(const QuotientStructure& q, std::span<const ModeBlocks> modes, const HorizontalTangent& x) {
  validate_tangent(q, modes, x);
  double gamma_sq = 0;
  FlopLedger scratch;
  for (size_t i = 0; i < modes.size(); ++i) {
    const Matrix diff = x.modes[i].gamma12 - gamma12(modes[i], scratch);
    gamma_sq += (x.modes[i].x11 * diff).squaredNorm() + (x.modes[i].x21 * diff).squaredNorm();
  }
  double leading_sq = 0;
  if (!q.leading_basis.empty()) {
    Eigen::MatrixXd gram;
    const Vector c = leading_coefficients(q.leading_basis, geometries(modes), tangent_columns(modes, x), &gram);
    leading_sq = std::max(0.0, c.dot(gram * c));
  }
  return std::sqrt(gamma_sq + leading_sq);
}

bool is_horizontal(const QuotientStructure& q, std::span<const ModeBlocks> modes, const HorizontalTangent& x,
                   double tol) {
  return horizontal_residual(q, modes, x) <= tol * (1.0 + tangent_norm(modes, x));
}

std::vector<ModeBlocks> geodesic(std::span<const ModeBlocks> modes, const HorizontalTangent& x, double t,
                                 GeodesicTrace* trace, const StepOptions& options) {
  if (x.modes.size() != modes.size()) throw DimensionError("tangent has the wrong number of modes");
  std::vector<ModeBlocks> out;
  for (size_t i = 0; i < modes.size(); ++i) {
    FlopLedger ledger;
    StepResult step = lowrank_geodesic_step(modes[i], x.modes[i], t, ledger, options);
    if (trace) {
      trace->ledger.merge(ledger, "mode" + std::to_string(i + 1));
      trace->z.push_back(step.z);
    }
    out.push_back(std::move(step.blocks));
  }
  return out;
}

AlgebraElement project_complement(const QuotientStructure& q, const AlgebraElement& x) {
  if (x.order() != q.order()) throw DimensionError("project_complement: wrong number of modes");
  AlgebraElement out = x;
  for (size_t i = 0; i < out.factors.size(); ++i) {
    if (x.factors[i].rows() != q.dims[i] || x.factors[i].cols() != q.dims[i])
      throw DimensionError("project_complement: factor has the wrong size");
    out.factors[i].rightCols(q.dims[i] - q.ks[i]).setZero();
  }
  const BlockBasis& basis = q.leading_basis;
  const Index m = static_cast<Index>(basis.size());
  if (m == 0) return out;
  Eigen::MatrixXd gram(m, m);
  Vector rhs = Vector::Zero(m);
  for (Index p = 0; p < m; ++p) {
    for (Index r = 0; r < m; ++r) {
      double s = 0;
      for (size_t i = 0; i < out.factors.size(); ++i)
        s += basis[static_cast<size_t>(p)][i].cwiseProduct(basis[static_cast<size_t>(r)][i]).sum();
      gram(p, r) = s;
    }
    for (size_t i = 0; i < out.factors.size(); ++i)
      rhs(p) += out.factors[i].topLeftCorner(q.ks[i], q.ks[i]).cwiseProduct(basis[static_cast<size_t>(p)][i]).sum();
  }
  const Vector c = gram.ldlt().solve(rhs);
  for (size_t i = 0; i < out.factors.size(); ++i)
    out.factors[i].topLeftCorner(q.ks[i], q.ks[i]) -= combine(basis, c, i, q.ks[i]);
  return out;
}

double complement_distance(const QuotientStructure& q, const AlgebraElement& x) {
  return frobenius_norm(x - project_complement(q, x));
}

double reductive_residual(const QuotientStructure& q, const GroupElement& h, const AlgebraElement& x) {
  const double nx = frobenius_norm(x);
  if (nx == 0.0) return 0.0;
  return complement_distance(q, adjoint(h, x)) / nx;
}

ReductiveReport reductive_check(const QuotientStructure& q, bool square,
                                const std::function<GroupElement(std::uint64_t)>& sampler, int trials,
                                std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("reductive_check needs at least one trial");
  Rng rng(seed);
  ReductiveReport report;
  report.square = square;
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    const GroupElement h = sampler(rng());
    const AlgebraElement x = project_complement(q, random_algebra(rng, q.dims));
    const double res = reductive_residual(q, h, x);
    if (res >= report.max_residual) {
      report.max_residual = res;
      if (!square) {
        report.witness_h = h;
        report.witness_x = x;
      }
    }
  }
  report.consistent = square ? report.max_residual <= kReductiveInvarianceTol
                             : report.max_residual >= kReductiveWitnessMin;
  return report;
}

}  // namespace hmt
