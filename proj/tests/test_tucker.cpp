#include <gtest/gtest.h>

#include "hmt/manifold.hpp"
#include "hmt/oracles.hpp"
#include "hmt/tucker.hpp"
#include "hmt/checks.hpp"
#include "test_util.hpp"

namespace hmt {
namespace {

using testing::rel_err;

DenseTensor random_tensor(Rng& rng, const std::vector<Index>& shape) {
  Index size = 1;
  for (Index n : shape) size *= n;
  const Matrix m = random_normal(rng, size, 1);
  return DenseTensor(shape, std::vector<double>(m.data(), m.data() + size));
}

TEST(TuckerShape, Validation) {
  EXPECT_NO_THROW((TuckerShape{{4, 2, 2}, {4, 2, 2}}).validate());
  EXPECT_NO_THROW((TuckerShape{{7, 3, 4}, {6, 2, 3}}).validate());
  EXPECT_THROW((TuckerShape{{4, 2, 2}, {3, 2, 2}}).validate(), DimensionError);
  EXPECT_THROW((TuckerShape{{4, 2}, {2, 2}}).validate(), DimensionError);
  EXPECT_THROW((TuckerShape{{3, 2, 2}, {4, 2, 2}}).validate(), DimensionError);
  EXPECT_TRUE((TuckerShape{{4, 2, 2}, {4, 2, 2}}).square());
  EXPECT_FALSE((TuckerShape{{5, 2, 2}, {4, 2, 2}}).square());
}

TEST(TuckerRankWindow, KnownValues) {
  const std::vector<Index> ten{10, 10};
  EXPECT_EQ(tucker_rank_window(ten), (std::pair<Index, Index>{98, 100}));
  const std::vector<Index> two{2, 2};
  EXPECT_EQ(tucker_rank_window(two), (std::pair<Index, Index>{1, 4}));
  // Every t_1 in the window satisfies t_1·P ≤ t_1² + Σt_j², and the one below it does not.
  const std::vector<Index> mixed{6, 9};
  const auto [lo, hi] = tucker_rank_window(mixed);
  EXPECT_EQ(hi, 54);
  EXPECT_LE(lo * hi, lo * lo + 36 + 81);
  EXPECT_GT((lo - 1) * hi, (lo - 1) * (lo - 1) + 36 + 81);
}

TEST(TuckerReferenceTensor, ReshapedIdentity) {
  const DenseTensor t = tucker_reference_tensor(TuckerShape{{4, 2, 2}, {4, 2, 2}});
  EXPECT_EQ(unfold(t, 0), Matrix::Identity(4, 4));
  EXPECT_EQ(multilinear_rank(t), (std::vector<Index>{4, 2, 2}));
  const DenseTensor padded = tucker_reference_tensor(TuckerShape{{6, 3, 2}, {6, 3, 2}});
  EXPECT_EQ(multilinear_rank(padded), (std::vector<Index>{6, 3, 2}));
}

TEST(TuckerPoint, DecompositionMatchesContraction) {
  Rng rng(501);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseTensor core = random_tensor(rng, {4, 2, 2});
    const std::vector<Matrix> factors{random_normal(rng, 5, 4), random_normal(rng, 3, 2), random_normal(rng, 3, 2)};
    const TuckerPoint p = tucker_point_from_decomposition(core, factors);
    EXPECT_EQ(p.shape.dims, (std::vector<Index>{5, 3, 3}));
    EXPECT_LE(rel_err(tucker_embed(p), oracle::contract_tucker(core, factors)), 1e-12);
  }
}

TEST(TuckerPoint, RejectsSingularCoreAndFactors) {
  Rng rng(502);
  DenseTensor core = random_tensor(rng, {4, 2, 2});
  for (Index b = 0; b < 2; ++b)
    for (Index c = 0; c < 2; ++c) core({3, b, c}) = core({0, b, c});
  const std::vector<Matrix> factors{random_normal(rng, 5, 4), random_normal(rng, 3, 2), random_normal(rng, 3, 2)};
  EXPECT_THROW(tucker_point_from_decomposition(core, factors), RankDeficientError);
  Matrix flat = random_normal(rng, 3, 2);
  flat.col(1) = 2.0 * flat.col(0);
  EXPECT_THROW(tucker_point_from_decomposition(random_tensor(rng, {4, 2, 2}), {factors[0], flat, factors[2]}),
               RankDeficientError);
  EXPECT_THROW(tucker_point_from_decomposition(random_tensor(rng, {4, 2, 2}), {factors[0], factors[1]}), DimensionError);
}

TEST(TuckerPoint, GaugeFreedomLeavesTheEmbeddingUnchanged) {
  Rng rng(503);
  const DenseTensor core = random_tensor(rng, {4, 2, 2});
  const std::vector<Matrix> factors{random_normal(rng, 6, 4), random_normal(rng, 4, 2), random_normal(rng, 3, 2)};
  const TuckerPoint p = tucker_point_from_decomposition(core, factors);
  GroupElement a;
  for (Index k : {4, 2, 2}) a.factors.push_back(random_invertible(rng, k));
  // (C ×_i A_i⁻¹) ×_i (G_i A_i) is the same tensor.
  DenseTensor moved_core = core;
  std::vector<Matrix> moved_factors;
  for (Index i = 0; i < 3; ++i) {
    const Matrix& ai = a.factors[static_cast<size_t>(i)];
    moved_core = mode_multiply(moved_core, i, left_divide(ai, Matrix::Identity(ai.rows(), ai.cols())));
    moved_factors.push_back(factors[static_cast<size_t>(i)] * ai);
  }
  const TuckerPoint q = tucker_point_from_decomposition(moved_core, moved_factors);
  EXPECT_LE(rel_err(tucker_embed(q), tucker_embed(p)), 1e-12);
}

TEST(TuckerStabilizer, DiagonalExample) {
  const TuckerShape shape{{4, 2, 2}, {4, 2, 2}};
  const QuotientStructure q = tucker_structure(shape);
  TuckerStabilizerSample s;
  Matrix a2 = Matrix::Identity(2, 2);
  a2(0, 0) = 2.0;
  s.a = {Matrix(), a2, Matrix::Identity(2, 2)};
  for (int i = 0; i < 3; ++i) {
    s.m.push_back(Matrix(i == 0 ? 4 : 2, 0));
    s.b.push_back(Matrix(0, 0));
  }
  const GroupElement h = s.assemble();
  Vector expected(4);
  expected << 0.5, 0.5, 1.0, 1.0;
  EXPECT_LE((h.factors[0] - Matrix(expected.asDiagonal())).norm(), 1e-16);
  EXPECT_LE(checks::fixed_point_residual(q, h), 1e-16);
}

TEST(TuckerStabilizer, RandomSamplesFixTheReference) {
  for (const TuckerShape& shape : {TuckerShape{{4, 2, 2}, {4, 2, 2}}, TuckerShape{{7, 4, 3}, {6, 2, 3}},
                                   TuckerShape{{9, 3, 2, 3}, {8, 2, 2, 2}}}) {
    const QuotientStructure q = tucker_structure(shape);
    for (std::uint64_t seed = 0; seed < 30; ++seed)
      EXPECT_LE(checks::fixed_point_residual(q, tucker_stabilizer_sample(shape, seed).assemble()), 1e-12);
  }
}

TEST(TuckerPartialTrace, PureTensorsAndIdentity) {
  Rng rng(504);
  const std::vector<Index> ranks{2, 3};
  const Matrix a2 = random_normal(rng, 2, 2), a3 = random_normal(rng, 3, 3);
  const Matrix l1 = kron(a2, a3);
  EXPECT_LE((tucker_partial_trace(l1, ranks, 0) - a3.trace() * a2.transpose()).norm(), 1e-13);
  EXPECT_LE((tucker_partial_trace(l1, ranks, 1) - a2.trace() * a3.transpose()).norm(), 1e-13);
  EXPECT_EQ(tucker_partial_trace(Matrix::Identity(6, 6), ranks, 0), 3.0 * Matrix::Identity(2, 2));
  EXPECT_THROW(tucker_partial_trace(l1, ranks, 2), DimensionError);
  EXPECT_THROW(tucker_partial_trace(Matrix::Identity(5, 5), ranks, 0), DimensionError);
}

TEST(TuckerComplement, MembershipConditions) {
  const TuckerShape shape{{7, 3, 4}, {6, 2, 3}};
  AlgebraElement x = zero_algebra(shape.dims);
  x.factors[0].topLeftCorner(6, 6) = Matrix::Identity(6, 6);
  x.factors[1].topLeftCorner(2, 2) = 3.0 * Matrix::Identity(2, 2);
  x.factors[2].topLeftCorner(3, 3) = 2.0 * Matrix::Identity(3, 3);
  Rng rng(505);
  x.factors[0].bottomLeftCorner(1, 6) = random_normal(rng, 1, 6);
  EXPECT_TRUE(tucker_m_membership(shape, x, 1e-14));

  AlgebraElement trailing = x;
  trailing.factors[1](0, 2) = 0.5;
  EXPECT_FALSE(tucker_m_membership(shape, trailing, 1e-6));
  EXPECT_NEAR(tucker_m_residual(shape, trailing), 0.5, 1e-14);

  // L_1 = A_2⊗A_3 requires L_2 = tr(A_3)·A_2ᵀ and L_3 = tr(A_2)·A_3ᵀ.
  const Matrix a2 = random_normal(rng, 2, 2), a3 = random_normal(rng, 3, 3);
  AlgebraElement pure = zero_algebra(shape.dims);
  pure.factors[0].topLeftCorner(6, 6) = kron(a2, a3);
  pure.factors[1].topLeftCorner(2, 2) = a3.trace() * a2.transpose();
  pure.factors[2].topLeftCorner(3, 3) = a2.trace() * a3.transpose();
  EXPECT_TRUE(tucker_m_membership(shape, pure, 1e-12));
  pure.factors[2].topLeftCorner(3, 3) = a2.trace() * a3;
  EXPECT_EQ(tucker_m_membership(shape, pure, 1e-12), (a3 - a3.transpose()).norm() < 1e-12);
}

TEST(TuckerComplement, ProjectionLandsInTheComplement) {
  Rng rng(506);
  const TuckerShape shape{{7, 3, 4}, {6, 2, 3}};
  const QuotientStructure q = tucker_structure(shape);
  const AlgebraElement m = project_complement(q, random_algebra(rng, shape.dims));
  EXPECT_LE(tucker_m_residual(shape, m), 1e-12);
}

TEST(TuckerHorizontal, ProjectionIsHorizontal) {
  Rng rng(507);
  const TuckerShape shape{{7, 3, 4}, {6, 2, 3}};
  const TuckerPoint p = random_tucker_point(shape, rng);
  const TuckerTangent x = tucker_project_horizontal(p, random_algebra(rng, shape.dims));
  EXPECT_TRUE(tucker_is_horizontal(p, x, 1e-9));
  EXPECT_EQ(static_cast<Index>(tucker_vertical_basis(p).size()), tucker_structure(shape).vertical_dimension());
  TuckerTangent off = x;
  off.modes[0].gamma12(0, 0) += 1e-3;
  EXPECT_FALSE(tucker_is_horizontal(p, off, 1e-6));
}

TEST(TuckerGeodesic, AgreesWithDenseOracle) {
  Rng rng(508);
  const TuckerShape shape{{12, 5, 6}, {6, 2, 3}};
  const QuotientStructure q = tucker_structure(shape);
  for (int trial = 0; trial < 3; ++trial) {
    const TuckerPoint p = random_tucker_point(shape, rng);
    const TuckerTangent x = random_horizontal(q, p.modes, rng);
    for (double t : {0.0, 0.5, 1.0, 3.0}) {
      const DenseTensor dense =
          mode_apply(oracle::dense_geodesic(densify(p.modes), lift(p.modes, x), t), reference_tensor(q));
      EXPECT_LE(rel_err(tucker_embed(tucker_geodesic(p, x, t)), dense), 1e-10) << "t = " << t;
    }
  }
}

TEST(TuckerGeodesic, StaysOnTheManifold) {
  Rng rng(509);
  const TuckerShape shape{{9, 4, 5}, {6, 2, 3}};
  const TuckerPoint p = random_tucker_point(shape, rng);
  const TuckerTangent x = random_horizontal(tucker_structure(shape), p.modes, rng);
  for (double t : {1.0, 5.0})
    EXPECT_EQ(multilinear_rank(tucker_embed(tucker_geodesic(p, x, t))), shape.ranks) << "t = " << t;
}

TEST(TuckerGeodesic, RepresentativeIndependence) {
  Rng rng(510);
  const TuckerShape shape{{8, 4, 3}, {6, 3, 2}};
  const QuotientStructure q = tucker_structure(shape);
  for (int trial = 0; trial < 5; ++trial) {
    const TuckerPoint p = random_tucker_point(shape, rng);
    const TuckerTangent x = random_horizontal(q, p.modes, rng);
    const auto moved = checks::translate_representative(
        p.modes, tucker_stabilizer_sample(shape, static_cast<std::uint64_t>(trial)).assemble());
    const TuckerPoint p2{shape, moved};
    const TuckerTangent x2 = checks::transport_tangent(q, p.modes, x, moved);
    EXPECT_LE(rel_err(tucker_embed(p2), tucker_embed(p)), 1e-12);
    EXPECT_LE(rel_err(tucker_embed(tucker_geodesic(p2, x2, 1.0)), tucker_embed(tucker_geodesic(p, x, 1.0))), 1e-8);
  }
}

TEST(TuckerGeodesic, HorizontalityIsPreserved) {
  Rng rng(511);
  const TuckerShape shape{{8, 4, 3}, {6, 3, 2}};
  const QuotientStructure q = tucker_structure(shape);
  const TuckerPoint p = random_tucker_point(shape, rng);
  const TuckerTangent x = random_horizontal(q, p.modes, rng);
  for (double t : {0.25, 1.0}) EXPECT_LE(checks::vertical_velocity_fraction(q, p.modes, x, t), 1e-5);
}

TEST(TuckerFlops, FormulaValue) {
  const std::vector<int> z{2, 2, 2};
  EXPECT_EQ(tucker_flop_formula(TuckerShape{{8, 4, 4}, {4, 2, 2}}, z), Rational(69920, 3));
  EXPECT_THROW(tucker_flop_formula(TuckerShape{{8, 4, 4}, {4, 2, 2}}, std::vector<int>{2}), DimensionError);
}

TEST(TuckerReductive, SquareShapeIsInvariant) {
  const ReductiveReport report = tucker_reductive_check(TuckerShape{{4, 2, 2}, {4, 2, 2}}, 100, 11);
  EXPECT_LE(report.max_residual, 1e-12);
  EXPECT_TRUE(report.consistent);
}

TEST(TuckerReductive, NonSquareShapeHasAWitness) {
  const ReductiveReport report = tucker_reductive_check(TuckerShape{{5, 2, 2}, {4, 2, 2}}, 100, 11);
  EXPECT_GE(report.max_residual, 0.05);
  EXPECT_TRUE(report.consistent);
  ASSERT_TRUE(report.witness_h.has_value());
}

}  // namespace
}  // namespace hmt
