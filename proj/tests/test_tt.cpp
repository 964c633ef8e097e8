#include <gtest/gtest.h>

#include "hmt/manifold.hpp"
#include "hmt/oracles.hpp"
#include "hmt/tt.hpp"
#include "hmt/checks.hpp"
#include "test_util.hpp"

namespace hmt {
namespace {

using testing::rel_err;

TEST(TtShape, ValidationAndDerivedSizes) {
  const TtShape shape{{3, 7, 6, 2}, {2, 3, 2}};
  EXPECT_NO_THROW(shape.validate());
  EXPECT_EQ(shape.bonds(), (std::vector<Index>{1, 2, 3, 2, 1}));
  EXPECT_EQ(shape.ks(), (std::vector<Index>{2, 6, 6, 2}));
  EXPECT_THROW((TtShape{{3, 5, 3}, {2}}).validate(), DimensionError);
  EXPECT_THROW((TtShape{{3, 3, 3}, {2, 2}}).validate(), DimensionError);
  EXPECT_THROW((TtShape{{3, 5, 3}, {2, 0}}).validate(), DimensionError);
  EXPECT_TRUE((TtShape{{2, 4, 2}, {2, 2}}).square());
  EXPECT_FALSE((TtShape{{3, 4, 2}, {2, 2}}).square());
}

TEST(TtReferenceTensor, KnownValues) {
  const DenseTensor one = tt_reference_tensor(TtShape{{2, 3, 2}, {1, 1}});
  EXPECT_EQ(one({0, 0, 0}), 1.0);
  EXPECT_EQ(one.norm(), 1.0);

  const DenseTensor t = tt_reference_tensor(TtShape{{2, 4, 2}, {2, 2}});
  EXPECT_EQ(tt_rank(t), (std::vector<Index>{2, 2}));
  EXPECT_EQ(multilinear_rank(t), (std::vector<Index>{2, 4, 2}));
  // Entry (a, 2a + b, b) is one for every bond pair.
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) EXPECT_EQ(t({a, 2 * a + b, b}), 1.0);
  EXPECT_EQ(t.norm(), 2.0);
}

TEST(TtPoint, CoresMatchContraction) {
  Rng rng(601);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<Matrix> cores{random_normal(rng, 3, 2), random_normal(rng, 5, 4), random_normal(rng, 3, 2)};
    const TtPoint p = tt_point_from_cores(cores);
    EXPECT_EQ(p.shape.ranks, (std::vector<Index>{2, 2}));
    const DenseTensor t = tt_embed(p);
    EXPECT_LE(rel_err(t, oracle::contract_tt(cores)), 1e-12);
    EXPECT_EQ(tt_rank(t), (std::vector<Index>{2, 2}));
  }
}

TEST(TtPoint, RejectsBadCores) {
  Rng rng(602);
  Matrix flat = random_normal(rng, 5, 4);
  flat.col(3) = flat.col(0) - flat.col(1);
  EXPECT_THROW(tt_point_from_cores({random_normal(rng, 3, 2), flat, random_normal(rng, 3, 2)}), RankDeficientError);
  EXPECT_THROW(tt_point_from_cores({random_normal(rng, 3, 2), random_normal(rng, 5, 3), random_normal(rng, 3, 2)}),
               DimensionError);
  EXPECT_THROW(tt_point_from_cores({random_normal(rng, 3, 2), random_normal(rng, 5, 4)}), DimensionError);
}

TEST(TtPoint, GaugeFreedomLeavesTheEmbeddingUnchanged) {
  Rng rng(603);
  const std::vector<Matrix> cores{random_normal(rng, 3, 2), random_normal(rng, 7, 6), random_normal(rng, 4, 3)};
  const Matrix a1 = random_invertible(rng, 2), a2 = random_invertible(rng, 3);
  const Matrix a1_inv = left_divide(a1, Matrix::Identity(2, 2));
  const Matrix a2_inv = left_divide(a2, Matrix::Identity(3, 3));
  // F_1 A_1, (A_1⁻¹ ⊗ I) acting on the left bond of F_2 and A_2 on its right bond, A_2⁻¹ F_3.
  const std::vector<Matrix> moved{cores[0] * a1, cores[1] * kron(a1_inv.transpose(), a2),
                                  cores[2] * a2_inv.transpose()};
  EXPECT_LE(rel_err(tt_embed(tt_point_from_cores(moved)), tt_embed(tt_point_from_cores(cores))), 1e-12);
}

TEST(TtStabilizer, RandomSamplesFixTheReference) {
  for (const TtShape& shape : {TtShape{{2, 4, 2}, {2, 2}}, TtShape{{3, 5, 3}, {2, 2}}, TtShape{{3, 7, 6, 2}, {2, 3, 2}}}) {
    const QuotientStructure q = tt_structure(shape);
    for (std::uint64_t seed = 0; seed < 30; ++seed)
      EXPECT_LE(checks::fixed_point_residual(q, tt_stabilizer_sample(shape, seed).assemble()), 1e-12);
  }
}

TEST(TtPartialTraces, PureTensors) {
  Rng rng(604);
  const Matrix a = random_normal(rng, 2, 2), b = random_normal(rng, 3, 3);
  EXPECT_LE((tt_trace_first(kron(a, b), 2, 3) - a.trace() * b).norm(), 1e-13);
  EXPECT_LE((tt_trace_second(kron(a, b), 2, 3) - b.trace() * a.transpose()).norm(), 1e-13);
  EXPECT_THROW(tt_trace_first(kron(a, b), 3, 3), DimensionError);
}

TEST(TtComplement, MembershipWithTransposedLastLink) {
  Rng rng(605);
  const TtShape shape{{3, 5, 3}, {2, 2}};
  const Matrix a = random_normal(rng, 2, 2), b = random_normal(rng, 2, 2);
  AlgebraElement x = zero_algebra(shape.dims);
  x.factors[1].topLeftCorner(4, 4) = kron(a, b);
  x.factors[0].topLeftCorner(2, 2) = b.trace() * a.transpose();
  x.factors[2].topLeftCorner(2, 2) = a.trace() * b.transpose();
  x.factors[1].bottomLeftCorner(1, 4) = random_normal(rng, 1, 4);
  EXPECT_TRUE(tt_m_membership(shape, x, 1e-12));

  AlgebraElement untransposed = x;
  untransposed.factors[2].topLeftCorner(2, 2) = a.trace() * b;
  EXPECT_FALSE(tt_m_membership(shape, untransposed, 1e-6));

  AlgebraElement trailing = x;
  trailing.factors[0](1, 2) = 0.25;
  EXPECT_NEAR(tt_m_residual(shape, trailing), 0.25, 1e-14);
}

TEST(TtComplement, ProjectionLandsInTheComplement) {
  Rng rng(606);
  const TtShape shape{{3, 7, 6, 2}, {2, 3, 2}};
  const AlgebraElement m = project_complement(tt_structure(shape), random_algebra(rng, shape.dims));
  EXPECT_LE(tt_m_residual(shape, m), 1e-12);
}

TEST(TtHorizontal, ProjectionIsHorizontal) {
  Rng rng(607);
  const TtShape shape{{3, 7, 6, 2}, {2, 3, 2}};
  const TtPoint p = random_tt_point(shape, rng);
  const TtTangent x = tt_project_horizontal(p, random_algebra(rng, shape.dims));
  EXPECT_TRUE(tt_is_horizontal(p, x, 1e-9));
  EXPECT_EQ(static_cast<Index>(tt_vertical_basis(p).size()), tt_structure(shape).vertical_dimension());
  TtTangent off = x;
  off.modes[1].gamma12(0, 0) += 1e-3;
  EXPECT_FALSE(tt_is_horizontal(p, off, 1e-6));
}

TEST(TtGeodesic, AgreesWithDenseOracle) {
  Rng rng(608);
  const TtShape shape{{10, 20, 10}, {2, 3}};
  const QuotientStructure q = tt_structure(shape);
  for (int trial = 0; trial < 3; ++trial) {
    const TtPoint p = random_tt_point(shape, rng);
    const TtTangent x = random_horizontal(q, p.modes, rng);
    for (double t : {0.0, 0.5, 1.0, 3.0}) {
      const DenseTensor dense =
          mode_apply(oracle::dense_geodesic(densify(p.modes), lift(p.modes, x), t), reference_tensor(q));
      EXPECT_LE(rel_err(tt_embed(tt_geodesic(p, x, t)), dense), 1e-10) << "t = " << t;
    }
  }
}

TEST(TtGeodesic, PreservesTtRank) {
  Rng rng(609);
  const TtShape shape{{10, 20, 10}, {2, 3}};
  const TtPoint p = random_tt_point(shape, rng);
  const TtTangent x = random_horizontal(tt_structure(shape), p.modes, rng);
  for (double t : {1.0, 5.0}) EXPECT_EQ(tt_rank(tt_embed(tt_geodesic(p, x, t))), shape.ranks) << "t = " << t;
}

TEST(TtGeodesic, RepresentativeIndependence) {
  Rng rng(610);
  const TtShape shape{{3, 7, 6, 2}, {2, 3, 2}};
  const QuotientStructure q = tt_structure(shape);
  for (int trial = 0; trial < 5; ++trial) {
    const TtPoint p = random_tt_point(shape, rng);
    const TtTangent x = random_horizontal(q, p.modes, rng);
    const auto moved =
        checks::translate_representative(p.modes, tt_stabilizer_sample(shape, static_cast<std::uint64_t>(trial)).assemble());
    const TtPoint p2{shape, moved};
    const TtTangent x2 = checks::transport_tangent(q, p.modes, x, moved);
    EXPECT_LE(rel_err(tt_embed(p2), tt_embed(p)), 1e-12);
    EXPECT_LE(rel_err(tt_embed(tt_geodesic(p2, x2, 1.0)), tt_embed(tt_geodesic(p, x, 1.0))), 1e-8);
  }
}

TEST(TtGeodesic, HorizontalityIsPreserved) {
  Rng rng(611);
  const TtShape shape{{4, 7, 5}, {2, 3}};
  const QuotientStructure q = tt_structure(shape);
  const TtPoint p = random_tt_point(shape, rng);
  const TtTangent x = random_horizontal(q, p.modes, rng);
  for (double t : {0.25, 1.0}) EXPECT_LE(checks::vertical_velocity_fraction(q, p.modes, x, t), 1e-5);
}

TEST(TtFlops, FormulaValue) {
  const std::vector<int> z{2, 2, 2};
  EXPECT_EQ(tt_flop_formula(TtShape{{4, 8, 4}, {2, 2}}, z), Rational(69920, 3));
}

TEST(TtReductive, SquareShapeIsInvariant) {
  const ReductiveReport report = tt_reductive_check(TtShape{{2, 4, 2}, {2, 2}}, 100, 13);
  EXPECT_LE(report.max_residual, 1e-12);
  EXPECT_TRUE(report.consistent);
}

TEST(TtReductive, NonSquareShapeHasAWitness) {
  const ReductiveReport report = tt_reductive_check(TtShape{{3, 4, 2}, {2, 2}}, 100, 13);
  EXPECT_GE(report.max_residual, 0.05);
  EXPECT_TRUE(report.consistent);
}

}  // namespace
}  // namespace hmt
