#include <gtest/gtest.h>

#include "hmt/cp.hpp"
#include "hmt/manifold.hpp"
#include "hmt/oracles.hpp"
#include "hmt/checks.hpp"
#include "test_util.hpp"

namespace hmt {
namespace {

using testing::rel_err;

CpPoint identity_point(const CpShape& shape) {
  std::vector<Matrix> factors;
  for (Index n : shape.dims) factors.push_back(Matrix::Identity(n, shape.r));
  return cp_point_from_factors(factors);
}

TEST(CpShape, Validation) {
  EXPECT_NO_THROW((CpShape{{3, 3, 3}, 2}).validate());
  EXPECT_THROW((CpShape{{3, 3}, 2}).validate(), DimensionError);
  EXPECT_THROW((CpShape{{3, 1, 3}, 1}).validate(), DimensionError);
  EXPECT_THROW((CpShape{{3, 2, 3}, 3}).validate(), DimensionError);
  EXPECT_THROW((CpShape{{3, 3, 3}, 0}).validate(), DimensionError);
  EXPECT_TRUE((CpShape{{2, 2, 2}, 2}).square());
  EXPECT_FALSE((CpShape{{3, 2, 2}, 2}).square());
}

TEST(CpReferenceTensor, KnownValues) {
  const DenseTensor one = cp_reference_tensor(CpShape{{2, 3, 2}, 1});
  EXPECT_EQ(one({0, 0, 0}), 1.0);
  EXPECT_EQ(one.norm(), 1.0);

  const DenseTensor diag = cp_reference_tensor(CpShape{{2, 2, 2}, 2});
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b)
      for (Index c = 0; c < 2; ++c) EXPECT_EQ(diag({a, b, c}), (a == b && b == c) ? 1.0 : 0.0);

  EXPECT_EQ(multilinear_rank(cp_reference_tensor(CpShape{{3, 3, 3}, 2})), (std::vector<Index>{2, 2, 2}));
  EXPECT_EQ(multilinear_rank(cp_reference_tensor(CpShape{{4, 5, 6}, 3})), (std::vector<Index>{3, 3, 3}));
}

TEST(CpPoint, IdentityFactorsGiveTheReferencePoint) {
  const CpShape shape{{3, 4, 3}, 2};
  const CpPoint p = identity_point(shape);
  for (const auto& m : p.modes) {
    EXPECT_TRUE(m.perm.is_identity());
    EXPECT_EQ(m.g11, Matrix::Identity(2, 2));
    EXPECT_EQ(m.g21.norm(), 0.0);
  }
  EXPECT_LE(rel_err(cp_embed(p), cp_reference_tensor(shape)), 1e-16);
}

TEST(CpPoint, EmbedMatchesDirectSum) {
  Rng rng(401);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Matrix> factors;
    for (int i = 0; i < 3; ++i) factors.push_back(random_normal(rng, 4, 2));
    EXPECT_LE(rel_err(cp_embed(cp_point_from_factors(factors)), oracle::contract_cp(factors)), 1e-12);
  }
}

TEST(CpPoint, RejectsDependentColumns) {
  Rng rng(402);
  Matrix v1 = random_normal(rng, 4, 2);
  v1.col(1) = v1.col(0);
  EXPECT_THROW(cp_point_from_factors({v1, random_normal(rng, 4, 2), random_normal(rng, 4, 2)}), RankDeficientError);
  EXPECT_THROW(cp_point_from_factors({random_normal(rng, 4, 2), random_normal(rng, 4, 3), random_normal(rng, 4, 2)}),
               DimensionError);
}

TEST(CpPoint, EmbeddingHasFullMultilinearRankWithAGap) {
  Rng rng(403);
  const CpShape shape{{6, 5, 7}, 3};
  const CpPoint p = random_cp_point(shape, rng);
  const DenseTensor t = cp_embed(p);
  EXPECT_EQ(multilinear_rank(t), (std::vector<Index>{3, 3, 3}));
  for (Index mode = 0; mode < 3; ++mode) {
    const Vector s = singular_values(unfold(t, mode));
    EXPECT_GT(s(2), 1e6 * s(3));
  }
}

TEST(CpStabilizer, IdentitySampleAndDiagonalPair) {
  const CpShape shape{{3, 3, 3}, 2};
  const QuotientStructure q = cp_structure(shape);
  CpStabilizerSample s;
  s.q = Permutation::identity(2);
  for (int i = 0; i < 3; ++i) {
    s.diagonals.push_back(Vector::Ones(2));
    s.m.push_back(Matrix::Zero(2, 1));
    s.a.push_back(Matrix::Identity(1, 1));
  }
  const GroupElement id = s.assemble();
  for (const auto& f : id.factors) EXPECT_EQ(f, Matrix::Identity(3, 3));

  s.diagonals[0](0) = 2.0;
  s.diagonals[1](0) = 0.5;
  EXPECT_EQ(checks::fixed_point_residual(q, s.assemble()), 0.0);
}

TEST(CpStabilizer, RandomSamplesFixTheReference) {
  const CpShape shape{{4, 4, 4}, 2};
  const QuotientStructure q = cp_structure(shape);
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    EXPECT_LE(checks::fixed_point_residual(q, cp_stabilizer_sample(shape, seed).assemble()), 1e-13);
  const GroupElement a = cp_stabilizer_sample(shape, 9).assemble();
  const GroupElement b = cp_stabilizer_sample(shape, 9).assemble();
  for (size_t i = 0; i < 3; ++i) EXPECT_EQ(a.factors[i], b.factors[i]);
}

TEST(CpStabilizer, EmbeddingIsInvariantUnderRightTranslation) {
  Rng rng(404);
  const CpShape shape{{5, 4, 6}, 3};
  const CpPoint p = random_cp_point(shape, rng);
  const QuotientStructure q = cp_structure(shape);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GroupElement gh = densify(p.modes) * cp_stabilizer_sample(shape, seed).assemble();
    EXPECT_LE(rel_err(mode_apply(gh, reference_tensor(q)), cp_embed(p)), 1e-12);
  }
}

TEST(CpVerticalBasis, CardinalityAndPatternAtIdentity) {
  const CpShape shape{{3, 4, 5}, 2};
  const CpPoint p = identity_point(shape);
  const auto basis = cp_vertical_basis(p);
  const Index sum_sq = 9 + 16 + 25, sum_n = 12;
  EXPECT_EQ(static_cast<Index>(basis.size()), sum_sq - sum_n * 2 + 2 * 2);
  // At the identity every element is block upper triangular with diagonal leading blocks.
  for (const auto& v : basis)
    for (size_t i = 0; i < 3; ++i) {
      const Matrix& f = v.factors[i];
      EXPECT_EQ(f.bottomLeftCorner(shape.dims[i] - 2, 2).norm(), 0.0);
      const Matrix lead = f.topLeftCorner(2, 2);
      EXPECT_EQ((lead - Matrix(lead.diagonal().asDiagonal())).norm(), 0.0);
    }
}

TEST(CpHorizontal, ClosedFormAtTheReferencePoint) {
  Rng rng(405);
  const CpShape shape{{4, 3, 5}, 2};
  const CpPoint p = identity_point(shape);
  const AlgebraElement z = random_algebra(rng, shape.dims);
  const CpTangent x = cp_project_horizontal(p, z);
  // X12 = X22 = 0 (by the identity completion), X21 and off-diagonal X11 kept, diagonals averaged.
  Vector mean = Vector::Zero(2);
  for (const auto& f : z.factors) mean += f.topLeftCorner(2, 2).diagonal() / 3.0;
  const AlgebraElement lifted = lift(p.modes, x);
  for (size_t i = 0; i < 3; ++i) {
    Matrix expected = Matrix::Zero(shape.dims[i], shape.dims[i]);
    expected.leftCols(2) = z.factors[i].leftCols(2);
    expected.topLeftCorner(2, 2).diagonal() = mean;
    EXPECT_LE((lifted.factors[i] - expected).norm(), 1e-13);
  }
}

TEST(CpHorizontal, EqualDiagonalsAtIdentityAndGeneralPoints) {
  Rng rng(406);
  const CpShape shape{{4, 3, 5}, 2};
  const CpPoint id = identity_point(shape);
  const CpTangent x = cp_project_horizontal(id, random_algebra(rng, shape.dims));
  EXPECT_TRUE(cp_is_horizontal(id, x, 1e-9));
  EXPECT_LE(cp_diagonal_condition_residual(id, x), 1e-13);
  CpTangent bad = x;
  bad.modes[0].x11(0, 0) += 0.1;
  EXPECT_FALSE(cp_is_horizontal(id, bad, 1e-6));
  EXPECT_NEAR(cp_diagonal_condition_residual(id, bad), 0.1, 1e-12);

  const CpPoint p = random_cp_point(shape, rng);
  const CpTangent y = cp_project_horizontal(p, random_algebra(rng, shape.dims));
  EXPECT_TRUE(cp_is_horizontal(p, y, 1e-9));
  EXPECT_LE(cp_diagonal_condition_residual(p, y), 1e-10);
  CpTangent off = y;
  off.modes[1].gamma12.array() += 1e-3;
  EXPECT_FALSE(cp_is_horizontal(p, off, 1e-6));
}

TEST(CpHorizontal, HorizontalInputIsAFixedPoint) {
  Rng rng(407);
  const CpShape shape{{5, 5, 5}, 3};
  const CpPoint p = random_cp_point(shape, rng);
  const CpTangent x = random_horizontal(cp_structure(shape), p.modes, rng);
  const CpTangent again = cp_project_horizontal(p, lift(p.modes, x));
  EXPECT_LE(frobenius_norm(lift(p.modes, again) - lift(p.modes, x)), 1e-10);
}

TEST(CpGeodesic, TimeZero) {
  Rng rng(408);
  const CpShape shape{{6, 5, 4}, 2};
  const CpPoint p = random_cp_point(shape, rng);
  const CpTangent x = random_horizontal(cp_structure(shape), p.modes, rng);
  EXPECT_LE(rel_err(cp_embed(cp_geodesic(p, x, 0.0)), cp_embed(p)), 1e-13);
}

TEST(CpGeodesic, AgreesWithDenseOracle) {
  Rng rng(409);
  const CpShape shape{{20, 20, 20}, 3};
  const QuotientStructure q = cp_structure(shape);
  for (int trial = 0; trial < 3; ++trial) {
    const CpPoint p = random_cp_point(shape, rng);
    const CpTangent x = random_horizontal(q, p.modes, rng);
    for (double t : {0.5, 1.0, 2.0}) {
      const DenseTensor dense = mode_apply(oracle::dense_geodesic(densify(p.modes), lift(p.modes, x), t), reference_tensor(q));
      EXPECT_LE(rel_err(cp_embed(cp_geodesic(p, x, t)), dense), 1e-10);
    }
  }
}

TEST(CpGeodesic, LongTimesStayFiniteAndInvertible) {
  Rng rng(410);
  const CpShape shape{{8, 7, 6}, 3};
  const CpPoint p = random_cp_point(shape, rng);
  const CpTangent x = random_horizontal(cp_structure(shape), p.modes, rng);
  const CpPoint out = cp_geodesic(p, x, 50.0);
  for (const auto& m : out.modes) {
    EXPECT_TRUE(m.g11.allFinite());
    EXPECT_TRUE(m.g21.allFinite());
    EXPECT_GT(singular_values(m.g11).minCoeff(), 0.0);
  }
}

TEST(CpGeodesic, InitialVelocityIsThePushforward) {
  Rng rng(411);
  const CpShape shape{{5, 6, 4}, 2};
  const QuotientStructure q = cp_structure(shape);
  const CpPoint p = random_cp_point(shape, rng);
  const CpTangent x = random_horizontal(q, p.modes, rng);
  const double h = 1e-6;
  DenseTensor along = cp_embed(cp_geodesic(p, x, h)) - cp_embed(cp_geodesic(p, x, -h));
  // Pushforward: derivative of g ↦ g·T along the lifted tangent.
  const GroupElement g = densify(p.modes);
  const AlgebraElement v = lift(p.modes, x);
  GroupElement plus = g, minus = g;
  for (size_t i = 0; i < 3; ++i) {
    plus.factors[i] += h * v.factors[i];
    minus.factors[i] -= h * v.factors[i];
  }
  const DenseTensor push = mode_apply(plus, reference_tensor(q)) - mode_apply(minus, reference_tensor(q));
  EXPECT_LE(rel_err(along, push), 1e-5);
}

TEST(CpGeodesic, RepresentativeIndependence) {
  Rng rng(412);
  const CpShape shape{{6, 5, 7}, 3};
  const QuotientStructure q = cp_structure(shape);
  for (int trial = 0; trial < 5; ++trial) {
    const CpPoint p = random_cp_point(shape, rng);
    const CpTangent x = random_horizontal(q, p.modes, rng);
    const GroupElement h = cp_stabilizer_sample(shape, static_cast<std::uint64_t>(trial)).assemble();
    const auto moved = checks::translate_representative(p.modes, h);
    const CpTangent x2 = checks::transport_tangent(q, p.modes, x, moved);
    const CpPoint p2{shape, moved};
    EXPECT_LE(rel_err(cp_embed(p2), cp_embed(p)), 1e-12);
    for (double t : {0.5, 1.0}) EXPECT_LE(rel_err(cp_embed(cp_geodesic(p2, x2, t)), cp_embed(cp_geodesic(p, x, t))), 1e-8);
  }
}

TEST(CpGeodesic, HorizontalityIsPreserved) {
  Rng rng(413);
  const CpShape shape{{6, 5, 4}, 2};
  const QuotientStructure q = cp_structure(shape);
  const CpPoint p = random_cp_point(shape, rng);
  const CpTangent x = random_horizontal(q, p.modes, rng);
  for (double t : {0.25, 0.5, 1.0}) EXPECT_LE(checks::vertical_velocity_fraction(q, p.modes, x, t), 1e-5);
}

TEST(CpFlops, FormulaValues) {
  const std::vector<int> z{3, 3, 3};
  EXPECT_EQ(cp_flop_formula(CpShape{{100, 100, 100}, 5}, z), Rational(370250));
  const std::vector<int> z1{1, 1, 1};
  const Rational r5 = cp_flop_formula(CpShape{{100, 100, 100}, 5}, z1);
  const Rational r10 = cp_flop_formula(CpShape{{100, 100, 100}, 10}, z1);
  // Quadratic part 3·110·100·r²/3 scales by 4, cubic part 3·182·r³ by 8.
  EXPECT_EQ(r10 - Rational(4) * r5, Rational(4) * Rational(3 * 182 * 125));
  EXPECT_THROW(cp_flop_formula(CpShape{{100, 100, 100}, 5}, std::vector<int>{3, 3}), DimensionError);
}

TEST(CpFlops, LedgerWithinSlackOfFormula) {
  Rng rng(414);
  std::uniform_int_distribution<Index> dim(4, 30), rank(1, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const Index r = rank(rng);
    const CpShape shape{{std::max(dim(rng), r), std::max(dim(rng), r), std::max(dim(rng), r)}, r};
    const CpPoint p = random_cp_point(shape, rng);
    const CpTangent x = random_horizontal(cp_structure(shape), p.modes, rng);
    GeodesicTrace trace;
    cp_geodesic(p, x, 1.0, &trace);
    const Rational diff = trace.ledger.total() - cp_flop_formula(shape, trace.z);
    Index slack = 0;
    for (Index n : shape.dims) slack += 100 * (n * r + r * r);
    EXPECT_GE(diff, Rational(0));
    EXPECT_LE(diff, Rational(slack));
  }
}

TEST(CpReductive, SquareShapeIsInvariant) {
  const ReductiveReport report = cp_reductive_check(CpShape{{2, 2, 2}, 2}, 100, 7);
  EXPECT_TRUE(report.square);
  EXPECT_LE(report.max_residual, 1e-12);
  EXPECT_TRUE(report.consistent);
}

TEST(CpReductive, NonSquareShapeHasAWitness) {
  const ReductiveReport report = cp_reductive_check(CpShape{{3, 3, 3}, 2}, 100, 7);
  EXPECT_FALSE(report.square);
  EXPECT_GE(report.max_residual, 0.05);
  ASSERT_TRUE(report.witness_h.has_value());
  // The witness relies on a nonzero off-diagonal stabilizer block.
  EXPECT_GT(report.witness_h->factors[0].topRightCorner(2, 1).norm(), 0.0);
  const QuotientStructure q = cp_structure(CpShape{{3, 3, 3}, 2});
  EXPECT_NEAR(reductive_residual(q, *report.witness_h, *report.witness_x), report.max_residual, 1e-12);
}

}  // namespace
}  // namespace hmt
