#include <gtest/gtest.h>

#include <limits>

#include "hmt/flops.hpp"

namespace hmt {
namespace {

TEST(Rational, ReducesAndPrints) {
  EXPECT_EQ(Rational(6, 4), Rational(3, 2));
  EXPECT_EQ(Rational(3, -6).str(), "-1/2");
  EXPECT_EQ(Rational(370250).str(), "370250");
  EXPECT_EQ((Rational(1, 3) + Rational(1, 6)).str(), "1/2");
  EXPECT_EQ(Rational(2, 3) * Rational(3, 4), Rational(1, 2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(Rational, OverflowIsDetected) {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2 + 1);
  EXPECT_THROW(big + big, std::overflow_error);
  EXPECT_THROW(big * Rational(4), std::overflow_error);
}

TEST(FlopLedger, CostModel) {
  FlopLedger ledger;
  ledger.mul("a.mul", 2, 3, 4);
  ledger.div("a.div", 2, 3, 4);
  ledger.add("b", Rational(5));
  EXPECT_EQ(ledger.subtotal("a.mul"), Rational(48));
  EXPECT_EQ(ledger.subtotal("a.div"), Rational(64));
  EXPECT_EQ(ledger.subtotal("a"), Rational(112));
  EXPECT_EQ(ledger.total(), Rational(117));
}

TEST(FlopLedger, PrefixMatchingRespectsDots) {
  FlopLedger ledger;
  ledger.add("term2.psi", Rational(1));
  ledger.add("term23", Rational(10));
  EXPECT_EQ(ledger.subtotal("term2"), Rational(1));
  EXPECT_EQ(ledger.subtotal("term23"), Rational(10));
}

TEST(FlopLedger, RepeatedStepsAccumulateInOrder) {
  FlopLedger ledger;
  ledger.mul("x", 1, 1, 1);
  ledger.mul("y", 1, 1, 1);
  ledger.mul("x", 1, 1, 1);
  ASSERT_EQ(ledger.entries().size(), 2u);
  EXPECT_EQ(ledger.entries()[0].first, "x");
  EXPECT_EQ(ledger.entries()[0].second, Rational(4));
}

TEST(FlopLedger, AuxiliaryIsExcludedFromTotals) {
  FlopLedger ledger;
  ledger.mul("step", 1, 2, 3);
  ledger.auxiliary("copy", Rational(1000));
  EXPECT_EQ(ledger.total(), Rational(12));
  EXPECT_EQ(ledger.auxiliary_total(), Rational(1000));
}

TEST(FlopLedger, MergePrefixesNames) {
  FlopLedger inner;
  inner.mul("BA", 2, 2, 2);
  inner.auxiliary("rereduce", Rational(3));
  FlopLedger outer;
  outer.merge(inner, "mode1");
  outer.merge(inner, "mode2");
  EXPECT_EQ(outer.subtotal("mode1"), Rational(16));
  EXPECT_EQ(outer.subtotal("mode2.BA"), Rational(16));
  EXPECT_EQ(outer.total(), Rational(32));
  EXPECT_EQ(outer.auxiliary_total(), Rational(6));
}

TEST(FlopLedger, TotalsAreReproducible) {
  auto run = [] {
    FlopLedger l;
    for (Index n = 1; n < 40; ++n) l.div("d", n, n + 1, n + 2);
    return l.total();
  };
  EXPECT_EQ(run(), run());
}

TEST(PerModeFormula, KnownValues) {
  // 110·100·25/3 + (146 + 108)·125 per mode.
  EXPECT_EQ(Rational(3) * per_mode_geodesic_flops(100, 5, 3), Rational(370250));
  EXPECT_EQ(per_mode_geodesic_flops(8, 4, 2) + Rational(2) * per_mode_geodesic_flops(4, 2, 2), Rational(69920, 3));
  EXPECT_EQ(per_mode_geodesic_flops(10, 3, 4) - per_mode_geodesic_flops(10, 3, 3), Rational(36 * 27));
}

TEST(PerModeFormula, StepModelSumsToTheFormula) {
  for (Index n : {2, 10, 100})
    for (Index k : {1, 2, 5})
      for (int z : {1, 3, 7}) {
        Rational sum;
        for (const auto& [name, cost] : per_mode_step_model(n, k, z)) sum += cost;
        EXPECT_EQ(sum, per_mode_geodesic_flops(n, k, z));
      }
  EXPECT_EQ(per_mode_step_model(100, 5, 3).front(), (FlopLedger::Entry{"gamma12", Rational(52750, 3)}));
}

}  // namespace
}  // namespace hmt
