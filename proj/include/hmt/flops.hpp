#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmt/linalg.hpp"

namespace hmt {

/// Exact rational with 64-bit numerator and denominator, always kept in lowest terms
/// with a positive denominator. Overflow throws std::overflow_error.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);  // NOLINT(google-explicit-constructor)

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// "370250" or "70000/3".
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_;
  std::int64_t den_;
};

/// Operation count keyed by dotted step names such as "gamma12.invert".
///
/// Cost model: a product of an a×b by a b×c matrix costs 2abc; solving for an a×b
/// right-hand side against a b×b (or b×c) LU-factored matrix costs 8abc/3. Steps that only
/// touch O(size) entries go to the auxiliary channel, which is excluded from totals.
class FlopLedger {
 public:
  using Entry = std::pair<std::string, Rational>;

  void add(std::string_view step, Rational count);
  /// Product of an a×b and a b×c matrix.
  void mul(std::string_view step, Index a, Index b, Index c);
  /// Division of an a×b block by a b×b matrix, charged 8abc/3 with c the pivot size.
  void div(std::string_view step, Index a, Index b, Index c);
  void auxiliary(std::string_view step, Rational count);

  Rational total() const;
  /// Sum of entries whose name equals `prefix` or starts with `prefix` followed by '.'.
  Rational subtotal(std::string_view prefix) const;
  Rational auxiliary_total() const;

  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<Entry>& auxiliary_entries() const { return auxiliary_; }

  /// Appends all entries of `other`, prefixing their names with `prefix` + ".".
  void merge(const FlopLedger& other, std::string_view prefix);

 private:
  static void accumulate(std::vector<Entry>& list, std::string_view step, Rational count);
  std::vector<Entry> entries_;
  std::vector<Entry> auxiliary_;
};

/// Leading-order cost of one per-mode geodesic step, 110nk²/3 + (146+36z)k³.
Rational per_mode_geodesic_flops(Index n, Index k, int z);

/// Published per-step costs of one per-mode geodesic step, keyed by the step names the
/// geodesic ledger uses. The entries sum to per_mode_geodesic_flops(n, k, z).
std::vector<FlopLedger::Entry> per_mode_step_model(Index n, Index k, int z);

}  // namespace hmt
