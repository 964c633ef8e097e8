#include "hmt/flops.hpp"

#include <numeric>
#include <stdexcept>

namespace hmt {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("rational arithmetic overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("rational arithmetic overflow");
  return out;
}

bool has_prefix(std::string_view name, std::string_view prefix) {
  if (prefix.empty()) return true;
  if (name.size() < prefix.size() || name.substr(0, prefix.size()) != prefix) return false;
  return name.size() == prefix.size() || name[prefix.size()] == '.';
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const std::int64_t den = checked_mul(a.den_ / g, b.den_);
  const std::int64_t num = checked_add(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, a.den_ / g));
  return Rational(num, den);
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_) == 0 ? 1 : std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_) == 0 ? 1 : std::gcd(b.num_, a.den_);
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  // Cross-multiplication in 128-bit arithmetic avoids overflow.
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

void FlopLedger::accumulate(std::vector<Entry>& list, std::string_view step, Rational count) {
  for (auto& e : list)
    if (e.first == step) {
      e.second += count;
      return;
    }
  list.emplace_back(std::string(step), count);
}

void FlopLedger::add(std::string_view step, Rational count) { accumulate(entries_, step, count); }

void FlopLedger::mul(std::string_view step, Index a, Index b, Index c) { add(step, Rational(2 * a * b * c)); }

void FlopLedger::div(std::string_view step, Index a, Index b, Index c) { add(step, Rational(8 * a * b * c, 3)); }

void FlopLedger::auxiliary(std::string_view step, Rational count) { accumulate(auxiliary_, step, count); }

Rational FlopLedger::total() const { return subtotal(""); }

Rational FlopLedger::subtotal(std::string_view prefix) const {
  Rational sum;
  for (const auto& e : entries_)
    if (has_prefix(e.first, prefix)) sum += e.second;
  return sum;
}

Rational FlopLedger::auxiliary_total() const {
  Rational sum;
  for (const auto& e : auxiliary_) sum += e.second;
  return sum;
}

void FlopLedger::merge(const FlopLedger& other, std::string_view prefix) {
  const std::string head = prefix.empty() ? std::string() : std::string(prefix) + ".";
  for (const auto& e : other.entries_) accumulate(entries_, head + e.first, e.second);
  for (const auto& e : other.auxiliary_) accumulate(auxiliary_, head + e.first, e.second);
}

Rational per_mode_geodesic_flops(Index n, Index k, int z) {
  return Rational(110 * n * k * k, 3) + Rational((146 + 36 * static_cast<std::int64_t>(z)) * k * k * k);
}

std::vector<FlopLedger::Entry> per_mode_step_model(Index n, Index k, int z) {
  const std::int64_t nk2 = n * k * k;
  const std::int64_t k3 = k * k * k;
  const Rational psi = Rational(52 * k3, 3) + Rational(4 * (static_cast<std::int64_t>(z) - 1) * k3);
  return {
      {"gamma12", Rational(20 * nk2, 3) + Rational(22 * k3, 3)},
      {"build_B", Rational(2 * nk2) + Rational(8 * k3, 3)},
      {"BA", Rational(2 * nk2)},
      {"BpAp", Rational(8 * nk2)},
      {"psi1_BA", psi},
      {"psi1_BpAp", Rational(8) * psi},
      {"term2", Rational(4 * nk2 + 2 * k3)},
      {"term3", Rational(8 * nk2 + 8 * k3)},
      {"term4", Rational(6 * nk2 + 6 * k3)},
  };
}

}  // namespace hmt
