#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bq {

/// Exact decimal reward with six fractional digits. Reward literals in theory
/// files are parsed into this form so that equality of rewards across the
/// semantic and answer-set routes is exact.
class Reward {
 public:
  static constexpr std::int64_t kUnitsPerOne = 1'000'000;

  constexpr Reward() = default;
  static constexpr Reward from_units(std::int64_t units) {
    Reward r;
    r.units_ = units;
    return r;
  }

  /// Accepts `[-]digits[.digits]` with at most six fractional digits.
  static std::optional<Reward> parse(std::string_view text);

  constexpr std::int64_t units() const { return units_; }
  double to_double() const { return static_cast<double>(units_) / kUnitsPerOne; }

  /// Canonical text: at least one fractional digit, no trailing zeros ("1.0", "-0.25").
  std::string to_string() const;

  Reward operator*(std::int64_t k) const { return from_units(units_ * k); }
  auto operator<=>(const Reward&) const = default;

 private:
  std::int64_t units_ = 0;
};

/// Shortest decimal text that round-trips the double ("0.9", "1e-07").
std::string format_real(double value);

}  // namespace bq
