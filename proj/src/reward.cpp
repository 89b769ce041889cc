#include "bq/reward.hpp"

#include <charconv>
#include <limits>

namespace bq {

std::optional<Reward> Reward::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  std::int64_t whole = 0;
  std::size_t digits = 0;
  constexpr std::int64_t kMaxWhole = std::numeric_limits<std::int64_t>::max() / kUnitsPerOne - 1;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits) {
    whole = whole * 10 + (text[i] - '0');
    if (whole > kMaxWhole) return std::nullopt;
  }
  if (digits == 0) return std::nullopt;
  std::int64_t fraction = 0;
  if (i < text.size()) {
    if (text[i] != '.') return std::nullopt;
    ++i;
    std::int64_t scale = kUnitsPerOne;
    std::size_t frac_digits = 0;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++frac_digits) {
      scale /= 10;
      if (scale == 0) return std::nullopt;
      fraction += (text[i] - '0') * scale;
    }
    if (frac_digits == 0 || i != text.size()) return std::nullopt;
  }
  const std::int64_t units = whole * kUnitsPerOne + fraction;
  return from_units(negative ? -units : units);
}

std::string Reward::to_string() const {
  const std::int64_t magnitude = units_ < 0 ? -units_ : units_;
  std::string out = units_ < 0 ? "-" : "";
  out += std::to_string(magnitude / kUnitsPerOne);
  std::string frac = std::to_string(magnitude % kUnitsPerOne);
  frac.insert(0, 6 - frac.size(), '0');
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return out + "." + frac;
}

std::string format_real(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  std::string out(buf, res.ptr);
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

}  // namespace bq
