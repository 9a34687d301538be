#include "instar/rational.hpp"

#include <cctype>

namespace instar {

std::string rational_text(const Rational& value) {
  const Integer num = numerator(value);
  const Integer den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer to_integer(std::string_view digits) { return Integer{std::string{digits}}; }

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) return std::nullopt;

  auto slash = text.find('/');
  auto dot = text.find('.');
  Rational value;
  if (slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    Integer d = to_integer(den);
    if (d == 0) return std::nullopt;
    value = Rational(to_integer(num), d);
  } else if (dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    Integer scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer n = to_integer(whole) * scale + to_integer(frac);
    value = Rational(n, scale);
  } else {
    if (!all_digits(text)) return std::nullopt;
    value = Rational(to_integer(text));
  }
  if (negative) value = -value;
  return value;
}

}  // namespace instar
