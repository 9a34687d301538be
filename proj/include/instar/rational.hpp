#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace instar {

/// Exact rational scalar. Every numeric value in the language is one of these;
/// no floating point is used anywhere, so runs are bit-identical across
/// platforms.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Canonical rendering: integers bare ("12", "-3"), everything else "p/q"
/// with positive q ("6/5", "-1/3").
std::string rational_text(const Rational& value);

/// Accepts integers ("42", "-7"), fractions ("6/5", "-1/3") and decimal
/// literals ("1.2" -> 6/5). Returns nullopt on anything else.
std::optional<Rational> parse_rational(std::string_view text);

}  // namespace instar
