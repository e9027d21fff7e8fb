#include "rational.hpp"

#include <cstdlib>
#include <stdexcept>

#include "error.hpp"

namespace uc {

namespace {

std::int64_t parse_int(const std::string& text) {
  if (text.empty()) fail_input("empty integer literal");
  std::size_t pos = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    fail_input("bad integer literal: " + text);
  }
  if (pos != text.size()) fail_input("bad integer literal: " + text);
  return value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  std::int64_t num = parse_int(text.substr(0, slash));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) fail_input("zero denominator: " + text);
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace uc
