#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace uc {

// Exact scalar type for distances and scales. Serialized as "p/q" (or "p"
// when the denominator is 1) so round trips are byte-stable.
using Rational = boost::rational<std::int64_t>;

Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

}  // namespace uc
