#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

namespace oforge {

/// Exact rational scalar. GMP keeps values in lowest terms with a positive
/// denominator, which is the canonical form all serialization relies on.
using Rat = boost::multiprecision::mpq_rational;

/// Formats r as "p/q" with the denominator always written out ("5/1", "-2/3").
std::string rat_to_string(const Rat& r);

/// Parses "p/q" or a bare integer "p". Throws std::invalid_argument on
/// malformed input or a zero denominator.
Rat rat_from_string(const std::string& s);

} // namespace oforge
