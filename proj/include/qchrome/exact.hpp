#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace qchrome {

using Rational = mpq_class;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Best rational approximation with denominator <= max_den (continued fractions).
Rational rationalize(double x, long max_den = 1000000);

/// "p/q" or "p". Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

/// Exact LDL^T test: true iff every pivot is strictly positive.
bool is_positive_definite(RationalMatrix a);

}  // namespace qchrome

namespace qchrome {

/// Nearest multiple of 2^-bits.
Rational dyadic(double x, int bits = 40);

/// Exact PSD test for larger matrices: a floating-point Cholesky factor L of
/// a - s I (s = half the numeric minimum eigenvalue) is taken as a hint and
/// a - L L^T is checked to be diagonally dominant in exact arithmetic.
/// False means the test was inconclusive or a is not PSD.
bool psd_by_cholesky_hint(const RationalMatrix& a, std::string* why = nullptr);

}  // namespace qchrome
