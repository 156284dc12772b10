#ifndef POLYDENS_POLY_TEXT_HPP
#define POLYDENS_POLY_TEXT_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

namespace polydens {

// Parses "x^3+0*x^2-2*x+7" into coefficients, lowest degree first.
// Accepted terms: [sign][integer][*][x[^exp]].  Whitespace is ignored.
// Repeated exponents accumulate.  Throws std::invalid_argument on syntax
// errors.
std::vector<mpz_class> parse_int_poly(const std::string& text);

// Renders highest degree first, omitting zero terms ("0" for the zero
// polynomial); unit coefficients print as "x^k" / "-x^k".
std::string int_poly_to_string(const std::vector<mpz_class>& coeffs_low_to_high);

}  // namespace polydens

#endif
