#ifndef POLYDENS_ZPOLY_HPP
#define POLYDENS_ZPOLY_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "polydens/common.hpp"
#include "polydens/fp_poly.hpp"

namespace polydens {

// Integer polynomial, arbitrary-precision coefficients, lowest degree first,
// no trailing zeros.
struct ZPoly {
    std::vector<mpz_class> c;

    ZPoly() = default;
    explicit ZPoly(std::vector<mpz_class> coeffs);
    static ZPoly from_i64(const std::vector<i64>& coeffs_low_to_high);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    const mpz_class& lc() const;
    mpz_class coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<size_t>(i)] : mpz_class(0);
    }
    bool operator==(const ZPoly&) const = default;
};

ZPoly z_add(const ZPoly& a, const ZPoly& b);
ZPoly z_sub(const ZPoly& a, const ZPoly& b);
ZPoly z_mul(const ZPoly& a, const ZPoly& b);
ZPoly z_derivative(const ZPoly& a);
mpz_class z_eval(const ZPoly& a, const mpz_class& x);

FpPoly reduce_mod_p(const ZPoly& f, i64 p);
ZPoly lift_of(const FpPoly& f);  // coefficients in [0, p)

std::string to_string(const ZPoly& f);
ZPoly parse_zpoly(const std::string& text);

// Res(f, g) as a Sylvester determinant, fraction-free (Bareiss) elimination.
mpz_class resultant_sylvester(const ZPoly& f, const ZPoly& g);
// Res(f, g) by the subresultant polynomial remainder sequence.
mpz_class resultant_subresultant(const ZPoly& f, const ZPoly& g);

// (-1)^{n(n-1)/2} Res(f, f') / lc(f); an integer for integral f (any lc).
// The primary path is the Sylvester determinant; `discriminant_prs` is the
// independent cross-check route.
mpz_class discriminant(const ZPoly& f);
mpz_class discriminant_prs(const ZPoly& f);

// --------------------------------------------------------------------------
// The two mod-p^2 local predicates.
// --------------------------------------------------------------------------

enum class DiscTag { unit, valuation_one, valuation_ge_two, not_applicable };

struct DiscClass {
    DiscTag tag = DiscTag::not_applicable;
    // Present for valuation_one / valuation_ge_two: the repeated root is -c
    // (c in [0, p)), and f_at_c = f(-c) mod p^2.
    std::optional<std::pair<i64, i64>> witness;
};

const char* to_string(DiscTag tag);

// v_p(disc f) classification from f mod p^2 alone:
//   unit             <=> f mod p squarefree          (v = 0)
//   valuation_one    <=> f mod p = (x+c)^2 g, g squarefree, (x+c) not | g,
//                        and p^2 not | f(-c)         (v = 1, p odd)
//   valuation_ge_two  -- same shape but p^2 | f(-c)  (v >= 2)
//   not_applicable    -- any other repeated shape    (v >= 2)
// Throws std::domain_error if p = 2 and f mod 2 is not squarefree (the
// valuation-one branch requires p odd).
DiscClass disc_valuation_class(const ZPoly& f, i64 p);

// Dedekind's criterion at p: with f mod p = prod g_i^{e_i}, g = prod g_i,
// h = (f mod p)/g, monic lifts, T = (g~ h~ - f)/p, the order Z_p[x]/(f) is
// maximal iff gcd(T mod p, g, h) = 1.  Uses only f mod p^2.
bool is_maximal_at_p(const ZPoly& f, i64 p);

// f in (p, u~)^2 = (p^2, p u~, u~^2) for a monic lift u~ of u.  Decided by:
// u^2 | f mod p, and (f - u~^2 lift(f/u^2 mod p)) / p = 0 mod (p, u).
// The inclusion-exclusion over irreducible factors of f mod p serves as the
// independent oracle for is_maximal_at_p.
bool ideal_membership_sq(const ZPoly& f, i64 p, const FpPoly& u);

// Raw-vector versions used by the exhaustive density loops: f_mod_p2 holds
// the coefficients of a monic f reduced into [0, p^2).
DiscClass disc_class_mod_p2(const std::vector<i64>& f_mod_p2, i64 p);
bool maximal_mod_p2(const std::vector<i64>& f_mod_p2, i64 p);

// --------------------------------------------------------------------------
// Integer squarefree detection
// --------------------------------------------------------------------------

enum class SqfStatus { yes, no, unknown };

struct SqfBudget {
    i64 trial_bound = 1'000'000;
    u64 rho_iters = 10'000;
    // Optional pre-sieved primes for trial division (ascending, from 2); when
    // null an internal 2-3-5 wheel is used.
    const std::vector<i64>* primes = nullptr;
};

struct IntSqfReport {
    SqfStatus status = SqfStatus::unknown;
    std::vector<std::pair<mpz_class, int>> factors;  // known prime factors, ascending
    mpz_class unfactored = 1;                        // composite cofactor left behind
};

// Squarefreeness of |N| via trial division then Pollard-Brent rho within
// budget.  status == unknown carries the partial factorization; the answer
// is correct whenever status != unknown.  odd_part_only ignores the exponent
// of 2 ("odd part of N is squarefree").  N = 0 is rejected.
IntSqfReport is_squarefree_int(const mpz_class& N, const SqfBudget& budget = {},
                               bool odd_part_only = false);

}  // namespace polydens

#endif
