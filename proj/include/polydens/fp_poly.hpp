#ifndef POLYDENS_FP_POLY_HPP
#define POLYDENS_FP_POLY_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polydens/common.hpp"
#include "polydens/prime_field.hpp"

namespace polydens {

// Dense polynomial over F_p.  Coefficients are stored lowest degree first,
// always reduced into [0, p), with no trailing zeros (the zero polynomial is
// the empty vector).  Printing renders highest degree first.
struct FpPoly {
    i64 p = 0;
    std::vector<i64> c;

    FpPoly() = default;
    FpPoly(i64 p_, std::vector<i64> coeffs_low_to_high);

    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c.empty(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    i64 lc() const { return c.empty() ? 0 : c.back(); }
    i64 coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<size_t>(i)] : 0;
    }
    bool operator==(const FpPoly&) const = default;
};

FpPoly fp_zero(i64 p);
FpPoly fp_const(i64 p, i64 value);
FpPoly fp_x(i64 p);                       // the polynomial x
FpPoly fp_x_plus(i64 p, i64 cconst);      // x + c
FpPoly fp_xn_minus_1(i64 p, i64 n);       // x^n - 1

// Ring arithmetic.  All binary operations require a.p == b.p and throw
// std::invalid_argument otherwise; division by zero throws std::domain_error.
FpPoly fp_add(const FpPoly& a, const FpPoly& b);
FpPoly fp_sub(const FpPoly& a, const FpPoly& b);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b);
std::pair<FpPoly, FpPoly> fp_divrem(const FpPoly& a, const FpPoly& b);  // a = q*b + r
FpPoly fp_mod(const FpPoly& a, const FpPoly& b);
FpPoly fp_scale(const FpPoly& a, i64 s);
FpPoly fp_pow(const FpPoly& a, u64 e);

FpPoly monic_normalize(const FpPoly& a);  // divide by lc; zero stays zero
FpPoly fp_derivative(const FpPoly& a);
i64 fp_eval(const FpPoly& a, i64 x);

// Monic greatest common divisor; gcd(0, 0) is rejected.
FpPoly fp_gcd(const FpPoly& a, const FpPoly& b);

// gcd(a, a') = 1.  Rejects the zero polynomial.
bool is_squarefree(const FpPoly& a);

// Product of the distinct monic irreducible factors.  Handles inseparable
// parts (a' = 0) via p-th roots, so it is correct in any characteristic.
FpPoly fp_radical(const FpPoly& a);

struct FactorBudget {
    u64 enum_budget = kDefaultEnumBudget;  // cap on p^d table generation
};

// Complete factorization unit * prod factors[i]^mult[i], factors monic
// irreducible, pairwise distinct, sorted by (degree, canonical index).
struct FpFactorization {
    i64 unit = 1;
    std::vector<std::pair<FpPoly, int>> factors;
};

FpFactorization factor(const FpPoly& a, const FactorBudget& budget = {});

// mu(u) = 0 unless u squarefree, else (-1)^{#irreducible factors}.
// Requires u monic nonzero.
int mobius(const FpPoly& u, const FactorBudget& budget = {});

// Cached tables of monic irreducibles by degree, built by trial division
// against smaller-degree irreducibles.
const std::vector<FpPoly>& irreducibles(i64 p, int deg, u64 enum_budget = kDefaultEnumBudget);

bool is_irreducible(const FpPoly& a, const FactorBudget& budget = {});

// ---------------------------------------------------------------------------
// Enumeration of monic degree-d polynomials, canonical order.
//
// Canonical order: a polynomial x^d + c_{d-1} x^{d-1} + ... + c_0 is ranked
// by the base-p integer with digits c_0 (least significant) .. c_{d-1}.
// nonzero_coeffs restricts every c_i to [1, p), yielding (p-1)^d items.
// ---------------------------------------------------------------------------

enum class MonicConstraint { all, nonzero_coeffs, squarefree, coprime_to_x };

class MonicRange {
  public:
    MonicRange(i64 p, int d, MonicConstraint constraint, u64 budget = kDefaultEnumBudget);

    // Next polynomial in canonical order, or nullopt when exhausted.
    std::optional<FpPoly> next();
    void reset() { cursor_ = 0; }

    // Number of raw index positions (before squarefree/coprime filtering).
    u64 raw_size() const { return raw_size_; }
    // Decode a raw index; for the filtered constraints the poly at an index
    // may fail the constraint (used for range splitting, filter after).
    FpPoly at(u64 index) const;
    bool admits(const FpPoly& f) const;

  private:
    i64 p_;
    int d_;
    MonicConstraint constraint_;
    u64 raw_size_ = 0;
    u64 cursor_ = 0;
};

template <class Fn>
void for_each_monic(i64 p, int d, MonicConstraint constraint, Fn&& fn,
                    u64 budget = kDefaultEnumBudget) {
    MonicRange range(p, d, constraint, budget);
    while (auto f = range.next()) fn(*f);
}

// Enumerates monic squarefree u of degree d as subset products of distinct
// irreducibles, passing mu(u) = (-1)^{#factors} along.  Factors x + c with
// c in excluded_roots are never used ({0} excludes the factor x).  This is
// the enumeration backing the Mobius series; it is cross-checked against
// MonicRange + mobius() in the tests.
void for_each_squarefree_monic(i64 p, int d, const std::vector<i64>& excluded_roots,
                               const std::function<void(const FpPoly&, int)>& fn,
                               u64 enum_budget = kDefaultEnumBudget);

// ---------------------------------------------------------------------------
// #{h in U_n(F_p) : u | h}, where U_n(F_p) is the set of monic degree-n
// polynomials with all coefficients nonzero.  Zero whenever x | u (every h
// has nonzero constant term) and whenever deg u > n.  Picks between a
// residue-walk DP (state space p^deg(u)) and a pruned quotient search
// (roughly (p-1)^{n-deg u} leaves), whichever is estimated cheaper.
// ---------------------------------------------------------------------------
u64 count_divisible(int n, i64 p, const FpPoly& u, u64 work_budget = kDefaultCountBudget);

// Index table of the multiply-by-x map on F_p[x]/(u) in the canonical
// digit encoding (residue c_0 + c_1 x + ... <-> sum c_i p^i).  Requires u
// monic of degree >= 1.
std::vector<i64> mulx_table(i64 p, const FpPoly& u, u64 budget = kDefaultEnumBudget);

i64 residue_index(const FpPoly& r, i64 p, int deg_u);
FpPoly residue_from_index(i64 p, int deg_u, i64 index);

// Text form "x^2+2*x+1 mod 3": explicit modulus, highest degree first.
std::string to_string(const FpPoly& f);
FpPoly parse_fp_poly(const std::string& text);

// Low-level kernels on raw coefficient vectors (reduced mod p, low-to-high,
// trimmed; zero polynomial = empty vector).  These back the FpPoly wrappers
// and the mod-p^2 predicates, which run them in tight loops.
namespace fpk {
i64 mod_reduce(i64 v, i64 p);
i64 mod_inv(i64 a, i64 p);
void trim(std::vector<i64>& c);
std::vector<i64> mul(const std::vector<i64>& a, const std::vector<i64>& b, i64 p);
// a becomes a mod b; quotient (optional) receives a div b
void divrem(std::vector<i64>& a, const std::vector<i64>& b, i64 p, std::vector<i64>* quotient);
std::vector<i64> gcd(std::vector<i64> a, std::vector<i64> b, i64 p);  // monic result
std::vector<i64> derivative(const std::vector<i64>& a, i64 p);
std::vector<i64> radical(std::vector<i64> f, i64 p);
}  // namespace fpk

}  // namespace polydens

#endif
