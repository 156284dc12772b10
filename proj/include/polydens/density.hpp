#ifndef POLYDENS_DENSITY_HPP
#define POLYDENS_DENSITY_HPP

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

#include "polydens/common.hpp"
#include "polydens/fp_poly.hpp"

namespace polydens {

enum class DensityKind { sqf, max };
enum class DensityRoute { brute_force_mod_p2, mobius_series };

const char* to_string(DensityKind k);
const char* to_string(DensityRoute r);

struct DensityReport {
    int n = 0;
    i64 p = 0;
    DensityKind kind = DensityKind::sqf;
    mpq_class exact;
    mpq_class main_term_value;
    double error_bound_value = 0;
    DensityRoute route = DensityRoute::brute_force_mod_p2;
};

// Exact density of {disc squarefree} / {maximal} polynomials among monic
// degree-n f with unit coefficients, by exhaustive enumeration of coefficient
// tuples in (units mod p^2)^n.  Both predicates depend on f mod p^2 only, so
// this counting density equals the Haar density in U_n(Z_p).
DensityReport local_density_brute(int n, i64 p, DensityKind kind,
                                  u64 budget = kDefaultBruteBudget);

// The same densities by Mobius inclusion-exclusion over squarefree moduli,
// with every #{h in U_n : w | h} term computed by count_divisible.  p odd.
// Exactly equal to the brute-force route whenever both are computable.
DensityReport local_density_series(int n, i64 p, DensityKind kind,
                                   u64 budget = kDefaultCountBudget);

// 1 - (3p-1)/(p(p+1)^2)  (sqf)  /  1 - 1/(p^2+p+1)  (max); p odd.
mpq_class main_term(i64 p, DensityKind kind);

// Closed forms at p = 2: parity rule for sqf; the cyclotomic product for max.
mpq_class p2_density(int n, DensityKind kind);
// Exhaustive second route: 2^n odd-coefficient lifts mod 4 through the
// Dedekind test (max), the squarefree test of x^n + ... + 1 over F_2 (sqf).
mpq_class p2_density_brute(int n, DensityKind kind);

struct CyclotomicData {
    struct Row {
        i64 d = 0;
        i64 ord2 = 0;  // multiplicative order of 2 mod d
        i64 phi = 0;
    };
    i64 t = 0;
    std::vector<Row> divisors;
    mpq_class value;  // prod_{d | t} (1 - 2^{-ord})^{phi/ord}
};

CyclotomicData p_t(i64 t);  // t odd positive

// |R^x| / |R| for R = F_2[x]/(x^t - 1), via factorization of x^t - 1; the
// independent route for the cyclotomic product.
mpq_class unit_fraction_f2(i64 t);

enum class ProductKind { sqf_limit, max_limit, a4b3, yamamura, lenstra };

const char* to_string(ProductKind k);

struct EulerProduct {
    ProductKind kind = ProductKind::a4b3;
    i64 cutoff = 0;
    double value = 0;
    double tail_bound = 0;  // bound on the absolute truncation error
    std::string note;
};

// Product of the local factors over primes <= cutoff, accumulated in
// log-space with extended precision, ascending fixed block order.
EulerProduct euler_product(ProductKind kind, i64 cutoff);

// Custom local factors 1 - deficit(p); deficit must be O(1/p^2) with
// constant <= tail_constant for the tail estimate to apply.
EulerProduct euler_product_custom(const std::function<double(i64)>& deficit, i64 cutoff,
                                  double tail_constant = 3.0,
                                  const std::string& label = "custom");

enum class LseriesVariant { no_x, no_x_no_c };

struct LseriesCheck {
    i64 p = 0;
    LseriesVariant variant = LseriesVariant::no_x;
    int D = 0;
    mpq_class partial;
    mpq_class target;
    mpq_class gap;
    mpq_class bound;  // 2 / p^D
    bool ok = false;
};

// Partial sums of sum mu(u)/p^{2 deg u} over monic squarefree u of degree
// <= D with x (and x+c, c = 1) excluded as divisors, against the closed
// forms p/(p+1) and p^3/((p-1)(p+1)^2).
LseriesCheck lseries_identity_check(i64 p, LseriesVariant variant, int D,
                                    u64 budget = kDefaultEnumBudget);

// Theorem-shaped error envelope with implied constant 1 (diagnostic, not a
// certified bound); +infinity outside the n >= 16, p odd hypotheses.
double error_bound(int n, i64 p, DensityKind kind);

}  // namespace polydens

#endif
