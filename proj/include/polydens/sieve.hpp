#ifndef POLYDENS_SIEVE_HPP
#define POLYDENS_SIEVE_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polydens/common.hpp"
#include "polydens/zpoly.hpp"

namespace polydens {

// Sieve of Eratosthenes; ascending primes <= limit.
std::vector<i64> primes_up_to(i64 limit, i64 cap = kDefaultPrimeCap);

// Logarithmic integral int_2^x dt/ln t by adaptive quadrature, relative
// error <= 1e-9.  Rejects x < 2.
double li(double x);

// Height box: |a_i| < X^{d_i} for each coordinate.
struct HeightBox {
    std::vector<double> exponents;
    double X = 0;

    bool contains(const std::vector<i64>& a) const;
    double bound(size_t i) const;  // X^{d_i}
};

enum class BadSetProvenance { sqf_disc_monic, maximality_monic, a4b3, custom };

// A congruence-defined bad set mod p^N: the predicate sees the residue tuple
// (each residue in [0, p^N)) and must be pure and total.
struct BadSetSpec {
    std::string name;
    int N = 2;
    int n = 0;  // tuple length
    BadSetProvenance provenance = BadSetProvenance::custom;
    std::function<bool(const std::vector<i64>& residues, i64 p, i64 pN)> member;
};

// The paper-provided families.  For the monic families a residue tuple
// (a_1, ..., a_n) encodes f = x^n + a_1 x^{n-1} + ... + a_n.
BadSetSpec bad_set_sqf_disc_monic(int n);
BadSetSpec bad_set_max_monic(int n);
BadSetSpec bad_set_a4b3();

// rho'(p^N) = #{unit residue tuples mod p^N inside the bad set}.
u64 rho_prime(i64 p, const BadSetSpec& spec, u64 budget = kDefaultBruteBudget);

struct SingularSeries {
    double value = 1;
    i64 exact_up_to = 0;     // exact rho' used for p <= this
    i64 cutoff = 0;          // closed-form factors extended to here (a4b3)
    bool vanishing = false;  // some local factor is zero
    std::string note;
};

// prod_p (1 - rho'(p^N) / phi(p^N)^n).  Exact rho' up to a crossover chosen
// from the per-prime budget; the a4b3 provenance continues with its closed
// form 1 - 1/(p^2-p) up to the cutoff.  exact_crossover = 0 picks the
// default.  skip_p2 drops the p = 2 factor (odd-part normalization).
SingularSeries singular_series(const BadSetSpec& spec, i64 cutoff = 1'000'000,
                               i64 exact_crossover = 0,
                               u64 per_prime_budget = 2'000'000, bool skip_p2 = false);

// N'_B(m, X): prime tuples in the box lying in B_p for every p | m.
// m must be squarefree; m = 1 counts the whole box.
u64 incl_excl_term(i64 m, const BadSetSpec& spec, const HeightBox& box,
                   u64 budget = kDefaultBruteBudget);

enum class MaxVerdict { maximal, not_maximal, unknown };

// Global maximality of Z[x]/(f): factor disc(f) within budget and run the
// local test at every prime q with q^2 | disc (v_q(disc) <= 1 forces local
// maximality, so no other prime matters).  odd_part_only skips q = 2
// ("maximal except possibly at 2").  allcoeff_reduction applies the monic
// reduction a_0^{n-1} f(x/a_0) at primes not dividing the leading
// coefficient and skips primes that do divide it.  unknown when the
// discriminant's factorization does not resolve within budget.
MaxVerdict global_maximality(const ZPoly& f, const SqfBudget& budget = {},
                             bool odd_part_only = false, bool allcoeff_reduction = false);

enum class ExperimentFamily { sqf_monic, max_monic, sqf_allcoeff, max_allcoeff, a4b3 };

struct ExperimentKind {
    ExperimentFamily family = ExperimentFamily::a4b3;
    int n = 0;  // degree for the polynomial families; ignored for a4b3
};

const char* to_string(ExperimentFamily f);

struct ExperimentReport {
    ExperimentKind kind;
    double X = 0;
    bool odd_part_only = false;
    std::vector<double> exponents;
    u64 total_tuples = 0;
    u64 counted = 0;
    u64 unknown = 0;
    double singular_series_value = 1;
    double li_product = 0;
    double predicted = 0;      // singular_series_value * prod li(X^{d_i})
    double relative_gap = 0;   // |counted - predicted| / predicted
    std::string note;
};

// Enumerates all prime tuples in the height box and evaluates the global
// predicate exactly (integer factorization within budget); tuples whose
// squarefree test cannot be settled are counted as unknown, never guessed.
// When non-null, `marginals` receives, per coordinate, the count of good
// tuples at each prime value of that coordinate.
ExperimentReport run_experiment(ExperimentKind kind, double X, bool odd_part_only = false,
                                u64 tuple_budget = kDefaultBruteBudget,
                                u64 rho_iters_per_tuple = 20'000,
                                std::vector<std::map<i64, u64>>* marginals = nullptr);

}  // namespace polydens

#endif
