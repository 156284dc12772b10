#ifndef POLYDENS_EQUIDIST_HPP
#define POLYDENS_EQUIDIST_HPP

#include <gmpxx.h>

#include <random>
#include <string>
#include <vector>

#include "polydens/common.hpp"
#include "polydens/fp_poly.hpp"

namespace polydens {

// Dense exact matrices.  Entry (i, j) is row i, column j; for adjacency
// matrices the column indexes the source vertex, so (A^n)_{beta,alpha}
// counts length-n paths alpha -> beta.

struct IntMatrix {
    int dim = 0;
    std::vector<mpz_class> a;

    IntMatrix() = default;
    explicit IntMatrix(int d) : dim(d), a(static_cast<size_t>(d) * static_cast<size_t>(d), 0) {}
    mpz_class& at(int i, int j) { return a[static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(j)]; }
    const mpz_class& at(int i, int j) const { return a[static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(j)]; }
    static IntMatrix identity(int d);
    bool operator==(const IntMatrix&) const = default;
};

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y);
IntMatrix mat_pow(const IntMatrix& x, u64 e);
mpz_class min_entry(const IntMatrix& m);
mpz_class max_entry(const IntMatrix& m);

struct RatMatrix {
    int dim = 0;
    std::vector<mpq_class> a;

    RatMatrix() = default;
    explicit RatMatrix(int d) : dim(d), a(static_cast<size_t>(d) * static_cast<size_t>(d), 0) {}
    mpq_class& at(int i, int j) { return a[static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(j)]; }
    const mpq_class& at(int i, int j) const { return a[static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(j)]; }
    static RatMatrix identity(int d);
    static RatMatrix uniform(int d);  // J~ = (1/d) J
    bool operator==(const RatMatrix&) const = default;
};

RatMatrix mat_mul(const RatMatrix& x, const RatMatrix& y);
RatMatrix mat_sub(const RatMatrix& x, const RatMatrix& y);
RatMatrix mat_pow(const RatMatrix& x, u64 e);
RatMatrix to_rational(const IntMatrix& m, const mpz_class& denominator);

bool is_doubly_stochastic(const RatMatrix& m);
mpq_class e_min(const RatMatrix& m);
mpq_class e_max(const RatMatrix& m);
mpq_class norm_max(const RatMatrix& m);  // dim * max |entry|
mpq_class mpq_pow(const mpq_class& x, u64 e);

// Uniform convex combination of k random permutation matrices (exact
// rational weights), hence doubly stochastic by construction.
RatMatrix random_doubly_stochastic(int dim, int k, std::mt19937_64& rng);
RatMatrix random_rational_matrix(int dim, std::mt19937_64& rng);  // entries in [-10, 10]

// --------------------------------------------------------------------------
// The residue graph G_u on F_p[x]/(u): edges alpha -> alpha x + c for
// c in F_p \ {0}.  Requires x not | u; (p-1)-regular in both directions.
// --------------------------------------------------------------------------

struct ResidueGraph {
    i64 p = 0;
    FpPoly u;
    int d = 0;            // deg u
    i64 n_vertices = 0;   // p^d
    std::vector<i64> mulx;  // vertex index of (residue * x mod u)
};

ResidueGraph build_graph(i64 p, const FpPoly& u, u64 budget = kDefaultEnumBudget);

IntMatrix adjacency_int(const ResidueGraph& g);
// normalized: M~ = (p-1)^{-1} M, verified doubly stochastic.
RatMatrix adjacency(const ResidueGraph& g, bool normalized);

// (M^n)_{beta, alpha}: exact path count via repeated matrix squaring.
mpz_class path_count(const ResidueGraph& g, i64 alpha, i64 beta, u64 n);

// Residue-class counts |A_n(u; alpha)| for all alpha at once (walk DP from
// the zero residue); much cheaper than the matrix power.
std::vector<u64> residue_class_counts(const ResidueGraph& g, int n);

// --------------------------------------------------------------------------
// The equidistribution discrepancy
//   delta_{n,p}(d) = max_u max_alpha | |A_n(u;alpha)|/(p-1)^n - p^{-d} |
// over monic u of degree d with x not | u.
// --------------------------------------------------------------------------

struct DeltaReport {
    int n = 0;
    i64 p = 0;
    int d = 0;
    mpq_class delta;
    FpPoly argmax_u;
    i64 argmax_alpha = 0;  // canonical residue index
    mpq_class bound_trivial;  // (p-1)^{-d}
    double bound_large_value = 0;
    double bound_small_value = 0;
};

DeltaReport delta_exact(int n, i64 p, int d, u64 budget = kDefaultCountBudget);

// Theorem-shaped upper bounds; +infinity outside their hypotheses.
double bound_large(int n, i64 p, int d);  // p^{-d} ((p/(p-1))^d - 1)^{floor(n/2d)}, n >= 2d >= 2, p odd
double bound_small(int n, i64 p, int d);  // e^{1/3} exp(-n / ((d^2+d) p^{d^2})), p odd

// --------------------------------------------------------------------------
// Exact verification of the doubly-stochastic toolbox on graph matrices and
// seeded random matrices.
// --------------------------------------------------------------------------

struct LemmaCheckReport {
    struct Item {
        std::string name;
        bool pass = false;
        u64 cases = 0;
        std::string detail;  // first counterexample, if any
    };
    std::vector<Item> items;
    bool all_pass = true;
};

LemmaCheckReport lemma_checks(i64 p, int d_max, int n_max, u64 seed, int n_random = 100,
                              int random_dim_max = 8);

}  // namespace polydens

#endif
