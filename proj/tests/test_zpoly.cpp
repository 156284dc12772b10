#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polydens/zpoly.hpp"

using namespace polydens;

namespace {

ZPoly Z(const std::string& s) { return parse_zpoly(s); }

int valuation(mpz_class n, i64 p) {
    if (n == 0) return INT32_MAX;
    int v = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

ZPoly random_monic(std::mt19937_64& rng, int deg, i64 lo, i64 hi) {
    std::uniform_int_distribution<i64> dc(lo, hi);
    std::vector<mpz_class> c(static_cast<size_t>(deg) + 1);
    for (int i = 0; i < deg; ++i) c[static_cast<size_t>(i)] = dc(rng);
    c.back() = 1;
    return ZPoly(std::move(c));
}

// Dedekind oracle: maximal iff no irreducible factor of f mod p gives
// membership in (p, g)^2.
bool maximal_by_membership(const ZPoly& f, i64 p) {
    FpPoly fbar = reduce_mod_p(f, p);
    for (const auto& [g, m] : factor(fbar).factors)
        if (ideal_membership_sq(f, p, g)) return false;
    return true;
}

}  // namespace

TEST_CASE("discriminant examples") {
    CHECK(discriminant(Z("x^2+3*x+2")) == 1);    // b^2 - 4c = 9 - 8
    CHECK(discriminant(Z("x^3+x+1")) == -31);    // -4a^3 - 27b^2
    CHECK(discriminant(Z("x^2+2*x+1")) == 0);
    CHECK(discriminant(Z("x+5")) == 1);
    CHECK_THROWS_AS(discriminant(Z("7")), std::domain_error);
}

TEST_CASE("discriminant closed forms as independent oracles") {
    std::mt19937_64 rng(9001);
    std::uniform_int_distribution<i64> dc(-50, 50);
    for (int iter = 0; iter < 500; ++iter) {
        i64 b = dc(rng), c = dc(rng);
        // x^2 + bx + c -> b^2 - 4c
        ZPoly q(std::vector<mpz_class>{mpz_class(c), mpz_class(b), mpz_class(1)});
        CHECK(discriminant(q) == mpz_class(b) * b - 4 * mpz_class(c));
        // x^3 + ax + b -> -4a^3 - 27b^2
        i64 a = dc(rng);
        ZPoly cu(std::vector<mpz_class>{mpz_class(b), mpz_class(a), mpz_class(0), mpz_class(1)});
        CHECK(discriminant(cu) == -4 * mpz_class(a) * a * a - 27 * mpz_class(b) * b);
    }
}

TEST_CASE("sylvester and subresultant routes agree") {
    std::mt19937_64 rng(9002);
    std::uniform_int_distribution<i64> dc(-50, 50);
    std::uniform_int_distribution<int> dd(1, 6);
    for (int iter = 0; iter < 400; ++iter) {
        int deg = dd(rng);
        std::vector<mpz_class> c(static_cast<size_t>(deg) + 1);
        for (auto& v : c) v = dc(rng);
        if (c.back() == 0) c.back() = 1;
        ZPoly f(std::move(c));
        if (f.degree() < 1) continue;
        CHECK(discriminant(f) == discriminant_prs(f));
    }
}

TEST_CASE("disc valuation classification examples") {
    DiscClass dc = disc_valuation_class(Z("x^2+x+1"), 3);
    CHECK(dc.tag == DiscTag::valuation_one);       // disc = -3
    REQUIRE(dc.witness.has_value());
    CHECK(dc.witness->first == 2);                 // f mod 3 = (x+2)^2

    CHECK(disc_valuation_class(Z("x^2+1"), 3).tag == DiscTag::unit);           // disc = -4
    CHECK(disc_valuation_class(Z("x^2+2*x+10"), 3).tag == DiscTag::valuation_ge_two);  // disc = -36

    CHECK(disc_valuation_class(Z("x^2+x+1"), 2).tag == DiscTag::unit);  // irreducible mod 2
    CHECK_THROWS_AS(disc_valuation_class(Z("x^2+2*x+1"), 2), std::domain_error);
}

TEST_CASE("valuation classification vs direct discriminant valuation") {
    std::mt19937_64 rng(9003);
    std::uniform_int_distribution<int> dd(1, 4);
    for (i64 p : {3, 5}) {
        for (int iter = 0; iter < 2000; ++iter) {
            ZPoly f = random_monic(rng, dd(rng), -50, 50);
            mpz_class disc = discriminant(f);
            int v = valuation(disc, p);
            DiscClass dc = disc_valuation_class(f, p);
            switch (dc.tag) {
                case DiscTag::unit: CHECK(v == 0); break;
                case DiscTag::valuation_one: CHECK(v == 1); break;
                case DiscTag::valuation_ge_two:
                case DiscTag::not_applicable: CHECK(v >= 2); break;
            }
        }
    }
}

TEST_CASE("dedekind criterion examples") {
    CHECK(is_maximal_at_p(Z("x^2+3"), 3));
    CHECK(!is_maximal_at_p(Z("x^2-9"), 3));
    CHECK(is_maximal_at_p(Z("x^2+1"), 3));  // squarefree mod 3
}

TEST_CASE("ideal membership examples") {
    CHECK(ideal_membership_sq(Z("x^2-9"), 3, parse_fp_poly("x mod 3")));
    CHECK(!ideal_membership_sq(Z("x^2+3"), 3, parse_fp_poly("x mod 3")));
    // f squarefree mod p: u^2 never divides f mod p
    CHECK(!ideal_membership_sq(Z("x^2+1"), 3, parse_fp_poly("x mod 3")));
    CHECK(!ideal_membership_sq(Z("x^2+1"), 3, parse_fp_poly("x+1 mod 3")));
    // x^2 - 9 = (x-3)(x+3) in (9, 3x, x^2)? yes: x^2 - 9 = x^2 - 9*1
    CHECK(ideal_membership_sq(Z("x^2-18"), 3, parse_fp_poly("x mod 3")));
}

TEST_CASE("dedekind vs ideal-membership oracle, 10^4 samples") {
    std::mt19937_64 rng(9004);
    std::uniform_int_distribution<int> dd(1, 4);
    int total = 0;
    for (i64 p : {2, 3, 5}) {
        for (int iter = 0; iter < 3500; ++iter) {
            ZPoly f = random_monic(rng, dd(rng), -50, 50);
            CHECK(is_maximal_at_p(f, p) == maximal_by_membership(f, p));
            ++total;
        }
    }
    CHECK(total >= 10000);
}

TEST_CASE("squarefree discriminant forces maximality") {
    std::mt19937_64 rng(9005);
    std::uniform_int_distribution<int> dd(1, 4);
    for (i64 p : {3, 5}) {
        for (int iter = 0; iter < 2000; ++iter) {
            ZPoly f = random_monic(rng, dd(rng), -50, 50);
            if (valuation(discriminant(f), p) <= 1) CHECK(is_maximal_at_p(f, p));
        }
    }
}

TEST_CASE("locality: predicates depend on f mod p^2 only") {
    std::mt19937_64 rng(9006);
    std::uniform_int_distribution<int> dd(1, 4);
    std::uniform_int_distribution<int> dcoef(0, 3);
    std::uniform_int_distribution<i64> dshift(-3, 3);
    for (i64 p : {3, 5}) {
        for (int iter = 0; iter < 500; ++iter) {
            ZPoly f = random_monic(rng, dd(rng), -50, 50);
            ZPoly g = f;
            int idx = dcoef(rng) % (f.degree() == 0 ? 1 : f.degree());
            g.c[static_cast<size_t>(idx)] += dshift(rng) * p * p;
            CHECK(is_maximal_at_p(f, p) == is_maximal_at_p(g, p));
            DiscClass a = disc_valuation_class(f, p), b = disc_valuation_class(g, p);
            CHECK(a.tag == b.tag);
        }
    }
}

TEST_CASE("integer squarefree detection") {
    CHECK(is_squarefree_int(12).status == SqfStatus::no);
    CHECK(is_squarefree_int(-31).status == SqfStatus::yes);
    CHECK(is_squarefree_int(30030).status == SqfStatus::yes);  // 2*3*5*7*11*13
    CHECK(is_squarefree_int(1).status == SqfStatus::yes);
    CHECK(is_squarefree_int(-1).status == SqfStatus::yes);
    CHECK_THROWS_AS(is_squarefree_int(0), std::domain_error);

    // trial-division oracle agreement on a dense range
    for (i64 n = 2; n <= 3000; ++n) {
        bool brute = true;
        for (i64 d = 2; d * d <= n; ++d)
            if (n % (d * d) == 0) { brute = false; break; }
        CHECK((is_squarefree_int(n).status == SqfStatus::yes) == brute);
    }
}

TEST_CASE("integer squarefree: odd part and budget behavior") {
    CHECK(is_squarefree_int(48, {}, true).status == SqfStatus::yes);   // odd part 3
    CHECK(is_squarefree_int(48, {}, false).status == SqfStatus::no);
    CHECK(is_squarefree_int(9 * 48, {}, true).status == SqfStatus::no);

    // square of a large prime: settled by the perfect-square check even
    // with no rho budget
    mpz_class p("1000000007");
    SqfBudget tiny{1000, 0};
    CHECK(is_squarefree_int(p * p, tiny).status == SqfStatus::no);

    // product of two distinct large primes: unresolvable without rho
    mpz_class q("1000000009");
    IntSqfReport r = is_squarefree_int(p * q, tiny);
    CHECK(r.status == SqfStatus::unknown);
    CHECK(r.unfactored == p * q);

    // same number with rho budget resolves
    SqfBudget normal{1000, 100000};
    CHECK(is_squarefree_int(p * q, normal).status == SqfStatus::yes);
    CHECK(is_squarefree_int(p * p * q, normal).status == SqfStatus::no);
}

TEST_CASE("zpoly text round trip") {
    CHECK(to_string(Z("x^3+0*x^2-2*x+7")) == "x^3-2*x+7");
    CHECK(Z("x^3-2*x+7").coeff(1) == -2);
    std::mt19937_64 rng(9007);
    for (int iter = 0; iter < 200; ++iter) {
        ZPoly f = random_monic(rng, 1 + iter % 6, -99, 99);
        CHECK(parse_zpoly(to_string(f)) == f);
    }
}
