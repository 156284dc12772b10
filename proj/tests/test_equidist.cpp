#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polydens/equidist.hpp"

using namespace polydens;

namespace {

FpPoly P(const std::string& s) { return parse_fp_poly(s); }

// direct tuple enumeration of |A_n(u; alpha)| for all alpha
std::vector<u64> brute_class_counts(int n, i64 p, const FpPoly& u) {
    std::vector<u64> counts(static_cast<size_t>(ipow(p, static_cast<unsigned>(u.degree()))), 0);
    std::vector<i64> a(static_cast<size_t>(n), 1);
    for (;;) {
        std::vector<i64> coeffs(a.rbegin(), a.rend());
        FpPoly f(p, coeffs);
        counts[static_cast<size_t>(residue_index(fp_mod(f, u), p, u.degree()))] += 1;
        int i = 0;
        for (; i < n; ++i) {
            if (++a[static_cast<size_t>(i)] < p) break;
            a[static_cast<size_t>(i)] = 1;
        }
        if (i == n) break;
    }
    return counts;
}

}  // namespace

TEST_CASE("graph construction") {
    ResidueGraph g = build_graph(3, P("x+1 mod 3"));
    CHECK(g.n_vertices == 3);
    IntMatrix m = adjacency_int(g);
    for (int j = 0; j < 3; ++j) {  // out-degree: column sums
        mpz_class col = 0;
        for (int i = 0; i < 3; ++i) col += m.at(i, j);
        CHECK(col == 2);
    }
    // edge rule at u = x+1: beta = -alpha + c, c in {1, 2}: two ones per row
    for (int i = 0; i < 3; ++i) {
        mpz_class row = 0;
        for (int j = 0; j < 3; ++j) {
            CHECK((m.at(i, j) == 0 || m.at(i, j) == 1));
            row += m.at(i, j);
        }
        CHECK(row == 2);
    }
    for (int a = 0; a < 3; ++a)
        for (i64 c = 1; c < 3; ++c) CHECK(m.at(static_cast<int>((3 - a + c) % 3), a) == 1);

    CHECK(build_graph(3, P("x^2+1 mod 3")).n_vertices == 9);
    CHECK_THROWS_AS(build_graph(3, P("x mod 3")), std::invalid_argument);

    // trivial modulus u = 1: one vertex carrying p-1 loops
    ResidueGraph triv = build_graph(5, P("1 mod 5"));
    CHECK(triv.n_vertices == 1);
    CHECK(adjacency_int(triv).at(0, 0) == 4);
    CHECK(path_count(triv, 0, 0, 3) == 64);
    CHECK(residue_class_counts(triv, 3) == std::vector<u64>{64});
    CHECK(is_doubly_stochastic(adjacency(triv, true)));
}

TEST_CASE("normalized adjacency is doubly stochastic and fixes J~") {
    for (const char* us : {"x+1 mod 3", "x^2+1 mod 3", "x^2+x+1 mod 5"}) {
        FpPoly u = P(us);
        ResidueGraph g = build_graph(u.p, u);
        RatMatrix mt = adjacency(g, true);
        CHECK(is_doubly_stochastic(mt));
        RatMatrix j = RatMatrix::uniform(mt.dim);
        CHECK(mat_mul(mt, j) == j);
        CHECK(mat_mul(j, mt) == j);
    }
}

TEST_CASE("path counts") {
    ResidueGraph g = build_graph(3, P("x+2 mod 3"));
    CHECK(path_count(g, 1, 1, 0) == 1);
    CHECK(path_count(g, 1, 2, 0) == 0);
    // tuples in {1,2}^4 with sum = 0 mod 3 (u = x - 1 evaluates at x = 1)
    CHECK(path_count(g, 0, 0, 4) == 6);
    mpz_class total = 0;
    for (i64 beta = 0; beta < 3; ++beta) total += path_count(g, 0, beta, 4);
    CHECK(total == 16);
}

TEST_CASE("matrix and enumeration agree") {
    for (i64 p : {3, 5}) {
        for (int du = 1; du <= 2; ++du) {
            MonicRange us(p, du, MonicConstraint::coprime_to_x);
            while (auto u = us.next()) {
                ResidueGraph g = build_graph(p, *u);
                for (int n : {3, 5}) {
                    auto brute = brute_class_counts(n, p, *u);
                    auto walk = residue_class_counts(g, n);
                    for (i64 beta = 0; beta < g.n_vertices; ++beta) {
                        CHECK(walk[static_cast<size_t>(beta)] == brute[static_cast<size_t>(beta)]);
                        CHECK(path_count(g, 0, beta, static_cast<u64>(n)) ==
                              mpz_class(static_cast<long>(brute[static_cast<size_t>(beta)])));
                    }
                }
            }
        }
    }
}

TEST_CASE("delta examples") {
    CHECK(delta_exact(7, 3, 0).delta == 0);
    CHECK(delta_exact(4, 5, 0).delta == 0);

    DeltaReport r = delta_exact(4, 3, 1);
    CHECK(r.delta == mpq_class(1, 24));
    CHECK(r.bound_trivial == mpq_class(1, 2));
    // max attained at alpha = 0 (count 6 vs 16/3)
    CHECK(r.argmax_alpha == 0);

    for (i64 p : {3, 5})
        for (int d : {1, 2})
            for (int n = d; n <= 8; ++n)
                CHECK(delta_exact(n, p, d).delta <= mpq_class(1, ipow(p - 1, static_cast<unsigned>(d))));
}

TEST_CASE("delta bound suite") {
    for (i64 p : {3, 5}) {
        for (int d : {1, 2}) {
            for (int n = 2 * d; n <= 10; ++n) {
                DeltaReport r = delta_exact(n, p, d);
                double dv = mpq_get_d(r.delta.get_mpq_t());
                CHECK(dv <= mpq_get_d(r.bound_trivial.get_mpq_t()) + 1e-15);
                CHECK(dv <= r.bound_large_value + 1e-15);
                CHECK(dv <= r.bound_small_value + 1e-15);
            }
        }
    }
}

TEST_CASE("bound formulas") {
    CHECK(bound_large(4, 3, 1) == doctest::Approx(1.0 / 12));
    CHECK(bound_large(2, 3, 1) == doctest::Approx((1.0 / 3) * 0.5));  // exponent 1
    CHECK(bound_large(16, 3, 4) == doctest::Approx(4225.0 / 20736));
    CHECK(bound_large(3, 3, 2) == std::numeric_limits<double>::infinity());  // n < 2d
    CHECK(bound_large(8, 2, 1) == std::numeric_limits<double>::infinity());  // p = 2

    CHECK(bound_small(6, 3, 1) == doctest::Approx(std::exp(1.0 / 3 - 1.0)));
    CHECK(bound_small(18, 3, 1) == doctest::Approx(0.069483).epsilon(1e-4));
    CHECK(bound_small(1000000, 3, 1) < 1e-10);  // exponential decay in n
}

TEST_CASE("random doubly stochastic generator") {
    std::mt19937_64 rng(1234);
    for (int t = 0; t < 100; ++t) {
        RatMatrix m = random_doubly_stochastic(2 + t % 7, 1 + t % 8, rng);
        CHECK(is_doubly_stochastic(m));
    }
}

TEST_CASE("lemma suite passes and is deterministic") {
    LemmaCheckReport a = lemma_checks(3, 2, 6, 42, 40, 6);
    CHECK(a.all_pass);
    for (const auto& item : a.items) {
        INFO(item.name, ": ", item.detail);
        CHECK(item.pass);
        CHECK(item.cases > 0);
    }
    LemmaCheckReport b = lemma_checks(3, 2, 6, 42, 40, 6);
    REQUIRE(a.items.size() == b.items.size());
    for (size_t i = 0; i < a.items.size(); ++i) {
        CHECK(a.items[i].pass == b.items[i].pass);
        CHECK(a.items[i].cases == b.items[i].cases);
    }
}

TEST_CASE("entry bounds for M_u^{2d} match the direct inequalities") {
    // p = 3, d = 1: every entry of M_u^2 >= 2(p-1) - p = 1 and <= p-1 = 2
    for (const char* us : {"x+1 mod 3", "x+2 mod 3"}) {
        ResidueGraph g = build_graph(3, P(us));
        IntMatrix m2 = mat_pow(adjacency_int(g), 2);
        CHECK(min_entry(m2) >= 1);
        CHECK(max_entry(m2) <= 2);
    }
}
