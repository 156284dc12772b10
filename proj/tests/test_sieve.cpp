#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "polydens/density.hpp"
#include "polydens/sieve.hpp"

using namespace polydens;

namespace {

// independent li oracle: composite 16-point Gauss-Legendre on [2, x]
double li_gauss(double x) {
    static const double nodes[8] = {0.0950125098376374, 0.2816035507792589,
                                    0.4580167776572274, 0.6178762444026438,
                                    0.7554044083550030, 0.8656312023878318,
                                    0.9445750230732326, 0.9894009349916499};
    static const double weights[8] = {0.1894506104550685, 0.1826034150449236,
                                      0.1691565193950025, 0.1495959888165767,
                                      0.1246289712555339, 0.0951585116824928,
                                      0.0622535239386479, 0.0271524594117541};
    // geometric segments: the integrand is steep near t = 2
    const int segments = 4000;
    double total = 0;
    double ratio = std::pow(x / 2.0, 1.0 / segments);
    double lo = 2.0;
    for (int s = 0; s < segments; ++s) {
        double hi = (s + 1 == segments) ? x : lo * ratio;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < 8; ++i) {
            total += weights[i] * half / std::log(mid + half * nodes[i]);
            total += weights[i] * half / std::log(mid - half * nodes[i]);
        }
        lo = hi;
    }
    return total;
}

u64 brute_rho(i64 p, int N, const BadSetSpec& spec) {
    i64 pN = 1;
    for (int i = 0; i < N; ++i) pN *= p;
    std::vector<i64> units;
    for (i64 v = 1; v < pN; ++v)
        if (v % p != 0) units.push_back(v);
    std::vector<size_t> idx(static_cast<size_t>(spec.n), 0);
    std::vector<i64> tuple(static_cast<size_t>(spec.n));
    u64 total = 1, count = 0;
    for (int i = 0; i < spec.n; ++i) total *= units.size();
    for (u64 it = 0; it < total; ++it) {
        for (int i = 0; i < spec.n; ++i) tuple[static_cast<size_t>(i)] = units[idx[static_cast<size_t>(i)]];
        if (spec.member(tuple, p, pN)) ++count;
        for (int i = 0; i < spec.n; ++i) {
            if (++idx[static_cast<size_t>(i)] < units.size()) break;
            idx[static_cast<size_t>(i)] = 0;
        }
    }
    return count;
}

}  // namespace

TEST_CASE("height box membership") {
    HeightBox box{{1, 2}, 10.0};  // |a| < 10, |b| < 100
    CHECK(box.contains({7, 97}));
    CHECK(box.contains({-9, -99}));
    CHECK(!box.contains({11, 5}));
    CHECK(!box.contains({3, 100}));  // boundary excluded (strict)
    CHECK(!box.contains({10, 5}));
    CHECK(!box.contains({3}));  // arity mismatch
}

TEST_CASE("prime sieve") {
    CHECK(primes_up_to(10) == std::vector<i64>{2, 3, 5, 7});
    CHECK(primes_up_to(2) == std::vector<i64>{2});
    CHECK(primes_up_to(1) == std::vector<i64>{});
    CHECK(primes_up_to(1000000).size() == 78498);
    CHECK_THROWS_AS(primes_up_to(100, 50), BudgetError);
}

TEST_CASE("logarithmic integral") {
    CHECK(li(2) == 0.0);
    CHECK(li(1000000) == doctest::Approx(78626.5).epsilon(1e-5));
    CHECK(li(10000) < li(1000000));
    CHECK_THROWS_AS(li(1.5), std::domain_error);
    for (double x : {10.0, 100.0, 5000.0, 250000.0}) {
        INFO("x = ", x);
        CHECK(li(x) == doctest::Approx(li_gauss(x)).epsilon(1e-9));
    }
}

TEST_CASE("rho prime examples") {
    CHECK(rho_prime(3, bad_set_a4b3()) == 6);
    CHECK(rho_prime(3, bad_set_sqf_disc_monic(2)) == 6);  // 9 | a^2 - 4b
    // empty bad set at p = 2 for the monic quadratic family: a odd makes
    // a^2 - 4b odd
    CHECK(rho_prime(2, bad_set_sqf_disc_monic(2)) == 0);
}

TEST_CASE("a4b3 fast counting matches generic enumeration and the closed form") {
    for (i64 p : {2, 3, 5, 7, 11, 13}) {
        BadSetSpec fast = bad_set_a4b3();
        BadSetSpec generic = fast;
        generic.provenance = BadSetProvenance::custom;  // forces the odometer path
        u64 r = rho_prime(p, fast);
        CHECK(r == rho_prime(p, generic));
        CHECK(r == brute_rho(p, 2, fast));
        // the paper's local factor 1 - 1/(p^2-p) means rho' = phi(p^2)
        CHECK(r == static_cast<u64>(p * p - p));
    }
}

TEST_CASE("local factors equal the density module brute force") {
    for (i64 p : {3, 5}) {
        for (int n = 2; n <= 3; ++n) {
            u64 phi = static_cast<u64>(p * (p - 1));
            u64 phin = 1;
            for (int i = 0; i < n; ++i) phin *= phi;
            {
                u64 rho = rho_prime(p, bad_set_sqf_disc_monic(n));
                mpq_class factor = 1 - mpq_class(static_cast<long>(rho), static_cast<long>(phin));
                factor.canonicalize();
                CHECK(factor == local_density_brute(n, p, DensityKind::sqf).exact);
            }
            {
                u64 rho = rho_prime(p, bad_set_max_monic(n));
                mpq_class factor = 1 - mpq_class(static_cast<long>(rho), static_cast<long>(phin));
                factor.canonicalize();
                CHECK(factor == local_density_brute(n, p, DensityKind::max).exact);
            }
        }
    }
}

TEST_CASE("bad set predicates are mod-p^N congruence conditions") {
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<i64> dv(1, 1000000);
    for (i64 p : {3, 5}) {
        i64 p2 = p * p;
        BadSetSpec spec = bad_set_sqf_disc_monic(3);
        for (int t = 0; t < 200; ++t) {
            std::vector<i64> tuple(3), reduced(3);
            bool unit = true;
            for (int i = 0; i < 3; ++i) {
                tuple[static_cast<size_t>(i)] = dv(rng);
                reduced[static_cast<size_t>(i)] = tuple[static_cast<size_t>(i)] % p2;
                unit = unit && tuple[static_cast<size_t>(i)] % p != 0;
            }
            if (!unit) continue;
            std::vector<i64> shifted = reduced;
            for (int i = 0; i < 3; ++i)
                shifted[static_cast<size_t>(i)] = (shifted[static_cast<size_t>(i)] + p2 * (t % 3)) % p2;
            CHECK(spec.member(reduced, p, p2) == spec.member(shifted, p, p2));
        }
    }
}

TEST_CASE("singular series") {
    SingularSeries a = singular_series(bad_set_a4b3(), 1000000);
    CHECK(a.value == doctest::Approx(0.3740).epsilon(5e-3));
    CHECK(!a.vanishing);
    CHECK(a.exact_up_to >= 100);

    SingularSeries s = singular_series(bad_set_sqf_disc_monic(2), 101);
    // p = 2 factor is 1; odd factors are 1 - 1/(p^2-p): ~0.75 at this depth
    CHECK(s.value == doctest::Approx(0.750).epsilon(5e-3));
}

TEST_CASE("inclusion-exclusion terms") {
    BadSetSpec spec = bad_set_a4b3();
    HeightBox box{{3, 4}, 5.0};  // a < 125, b < 625

    // m = 1 counts the whole box
    u64 total = incl_excl_term(1, spec, box);
    CHECK(total == static_cast<u64>(primes_up_to(124).size()) * primes_up_to(624).size());

    // m = 2 against a direct double loop: 4 | a^4 + b^3
    u64 direct = 0;
    for (i64 a : primes_up_to(124))
        for (i64 b : primes_up_to(624)) {
            i64 v = (a % 4) * (a % 4) % 4;
            v = v * v % 4;
            i64 w = (b % 4) * (b % 4) % 4 * (b % 4) % 4;
            if ((v + w) % 4 == 0) ++direct;
        }
    CHECK(incl_excl_term(2, spec, box) == direct);
    CHECK_THROWS_AS(incl_excl_term(12, spec, box), std::invalid_argument);  // not squarefree

    // an empty bad set kills every term
    BadSetSpec never;
    never.name = "empty";
    never.N = 2;
    never.n = 2;
    never.member = [](const std::vector<i64>&, i64, i64) { return false; };
    CHECK(incl_excl_term(2, never, box) == 0);
    CHECK(incl_excl_term(15, never, box) == 0);

    // CRT consistency: membership for m = 15 is the conjunction
    u64 both = 0;
    for (i64 a : primes_up_to(124))
        for (i64 b : primes_up_to(624)) {
            std::vector<i64> r3{a % 9, b % 9}, r5{a % 25, b % 25};
            if (spec.member(r3, 3, 9) && spec.member(r5, 5, 25)) ++both;
        }
    CHECK(incl_excl_term(15, spec, box) == both);
}

TEST_CASE("bonferroni bracketing on a tiny a4b3 box") {
    HeightBox box{{3, 4}, 3.0};  // a < 27, b < 81
    std::vector<i64> as = primes_up_to(26), bs = primes_up_to(80);

    // per-tuple bad prime sets by complete trial-division factorization
    // (values < 1031^2, so this is exact)
    std::vector<i64> small = primes_up_to(1030);
    u64 exact = 0;
    std::map<int, u64> tuples_with_k_bad;
    std::set<i64> all_bad_primes;
    for (i64 a : as)
        for (i64 b : bs) {
            i64 v = a * a * a * a + b * b * b;
            int bad = 0;
            for (i64 q : small) {
                if (q * q > v) break;
                int e = 0;
                while (v % q == 0) { v /= q; ++e; }
                if (e >= 2) { ++bad; all_bad_primes.insert(q); }
            }
            tuples_with_k_bad[bad] += 1;
            if (bad == 0) ++exact;
        }

    // Bonferroni: restricting inclusion-exclusion to omega(m) <= r brackets
    // the exact count, upper for even r, lower for odd r
    auto binom = [](int n, int k) -> long {
        if (k < 0 || k > n) return 0;
        long r = 1;
        for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
        return r;
    };
    for (int r = 0; r <= 4; ++r) {
        long double partial = 0;
        for (const auto& [k, cnt] : tuples_with_k_bad) {
            long sum = 0;
            for (int j = 0; j <= std::min(r, k); ++j) sum += ((j % 2) ? -1 : 1) * binom(k, j);
            partial += static_cast<long double>(sum) * cnt;
        }
        if (r % 2 == 0)
            CHECK(partial >= static_cast<long double>(exact));
        else
            CHECK(partial <= static_cast<long double>(exact));
    }

    // cross-check incl_excl_term against the per-tuple sets for a few m
    BadSetSpec spec = bad_set_a4b3();
    for (i64 m : {2, 3, 6}) {
        u64 direct = 0;
        for (i64 a : as)
            for (i64 b : bs) {
                bool in_all = true;
                for (i64 q : {i64(2), i64(3)}) {
                    if (m % q != 0) continue;
                    std::vector<i64> res{a % (q * q), b % (q * q)};
                    if (!spec.member(res, q, q * q)) { in_all = false; break; }
                }
                if (in_all) ++direct;
            }
        CHECK(incl_excl_term(m, spec, box) == direct);
    }
}

TEST_CASE("global maximality inspects exactly the primes with square disc divisors") {
    std::mt19937_64 rng(556);
    std::uniform_int_distribution<i64> dc(1, 60);
    std::vector<i64> hundred = primes_up_to(100);
    for (int t = 0; t < 400; ++t) {
        std::vector<mpz_class> c{dc(rng), dc(rng), dc(rng), 1};
        ZPoly f(std::move(c));
        if (discriminant(f) == 0) continue;
        MaxVerdict v = global_maximality(f);
        REQUIRE(v != MaxVerdict::unknown);
        bool all = true;
        for (i64 p : hundred) all = all && is_maximal_at_p(f, p);
        CHECK((v == MaxVerdict::maximal) == all);
    }
}

TEST_CASE("experiments, tiny scale") {
    // empty box: no primes below X^{d_i}
    ExperimentReport empty = run_experiment({ExperimentFamily::a4b3, 0}, 1.1);
    CHECK(empty.total_tuples == 0);
    CHECK(empty.counted == 0);
    CHECK(empty.relative_gap == 0);

    // a4b3 at X = 3 against an independent trial-division oracle
    ExperimentReport r = run_experiment({ExperimentFamily::a4b3, 0}, 3.0);
    CHECK(r.unknown == 0);
    u64 oracle = 0;
    for (i64 a : primes_up_to(26))
        for (i64 b : primes_up_to(80)) {
            i64 v = a * a * a * a + b * b * b;
            bool sqf = true;
            for (i64 q = 2; q * q <= v; ++q) {
                int e = 0;
                while (v % q == 0) { v /= q; ++e; }
                if (e >= 2) { sqf = false; break; }
            }
            if (sqf) ++oracle;
        }
    CHECK(r.counted == oracle);
    CHECK(r.total_tuples == static_cast<u64>(primes_up_to(26).size()) * primes_up_to(80).size());

    // sqf_monic(2) at X = 7 finishes with everything resolved
    ExperimentReport s = run_experiment({ExperimentFamily::sqf_monic, 2}, 7.0);
    CHECK(s.unknown == 0);
    CHECK(s.counted <= s.total_tuples);
    CHECK(s.predicted > 0);
    CHECK(std::isfinite(s.relative_gap));

    // max_monic(2) at X = 5 against direct local tests at all p <= 100
    ExperimentReport m = run_experiment({ExperimentFamily::max_monic, 2}, 5.0);
    CHECK(m.unknown == 0);
    u64 oracle_max = 0;
    for (i64 a : primes_up_to(4))
        for (i64 b : primes_up_to(24)) {
            ZPoly f(std::vector<mpz_class>{b, a, 1});
            if (discriminant(f) == 0) continue;
            bool ok = true;
            for (i64 p : primes_up_to(100)) ok = ok && is_maximal_at_p(f, p);
            if (ok) ++oracle_max;
        }
    CHECK(m.counted == oracle_max);
}

TEST_CASE("odd part handling in experiments") {
    // a = 2 rows of the monic quadratic family have 4 | disc, so the plain
    // squarefree count excludes them while the odd-part count may keep them
    ExperimentReport plain = run_experiment({ExperimentFamily::sqf_monic, 2}, 10.0, false);
    ExperimentReport odd = run_experiment({ExperimentFamily::sqf_monic, 2}, 10.0, true);
    CHECK(plain.unknown == 0);
    CHECK(odd.unknown == 0);
    CHECK(odd.counted > plain.counted);
    CHECK(plain.counted <= 75);  // the 25 tuples with a = 2 all have 4 | disc
}
