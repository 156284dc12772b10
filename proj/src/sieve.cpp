#include "polydens/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "polydens/zpoly.hpp"

namespace polydens {

std::vector<i64> primes_up_to(i64 limit, i64 cap) {
    if (limit > cap) throw BudgetError("primes_up_to: limit exceeds cap");
    if (limit < 2) return {};
    std::vector<char> composite(static_cast<size_t>(limit) + 1, 0);
    std::vector<i64> primes;
    for (i64 i = 2; i <= limit; ++i) {
        if (composite[static_cast<size_t>(i)]) continue;
        primes.push_back(i);
        for (i64 j = i * i; j <= limit; j += i) composite[static_cast<size_t>(j)] = 1;
    }
    return primes;
}

namespace {

double li_integrand(double t) { return 1.0 / std::log(t); }

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = li_integrand(lm), frm = li_integrand(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson(a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           adaptive_simpson(m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

}  // namespace

double li(double x) {
    if (!(x >= 2.0)) throw std::domain_error("li: x must be >= 2");
    if (x == 2.0) return 0.0;
    double a = 2.0, b = x;
    double fa = li_integrand(a), fb = li_integrand(b), fm = li_integrand(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    // relative tolerance 1e-9 against a crude magnitude estimate
    double eps = 1e-10 * std::max(1.0, whole);
    return adaptive_simpson(a, b, fa, fm, fb, whole, eps, 60);
}

bool HeightBox::contains(const std::vector<i64>& a) const {
    if (a.size() != exponents.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        double lim = bound(i);
        if (!(std::abs(static_cast<double>(a[i])) < lim)) return false;
    }
    return true;
}

double HeightBox::bound(size_t i) const { return std::pow(X, exponents[i]); }

// --------------------------------------------------------------------------
// Bad sets
// --------------------------------------------------------------------------

namespace {

// residues (a_1..a_n) -> monic f mod p^2, low-to-high
std::vector<i64> monic_from_tuple(const std::vector<i64>& a) {
    std::vector<i64> f(a.size() + 1);
    for (size_t i = 0; i < a.size(); ++i) f[i] = a[a.size() - 1 - i];
    f.back() = 1;
    return f;
}

bool sqf_bad_mod_p2(const std::vector<i64>& f, i64 p) {
    if (p == 2) {
        // v_2 = 1 never occurs, so bad <=> reduction not squarefree
        std::vector<i64> fbar(f.size());
        for (size_t i = 0; i < f.size(); ++i) fbar[i] = f[i] % 2;
        std::vector<i64> fd = fpk::derivative(fbar, 2);
        return fd.empty() || fpk::gcd(fbar, fd, 2).size() != 1;
    }
    DiscClass dc = disc_class_mod_p2(f, p);
    return dc.tag == DiscTag::valuation_ge_two || dc.tag == DiscTag::not_applicable;
}

}  // namespace

BadSetSpec bad_set_sqf_disc_monic(int n) {
    if (n < 1) throw std::invalid_argument("bad_set_sqf_disc_monic: n must be >= 1");
    BadSetSpec spec;
    spec.name = "sqf_disc_monic(" + std::to_string(n) + ")";
    spec.N = 2;
    spec.n = n;
    spec.provenance = BadSetProvenance::sqf_disc_monic;
    spec.member = [](const std::vector<i64>& a, i64 p, i64) {
        return sqf_bad_mod_p2(monic_from_tuple(a), p);
    };
    return spec;
}

BadSetSpec bad_set_max_monic(int n) {
    if (n < 1) throw std::invalid_argument("bad_set_max_monic: n must be >= 1");
    BadSetSpec spec;
    spec.name = "max_monic(" + std::to_string(n) + ")";
    spec.N = 2;
    spec.n = n;
    spec.provenance = BadSetProvenance::maximality_monic;
    spec.member = [](const std::vector<i64>& a, i64 p, i64) {
        return !maximal_mod_p2(monic_from_tuple(a), p);
    };
    return spec;
}

BadSetSpec bad_set_a4b3() {
    BadSetSpec spec;
    spec.name = "a4b3";
    spec.N = 2;
    spec.n = 2;
    spec.provenance = BadSetProvenance::a4b3;
    spec.member = [](const std::vector<i64>& a, i64, i64 pN) {
        i128 a2 = static_cast<i128>(a[0]) * a[0] % pN;
        i128 a4 = a2 * a2 % pN;
        i128 b2 = static_cast<i128>(a[1]) * a[1] % pN;
        i128 b3 = b2 * a[1] % pN;
        return (a4 + b3) % pN == 0;
    };
    return spec;
}

namespace {

i64 pow_pN(i64 p, int N) {
    i64 r = 1;
    for (int i = 0; i < N; ++i) {
        if (r > (i64(1) << 62) / p) throw BudgetError("p^N exceeds the 64-bit range");
        r *= p;
    }
    return r;
}

// rho' for a4b3 in O(p^N) memory: count pairs of units with a^4 = -b^3.
u64 rho_prime_a4b3_fast(i64 p, int N) {
    i64 pN = pow_pN(p, N);
    std::vector<u64> cube_count(static_cast<size_t>(pN), 0);
    for (i64 b = 1; b < pN; ++b) {
        if (b % p == 0) continue;
        i128 b2 = static_cast<i128>(b) * b % pN;
        cube_count[static_cast<size_t>(b2 * b % pN)] += 1;
    }
    u64 total = 0;
    for (i64 a = 1; a < pN; ++a) {
        if (a % p == 0) continue;
        i128 a2 = static_cast<i128>(a) * a % pN;
        i64 a4 = static_cast<i64>(a2 * a2 % pN);
        total += cube_count[static_cast<size_t>((pN - a4) % pN)];
    }
    return total;
}

}  // namespace

u64 rho_prime(i64 p, const BadSetSpec& spec, u64 budget) {
    if (!is_prime_i64(p)) throw std::invalid_argument("rho_prime: p must be prime");
    i64 pN = pow_pN(p, spec.N);
    if (spec.provenance == BadSetProvenance::a4b3) {
        if (static_cast<u64>(pN) > budget) throw BudgetError("rho_prime: p^N exceeds budget");
        return rho_prime_a4b3_fast(p, spec.N);
    }
    u64 units = static_cast<u64>(pN - pN / p);  // phi(p^N)
    u64 total = 1;
    for (int i = 0; i < spec.n; ++i) {
        if (total > budget / std::max<u64>(units, 1))
            throw BudgetError("rho_prime: phi(p^N)^n exceeds budget");
        total *= units;
    }
    std::vector<i64> unit_list;
    unit_list.reserve(units);
    for (i64 v = 1; v < pN; ++v)
        if (v % p != 0) unit_list.push_back(v);

    std::vector<u64> digit(static_cast<size_t>(spec.n), 0);
    std::vector<i64> tuple(static_cast<size_t>(spec.n), 0);
    u64 count = 0;
    for (u64 it = 0; it < total; ++it) {
        for (int i = 0; i < spec.n; ++i)
            tuple[static_cast<size_t>(i)] = unit_list[static_cast<size_t>(digit[static_cast<size_t>(i)])];
        if (spec.member(tuple, p, pN)) ++count;
        for (int i = 0; i < spec.n; ++i) {
            if (++digit[static_cast<size_t>(i)] < units) break;
            digit[static_cast<size_t>(i)] = 0;
        }
    }
    return count;
}

SingularSeries singular_series(const BadSetSpec& spec, i64 cutoff, i64 exact_crossover,
                               u64 per_prime_budget, bool skip_p2) {
    SingularSeries out;
    out.cutoff = cutoff;
    if (exact_crossover <= 0) {
        // largest p with phi(p^N)^n within the per-prime budget; a4b3 counts
        // in O(p^N) but is capped so the sum over primes stays small
        exact_crossover = 2;
        i64 hard_cap = (spec.provenance == BadSetProvenance::a4b3) ? 500 : 1000;
        for (i64 p = 3; p <= hard_cap; p += 2) {
            if (!is_prime_i64(p)) continue;
            double work = (spec.provenance == BadSetProvenance::a4b3)
                              ? std::pow(static_cast<double>(p), spec.N)
                              : std::pow(std::pow(static_cast<double>(p), spec.N) *
                                             (1.0 - 1.0 / static_cast<double>(p)),
                                         spec.n);
            if (work > static_cast<double>(per_prime_budget)) break;
            exact_crossover = p;
        }
    }
    exact_crossover = std::min(exact_crossover, cutoff);
    out.exact_up_to = exact_crossover;

    long double log_total = 0;
    for (i64 p : primes_up_to(exact_crossover)) {
        if (skip_p2 && p == 2) continue;
        i64 pN = pow_pN(p, spec.N);
        u64 units = static_cast<u64>(pN - pN / p);
        long double phin = 1;
        for (int i = 0; i < spec.n; ++i) phin *= static_cast<long double>(units);
        u64 rho = rho_prime(p, spec, per_prime_budget);
        long double factor = 1.0L - static_cast<long double>(rho) / phin;
        if (factor <= 0) {
            out.vanishing = true;
            out.value = 0;
            out.note = "local factor vanishes at p = " + std::to_string(p);
            return out;
        }
        log_total += logl(factor);
    }
    if (spec.provenance == BadSetProvenance::a4b3 && cutoff > exact_crossover) {
        for (i64 p : primes_up_to(cutoff)) {
            if (p <= exact_crossover) continue;  // skip_p2 is moot here (p > 2)
            long double pd = static_cast<long double>(p);
            log_total += log1pl(-1.0L / (pd * pd - pd));
        }
        out.note = "exact rho' to " + std::to_string(exact_crossover) +
                   ", closed-form factors to " + std::to_string(cutoff);
    } else {
        out.note = "exact rho' to " + std::to_string(exact_crossover) +
                   "; remaining factors truncated";
    }
    out.value = static_cast<double>(expl(log_total));
    return out;
}

// --------------------------------------------------------------------------
// Box enumeration
// --------------------------------------------------------------------------

namespace {

std::vector<std::vector<i64>> coordinate_primes(const HeightBox& box) {
    std::vector<std::vector<i64>> lists;
    for (size_t i = 0; i < box.exponents.size(); ++i) {
        double lim = box.bound(i);
        if (lim > 2e9) throw BudgetError("coordinate bound too large");
        std::vector<i64> primes = primes_up_to(static_cast<i64>(std::ceil(lim)));
        while (!primes.empty() && !(static_cast<double>(primes.back()) < lim)) primes.pop_back();
        lists.push_back(std::move(primes));
    }
    return lists;
}

std::vector<i64> factor_squarefree_i64(i64 m) {
    std::vector<i64> out;
    for (i64 q = 2; q * q <= m; ++q) {
        if (m % q == 0) {
            out.push_back(q);
            m /= q;
            if (m % q == 0) throw std::invalid_argument("incl_excl_term: m not squarefree");
        }
    }
    if (m > 1) out.push_back(m);
    return out;
}

template <class Fn>
void for_each_tuple(const std::vector<std::vector<i64>>& lists, u64 budget, Fn&& fn) {
    u64 total = 1;
    for (const auto& l : lists) {
        if (l.empty()) return;
        if (total > budget / l.size()) throw BudgetError("tuple enumeration exceeds budget");
        total *= l.size();
    }
    size_t n = lists.size();
    std::vector<size_t> idx(n, 0);
    std::vector<i64> tuple(n);
    for (size_t i = 0; i < n; ++i) tuple[i] = lists[i][0];
    for (u64 it = 0; it < total; ++it) {
        fn(const_cast<const std::vector<i64>&>(tuple));
        for (size_t i = 0; i < n; ++i) {
            if (++idx[i] < lists[i].size()) {
                tuple[i] = lists[i][idx[i]];
                break;
            }
            idx[i] = 0;
            tuple[i] = lists[i][0];
        }
    }
}

}  // namespace

u64 incl_excl_term(i64 m, const BadSetSpec& spec, const HeightBox& box, u64 budget) {
    if (m < 1) throw std::invalid_argument("incl_excl_term: m must be >= 1");
    if (static_cast<int>(box.exponents.size()) != spec.n)
        throw std::invalid_argument("incl_excl_term: box/spec arity mismatch");
    std::vector<i64> mprimes = factor_squarefree_i64(m);
    std::vector<i64> pNs;
    for (i64 p : mprimes) pNs.push_back(pow_pN(p, spec.N));

    auto lists = coordinate_primes(box);
    u64 count = 0;
    std::vector<i64> residues(static_cast<size_t>(spec.n));
    for_each_tuple(lists, budget, [&](const std::vector<i64>& tuple) {
        for (size_t k = 0; k < mprimes.size(); ++k) {
            for (size_t i = 0; i < tuple.size(); ++i) residues[i] = tuple[i] % pNs[k];
            if (!spec.member(residues, mprimes[k], pNs[k])) return;
        }
        ++count;
    });
    return count;
}

// --------------------------------------------------------------------------
// Experiments
// --------------------------------------------------------------------------

const char* to_string(ExperimentFamily f) {
    switch (f) {
        case ExperimentFamily::sqf_monic: return "sqf_monic";
        case ExperimentFamily::max_monic: return "max_monic";
        case ExperimentFamily::sqf_allcoeff: return "sqf_allcoeff";
        case ExperimentFamily::max_allcoeff: return "max_allcoeff";
        case ExperimentFamily::a4b3: return "a4b3";
    }
    return "?";
}

namespace {

bool family_is_monic_poly(ExperimentFamily f) {
    return f == ExperimentFamily::sqf_monic || f == ExperimentFamily::max_monic;
}

bool family_is_allcoeff(ExperimentFamily f) {
    return f == ExperimentFamily::sqf_allcoeff || f == ExperimentFamily::max_allcoeff;
}

bool family_is_max(ExperimentFamily f) {
    return f == ExperimentFamily::max_monic || f == ExperimentFamily::max_allcoeff;
}

// tuple -> the polynomial under test; allcoeff tuples are (a_0, ..., a_n)
ZPoly poly_from_tuple(ExperimentFamily family, const std::vector<i64>& t) {
    std::vector<mpz_class> c;
    if (family_is_monic_poly(family)) {
        c.resize(t.size() + 1);
        for (size_t i = 0; i < t.size(); ++i) c[i] = t[t.size() - 1 - i];
        c.back() = 1;
    } else {
        c.resize(t.size());
        for (size_t i = 0; i < t.size(); ++i) c[i] = t[t.size() - 1 - i];
    }
    return ZPoly(std::move(c));
}

// a_0^{n-1} f(x / a_0): the monic polynomial with the same local behavior at
// every prime not dividing the leading coefficient
ZPoly monicize(const ZPoly& f) {
    int n = f.degree();
    const mpz_class& a0 = f.lc();
    std::vector<mpz_class> c(static_cast<size_t>(n) + 1);
    mpz_class power = 1;  // a_0^{i-1} for the x^{n-i} coefficient
    c[static_cast<size_t>(n)] = 1;
    for (int i = 1; i <= n; ++i) {
        c[static_cast<size_t>(n - i)] = f.coeff(n - i) * power;
        power *= a0;
    }
    return ZPoly(std::move(c));
}

}  // namespace

MaxVerdict global_maximality(const ZPoly& f, const SqfBudget& budget, bool odd_part_only,
                             bool allcoeff_reduction) {
    if (f.degree() < 1) throw std::invalid_argument("global_maximality: deg f must be >= 1");
    if (!allcoeff_reduction && !f.is_monic())
        throw std::invalid_argument("global_maximality: f must be monic");
    mpz_class disc = discriminant(f);
    if (disc == 0) return MaxVerdict::not_maximal;  // repeated root, not an order
    IntSqfReport report = is_squarefree_int(disc, budget);

    // run the local test wherever v_q(disc) >= 2 is known; a failure settles
    // the answer even when the factorization is incomplete
    for (const auto& [q, e] : report.factors) {
        if (e < 2) continue;  // v_q(disc) <= 1 forces maximality at q
        if (odd_part_only && q == 2) continue;
        if (!q.fits_slong_p()) return MaxVerdict::unknown;
        ZPoly local = f;
        if (allcoeff_reduction) {
            if (mpz_divisible_p(f.lc().get_mpz_t(), q.get_mpz_t()))
                continue;  // prime divides the leading coefficient: outside the monic reduction
            local = monicize(f);
        }
        if (!is_maximal_at_p(local, q.get_si())) return MaxVerdict::not_maximal;
    }
    // an unfactored cofactor could still hide a square divisor
    return report.unfactored == 1 ? MaxVerdict::maximal : MaxVerdict::unknown;
}

ExperimentReport run_experiment(ExperimentKind kind, double X, bool odd_part_only,
                                u64 tuple_budget, u64 rho_iters_per_tuple,
                                std::vector<std::map<i64, u64>>* marginals) {
    ExperimentReport rep;
    rep.kind = kind;
    rep.X = X;
    rep.odd_part_only = odd_part_only;

    int n = kind.n;
    BadSetSpec spec;
    switch (kind.family) {
        case ExperimentFamily::sqf_monic:
            spec = bad_set_sqf_disc_monic(n);
            for (int i = 1; i <= n; ++i) rep.exponents.push_back(i);
            break;
        case ExperimentFamily::max_monic:
            spec = bad_set_max_monic(n);
            for (int i = 1; i <= n; ++i) rep.exponents.push_back(i);
            break;
        case ExperimentFamily::sqf_allcoeff:
            spec = bad_set_sqf_disc_monic(n);  // same local densities after monicization
            rep.exponents.assign(static_cast<size_t>(n) + 1, 1.0);
            break;
        case ExperimentFamily::max_allcoeff:
            spec = bad_set_max_monic(n);
            rep.exponents.assign(static_cast<size_t>(n) + 1, 1.0);
            break;
        case ExperimentFamily::a4b3:
            spec = bad_set_a4b3();
            rep.exponents = {3, 4};
            break;
    }

    HeightBox box{rep.exponents, X};
    auto lists = coordinate_primes(box);
    rep.total_tuples = 1;
    for (const auto& l : lists) rep.total_tuples *= l.size();

    std::vector<i64> trial_primes = primes_up_to(10'000);
    SqfBudget sqf_budget{10'000, rho_iters_per_tuple, &trial_primes};

    bool is_max = family_is_max(kind.family);
    bool allcoeff = family_is_allcoeff(kind.family);
    if (marginals) marginals->assign(lists.size(), {});
    auto record_good = [&](const std::vector<i64>& tuple) {
        ++rep.counted;
        if (marginals)
            for (size_t i = 0; i < tuple.size(); ++i) (*marginals)[i][tuple[i]] += 1;
    };

    for_each_tuple(lists, tuple_budget, [&](const std::vector<i64>& tuple) {
        mpz_class value;
        ZPoly f;
        if (kind.family == ExperimentFamily::a4b3) {
            mpz_class a = tuple[0], b = tuple[1];
            value = a * a * a * a + b * b * b;
        } else {
            f = poly_from_tuple(kind.family, tuple);
            if (f.degree() != n) return;  // cannot happen: coefficients are primes
            value = discriminant(f);
        }
        if (value == 0) return;  // degenerate: never squarefree, never maximal

        if (!is_max) {
            IntSqfReport sq = is_squarefree_int(value, sqf_budget, odd_part_only);
            if (sq.status == SqfStatus::yes) record_good(tuple);
            else if (sq.status == SqfStatus::unknown) ++rep.unknown;
            return;
        }
        switch (global_maximality(f, sqf_budget, odd_part_only, allcoeff)) {
            case MaxVerdict::maximal: record_good(tuple); break;
            case MaxVerdict::not_maximal: break;
            case MaxVerdict::unknown: ++rep.unknown; break;
        }
    });

    // predicted main term: the singular series times prod Li(X^{d_i});
    // odd_part_only drops the p = 2 local factor
    i64 ss_cutoff = (kind.family == ExperimentFamily::a4b3) ? 1'000'000 : 101;
    SingularSeries ss = singular_series(spec, ss_cutoff, 0, 2'000'000, odd_part_only);
    rep.singular_series_value = ss.value;
    rep.li_product = 1;
    for (double d : rep.exponents) {
        double b = std::pow(X, d);
        rep.li_product *= (b >= 2 ? li(b) : 0.0);
    }
    rep.predicted = ss.value * rep.li_product;
    if (rep.predicted > 0)
        rep.relative_gap = std::abs(static_cast<double>(rep.counted) - rep.predicted) / rep.predicted;
    else
        rep.relative_gap = (rep.counted == 0) ? 0 : std::numeric_limits<double>::infinity();
    rep.note = "Li(x) = int_2^x dt/ln t; boxes are strict (a < X^d); " + ss.note;
    return rep;
}

}  // namespace polydens
