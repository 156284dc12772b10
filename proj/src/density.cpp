#include "polydens/density.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "polydens/sieve.hpp"
#include "polydens/zpoly.hpp"

namespace polydens {

const char* to_string(DensityKind k) { return k == DensityKind::sqf ? "sqf" : "max"; }

const char* to_string(DensityRoute r) {
    return r == DensityRoute::brute_force_mod_p2 ? "brute_force_mod_p2" : "mobius_series";
}

const char* to_string(ProductKind k) {
    switch (k) {
        case ProductKind::sqf_limit: return "sqf_limit";
        case ProductKind::max_limit: return "max_limit";
        case ProductKind::a4b3: return "a4b3";
        case ProductKind::yamamura: return "yamamura";
        case ProductKind::lenstra: return "lenstra";
    }
    return "?";
}

mpq_class main_term(i64 p, DensityKind kind) {
    if (p == 2) throw std::invalid_argument("main_term: p = 2 has its own closed forms");
    if (!is_prime_i64(p)) throw std::invalid_argument("main_term: p must be prime");
    mpq_class r;
    if (kind == DensityKind::sqf)
        r = 1 - mpq_class(3 * p - 1, p * (p + 1) * (p + 1));
    else
        r = 1 - mpq_class(1, p * p + p + 1);
    r.canonicalize();
    return r;
}

double error_bound(int n, i64 p, DensityKind kind) {
    if (n < 16 || p == 2) return std::numeric_limits<double>::infinity();
    double ratio = static_cast<double>(p) / (static_cast<double>(p - 1) * (p - 1));
    double logratio = std::log(static_cast<double>(n)) / std::log(static_cast<double>(p));
    if (kind == DensityKind::sqf) {
        double e1 = std::pow(ratio, 2.5);
        double e2 = std::pow(ratio, std::floor(std::sqrt(logratio)) / 2.0);
        return std::min(e1, e2);
    }
    double e1 = std::pow(static_cast<double>(p - 1), -4.0);
    double e2 = std::pow(static_cast<double>(p - 1),
                         -2.0 * std::floor(std::sqrt(logratio / 4.0)));
    return std::min(e1, e2);
}

// --------------------------------------------------------------------------
// Brute force over (units mod p^2)^n
// --------------------------------------------------------------------------

namespace {

mpq_class make_density(const mpz_class& count, const mpz_class& total) {
    mpq_class q(count, total);
    q.canonicalize();
    return q;
}

DensityReport finish_report(int n, i64 p, DensityKind kind, DensityRoute route,
                            mpq_class exact) {
    DensityReport rep;
    rep.n = n;
    rep.p = p;
    rep.kind = kind;
    rep.route = route;
    rep.exact = std::move(exact);
    rep.main_term_value = (p == 2) ? p2_density(n, kind) : main_term(p, kind);
    rep.error_bound_value = error_bound(n, p, kind);
    return rep;
}

// predicate evaluation on one monic mod-p^2 coefficient vector
bool predicate_mod_p2(const std::vector<i64>& f, i64 p, DensityKind kind) {
    if (kind == DensityKind::max) return maximal_mod_p2(f, p);
    DiscClass dc = disc_class_mod_p2(f, p);
    return dc.tag == DiscTag::unit || dc.tag == DiscTag::valuation_one;
}

}  // namespace

DensityReport local_density_brute(int n, i64 p, DensityKind kind, u64 budget) {
    if (n < 1) throw std::invalid_argument("local_density_brute: n must be >= 1");
    if (!is_prime_i64(p)) throw std::invalid_argument("local_density_brute: p must be prime");

    if (p == 2) {
        // units mod 4 are {1, 3}; 2^n lifts of the single element of U_n(F_2)
        u64 total = upow_checked(2, static_cast<unsigned>(n), "local_density_brute");
        if (total > budget) throw BudgetError("local_density_brute: 2^n exceeds budget");
        u64 good = 0;
        std::vector<int> digit(static_cast<size_t>(n), 0);
        std::vector<i64> f(static_cast<size_t>(n) + 1, 1);
        for (u64 it = 0; it < total; ++it) {
            for (int i = 0; i < n; ++i) f[static_cast<size_t>(i)] = digit[static_cast<size_t>(i)] ? 3 : 1;
            bool ok;
            if (kind == DensityKind::max) {
                ok = maximal_mod_p2(f, 2);
            } else {
                // v_2(disc) = 1 is impossible, so squarefree <=> unit disc
                std::vector<i64> fbar(f.size());
                for (size_t i = 0; i < f.size(); ++i) fbar[i] = f[i] % 2;
                std::vector<i64> fd = fpk::derivative(fbar, 2);
                ok = !fd.empty() && fpk::gcd(fbar, fd, 2).size() == 1;
            }
            if (ok) ++good;
            for (int i = 0; i < n; ++i) {
                if (++digit[static_cast<size_t>(i)] < 2) break;
                digit[static_cast<size_t>(i)] = 0;
            }
        }
        return finish_report(n, 2, kind, DensityRoute::brute_force_mod_p2,
                             make_density(i64(good), i64(total)));
    }

    i64 p2 = p * p;
    std::vector<i64> units;
    units.reserve(static_cast<size_t>(p * (p - 1)));
    for (i64 v = 1; v < p2; ++v)
        if (v % p != 0) units.push_back(v);
    u64 base = static_cast<u64>(units.size());
    u64 total = upow_checked(base, static_cast<unsigned>(n), "local_density_brute");
    if (total > budget) throw BudgetError("local_density_brute: phi(p^2)^n exceeds budget");

    std::vector<u64> digit(static_cast<size_t>(n), 0);
    std::vector<i64> f(static_cast<size_t>(n) + 1, 0);
    f.back() = 1;
    u64 good = 0;
    for (u64 it = 0; it < total; ++it) {
        for (int i = 0; i < n; ++i) f[static_cast<size_t>(i)] = units[static_cast<size_t>(digit[static_cast<size_t>(i)])];
        if (predicate_mod_p2(f, p, kind)) ++good;
        for (int i = 0; i < n; ++i) {
            if (++digit[static_cast<size_t>(i)] < base) break;
            digit[static_cast<size_t>(i)] = 0;
        }
    }
    return finish_report(n, p, kind, DensityRoute::brute_force_mod_p2,
                         make_density(i64(good), i64(total)));
}

// --------------------------------------------------------------------------
// Mobius series route
// --------------------------------------------------------------------------

DensityReport local_density_series(int n, i64 p, DensityKind kind, u64 budget) {
    if (n < 1) throw std::invalid_argument("local_density_series: n must be >= 1");
    if (p == 2) throw std::invalid_argument("local_density_series: p must be odd");
    if (!is_prime_i64(p)) throw std::invalid_argument("local_density_series: p must be prime");

    mpz_class pn1;  // (p-1)^n
    mpz_ui_pow_ui(pn1.get_mpz_t(), static_cast<unsigned long>(p - 1), static_cast<unsigned long>(n));

    if (kind == DensityKind::max) {
        // sum_u mu(u) p^{-deg u} #{h : u^2 | h} / (p-1)^n over squarefree
        // monic u with x not | u and 2 deg u <= n
        int dmax = n / 2;
        mpz_class acc = 0;  // sum mu(u) c(u^2) p^{dmax - deg u}
        for (int d = 0; d <= dmax; ++d) {
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p),
                          static_cast<unsigned long>(dmax - d));
            for_each_squarefree_monic(p, d, {0}, [&](const FpPoly& u, int mu) {
                u64 cnt = count_divisible(n, p, fp_mul(u, u), budget);
                if (cnt == 0) return;
                mpz_class term = scale * i64(cnt);
                if (mu < 0) acc -= term;
                else acc += term;
            });
        }
        mpz_class denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(dmax));
        return finish_report(n, p, kind, DensityRoute::mobius_series,
                             make_density(acc, denom * pn1));
    }

    // squarefree-discriminant density, the three-sum inclusion-exclusion:
    //   A: u^2 | h over all u
    //   B: (x+c)^2 u^2 | h over c != 0, x+c not | u,  weighted (1 - 1/p)
    //   C: (x+c)^3 u^2 | h, subtracted with the same weight
    mpz_class acc_a = 0, acc_b = 0, acc_c = 0;
    for (int d = 0; 2 * d <= n; ++d) {
        for_each_squarefree_monic(p, d, {0}, [&](const FpPoly& u, int mu) {
            u64 cnt = count_divisible(n, p, fp_mul(u, u), budget);
            if (cnt == 0) return;
            if (mu < 0) acc_a -= i64(cnt);
            else acc_a += i64(cnt);
        });
    }
    for (i64 cval = 1; cval < p; ++cval) {
        FpPoly xc = fp_x_plus(p, cval);
        FpPoly xc2 = fp_mul(xc, xc);
        FpPoly xc3 = fp_mul(xc2, xc);
        for (int d = 0; 2 * d + 2 <= n; ++d) {
            for_each_squarefree_monic(p, d, {0, cval}, [&](const FpPoly& u, int mu) {
                FpPoly usq = fp_mul(u, u);
                u64 cnt2 = count_divisible(n, p, fp_mul(usq, xc2), budget);
                if (cnt2 != 0) {
                    if (mu < 0) acc_b -= i64(cnt2);
                    else acc_b += i64(cnt2);
                }
                if (2 * d + 3 <= n) {
                    u64 cnt3 = count_divisible(n, p, fp_mul(usq, xc3), budget);
                    if (cnt3 != 0) {
                        if (mu < 0) acc_c -= i64(cnt3);
                        else acc_c += i64(cnt3);
                    }
                }
            });
        }
    }
    // P = A/(p-1)^n + (1 - 1/p)(B - C)/(p-1)^n = (pA + (p-1)(B - C)) / (p (p-1)^n)
    mpz_class num = p * acc_a + (p - 1) * (acc_b - acc_c);
    return finish_report(n, p, kind, DensityRoute::mobius_series,
                         make_density(num, p * pn1));
}

// --------------------------------------------------------------------------
// p = 2 closed forms
// --------------------------------------------------------------------------

namespace {

i64 multiplicative_order_of_2(i64 d) {
    if (d == 1) return 1;
    if (d % 2 == 0) throw std::invalid_argument("order of 2 requires odd modulus");
    i64 r = 2 % d, ord = 1;
    while (r != 1) {
        r = r * 2 % d;
        ++ord;
    }
    return ord;
}

i64 euler_phi_i64(i64 n) {
    i64 result = n;
    for (i64 q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            result -= result / q;
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

mpq_class mpq_pow_local(const mpq_class& x, u64 e) {
    mpq_class r = 1, b = x;
    while (e) {
        if (e & 1) r *= b;
        if (e >>= 1) b *= b;
    }
    return r;
}

}  // namespace

CyclotomicData p_t(i64 t) {
    if (t < 1 || t % 2 == 0) throw std::invalid_argument("p_t: t must be odd positive");
    CyclotomicData data;
    data.t = t;
    data.value = 1;
    for (i64 d = 1; d <= t; ++d) {
        if (t % d != 0) continue;
        CyclotomicData::Row row;
        row.d = d;
        row.ord2 = multiplicative_order_of_2(d);
        row.phi = euler_phi_i64(d);
        if (row.phi % row.ord2 != 0)
            throw std::logic_error("p_t: ord does not divide phi");
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(row.ord2));
        mpq_class factor(den - 1, den);
        factor.canonicalize();
        data.value *= mpq_pow_local(factor, static_cast<u64>(row.phi / row.ord2));
        data.divisors.push_back(row);
    }
    data.value.canonicalize();
    return data;
}

mpq_class unit_fraction_f2(i64 t) {
    if (t < 1 || t % 2 == 0) throw std::invalid_argument("unit_fraction_f2: t must be odd positive");
    FpFactorization f = factor(fp_xn_minus_1(2, t));
    mpz_class units = 1;
    for (const auto& [g, m] : f.factors) {
        if (m != 1) throw std::logic_error("unit_fraction_f2: x^t - 1 not squarefree");
        mpz_class q;
        mpz_ui_pow_ui(q.get_mpz_t(), 2, static_cast<unsigned long>(g.degree()));
        units *= q - 1;
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(t));
    mpq_class r(units, den);
    r.canonicalize();
    return r;
}

mpq_class p2_density(int n, DensityKind kind) {
    if (n < 1) throw std::invalid_argument("p2_density: n must be >= 1");
    if (kind == DensityKind::sqf) {
        if (n == 1 || n % 2 == 0) return 1;
        return 0;
    }
    i64 m = n + 1;
    if (m % 2 == 1) return 1;
    i64 t = m;
    int e = 0;
    while (t % 2 == 0) {
        t /= 2;
        ++e;
    }
    mpq_class pt = p_t(t).value;
    return (e == 1) ? 2 * pt : pt;
}

mpq_class p2_density_brute(int n, DensityKind kind) {
    if (n < 1) throw std::invalid_argument("p2_density_brute: n must be >= 1");
    if (kind == DensityKind::sqf) {
        FpPoly h0(2, std::vector<i64>(static_cast<size_t>(n) + 1, 1));
        return is_squarefree(h0) ? 1 : 0;
    }
    return local_density_brute(n, 2, DensityKind::max).exact;
}

// --------------------------------------------------------------------------
// Euler products
// --------------------------------------------------------------------------

namespace {

// log-space accumulation in fixed blocks of 4096 primes, ascending, so the
// reduction order (and hence the result) is independent of scheduling
EulerProduct accumulate_euler(const std::function<long double(i64)>& deficit, i64 cutoff,
                              long double tail_constant) {
    if (cutoff < 3) throw std::invalid_argument("euler_product: cutoff must be >= 3");
    std::vector<i64> primes = primes_up_to(cutoff);
    constexpr size_t kBlock = 4096;
    long double log_total = 0;
    for (size_t start = 0; start < primes.size(); start += kBlock) {
        long double block = 0;
        size_t end = std::min(primes.size(), start + kBlock);
        for (size_t i = start; i < end; ++i) {
            long double d = deficit(primes[i]);
            if (d > 0) block += log1pl(-d);
        }
        log_total += block;
    }
    // |log factor| <= 2 A / p^2 beyond the cutoff;
    // sum_{p > X} p^{-2} <= int_X^inf dt / (t^2 log t) <= 1 / (X log X)
    long double tail_log = 2.0L * tail_constant /
                           (static_cast<long double>(cutoff) * logl(static_cast<long double>(cutoff)));
    EulerProduct result;
    result.cutoff = cutoff;
    result.value = static_cast<double>(expl(log_total));
    result.tail_bound = static_cast<double>(expl(log_total) * expm1l(tail_log));
    result.note = "truncated at " + std::to_string(cutoff) +
                  "; tail estimated by the integral envelope";
    return result;
}

}  // namespace

EulerProduct euler_product(ProductKind kind, i64 cutoff) {
    auto local_deficit = [&](i64 p) -> long double {  // factor = 1 - deficit
        long double pd = static_cast<long double>(p);
        switch (kind) {
            case ProductKind::sqf_limit:
                if (p == 2) return 0;
                return (3 * pd - 1) / (pd * (pd + 1) * (pd + 1));
            case ProductKind::max_limit:
                if (p == 2) return 0;
                return 1 / (pd * pd + pd + 1);
            case ProductKind::a4b3:
                return 1 / (pd * pd - pd);
            case ProductKind::yamamura:
                if (p == 2) return 0;
                return (3 * pd - 1) / (pd * pd * (pd + 1));
            case ProductKind::lenstra:
                if (p == 2) return 0;
                return 1 / (pd * pd);
        }
        return 0;
    };
    // A <= 3 for every kind
    EulerProduct result = accumulate_euler(local_deficit, cutoff, 3.0L);
    result.kind = kind;
    return result;
}

EulerProduct euler_product_custom(const std::function<double(i64)>& deficit, i64 cutoff,
                                  double tail_constant, const std::string& label) {
    EulerProduct result = accumulate_euler(
        [&](i64 p) { return static_cast<long double>(deficit(p)); }, cutoff,
        static_cast<long double>(tail_constant));
    result.note = label + "; " + result.note;
    return result;
}

// --------------------------------------------------------------------------
// L-series identities
// --------------------------------------------------------------------------

LseriesCheck lseries_identity_check(i64 p, LseriesVariant variant, int D, u64 budget) {
    if (!is_prime_i64(p)) throw std::invalid_argument("lseries: p must be prime");
    if (D < 0) throw std::invalid_argument("lseries: D must be >= 0");
    if (variant == LseriesVariant::no_x_no_c && p == 2)
        throw std::invalid_argument("lseries: the no_x_no_c variant needs p odd (c != 0)");

    std::vector<i64> excluded{0};
    if (variant == LseriesVariant::no_x_no_c) excluded.push_back(1);  // c = 1, by symmetry

    // common denominator p^{2D}
    mpz_class acc = 0;
    for (int d = 0; d <= D; ++d) {
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(2 * (D - d)));
        for_each_squarefree_monic(p, d, excluded, [&](const FpPoly&, int mu) {
            if (mu < 0) acc -= scale;
            else acc += scale;
        }, budget);
    }
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(2 * D));

    LseriesCheck check;
    check.p = p;
    check.variant = variant;
    check.D = D;
    check.partial = make_density(acc, denom);
    if (variant == LseriesVariant::no_x) {
        check.target = mpq_class(p, p + 1);
    } else {
        check.target = mpq_class(static_cast<long>(p) * p * p,
                                 (p - 1) * (p + 1) * (p + 1));
    }
    check.target.canonicalize();
    check.gap = abs(check.partial - check.target);
    mpz_class pd;
    mpz_ui_pow_ui(pd.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(D));
    check.bound = mpq_class(2, pd);
    check.bound.canonicalize();
    check.ok = check.gap <= check.bound;
    return check;
}

}  // namespace polydens
