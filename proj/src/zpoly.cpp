#include "polydens/zpoly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "polydens/poly_text.hpp"

namespace polydens {

namespace {

void ztrim(std::vector<mpz_class>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

i64 p_squared_checked(i64 p) {
    if (!is_prime_i64(p)) throw std::invalid_argument("p must be prime");
    if (p > 3'000'000'000LL) throw BudgetError("p^2 exceeds the 64-bit working range");
    return p * p;
}

i64 mulmod_p2(i64 a, i64 b, i64 p2) {
    return static_cast<i64>(static_cast<i128>(a) * b % p2);
}

}  // namespace

ZPoly::ZPoly(std::vector<mpz_class> coeffs) : c(std::move(coeffs)) { ztrim(c); }

ZPoly ZPoly::from_i64(const std::vector<i64>& v) {
    std::vector<mpz_class> c(v.size());
    for (size_t i = 0; i < v.size(); ++i) c[i] = v[i];
    return ZPoly(std::move(c));
}

const mpz_class& ZPoly::lc() const {
    if (c.empty()) throw std::domain_error("ZPoly::lc: zero polynomial");
    return c.back();
}

ZPoly z_add(const ZPoly& a, const ZPoly& b) {
    std::vector<mpz_class> out(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return ZPoly(std::move(out));
}

ZPoly z_sub(const ZPoly& a, const ZPoly& b) {
    std::vector<mpz_class> out(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
    return ZPoly(std::move(out));
}

ZPoly z_mul(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return ZPoly();
    std::vector<mpz_class> out(a.c.size() + b.c.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
    return ZPoly(std::move(out));
}

ZPoly z_derivative(const ZPoly& a) {
    if (a.c.size() <= 1) return ZPoly();
    std::vector<mpz_class> d(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) d[i - 1] = mpz_class(i) * a.c[i];
    return ZPoly(std::move(d));
}

mpz_class z_eval(const ZPoly& a, const mpz_class& x) {
    mpz_class acc = 0;
    for (size_t i = a.c.size(); i-- > 0;) acc = acc * x + a.c[i];
    return acc;
}

FpPoly reduce_mod_p(const ZPoly& f, i64 p) {
    std::vector<i64> c(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) {
        mpz_class r = f.c[i] % p;
        if (r < 0) r += p;
        c[i] = r.get_si();
    }
    return FpPoly(p, std::move(c));
}

ZPoly lift_of(const FpPoly& f) {
    std::vector<mpz_class> c(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) c[i] = f.c[i];
    return ZPoly(std::move(c));
}

std::string to_string(const ZPoly& f) { return int_poly_to_string(f.c); }

ZPoly parse_zpoly(const std::string& text) { return ZPoly(parse_int_poly(text)); }

// --------------------------------------------------------------------------
// Resultants and discriminants
// --------------------------------------------------------------------------

mpz_class resultant_sylvester(const ZPoly& f, const ZPoly& g) {
    if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant: zero polynomial");
    int n = f.degree(), m = g.degree();
    if (n == 0 && m == 0) return 1;
    mpz_class res;
    if (n == 0) {
        mpz_pow_ui(res.get_mpz_t(), f.c[0].get_mpz_t(), static_cast<unsigned long>(m));
        return res;
    }
    if (m == 0) {
        mpz_pow_ui(res.get_mpz_t(), g.c[0].get_mpz_t(), static_cast<unsigned long>(n));
        return res;
    }
    int dim = n + m;
    std::vector<std::vector<mpz_class>> a(static_cast<size_t>(dim),
                                          std::vector<mpz_class>(static_cast<size_t>(dim), 0));
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) a[static_cast<size_t>(r)][static_cast<size_t>(r + k)] = f.c[static_cast<size_t>(n - k)];
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) a[static_cast<size_t>(m + r)][static_cast<size_t>(r + k)] = g.c[static_cast<size_t>(m - k)];

    // Bareiss fraction-free elimination with row pivoting.
    int sign = 1;
    mpz_class prev = 1;
    for (int k = 0; k + 1 < dim; ++k) {
        int pivot = -1;
        for (int r = k; r < dim; ++r)
            if (a[static_cast<size_t>(r)][static_cast<size_t>(k)] != 0) { pivot = r; break; }
        if (pivot < 0) return 0;
        if (pivot != k) {
            std::swap(a[static_cast<size_t>(pivot)], a[static_cast<size_t>(k)]);
            sign = -sign;
        }
        for (int i = k + 1; i < dim; ++i) {
            for (int j = k + 1; j < dim; ++j) {
                mpz_class num = a[static_cast<size_t>(i)][static_cast<size_t>(j)] * a[static_cast<size_t>(k)][static_cast<size_t>(k)] -
                                a[static_cast<size_t>(i)][static_cast<size_t>(k)] * a[static_cast<size_t>(k)][static_cast<size_t>(j)];
                mpz_divexact(a[static_cast<size_t>(i)][static_cast<size_t>(j)].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a[static_cast<size_t>(i)][static_cast<size_t>(k)] = 0;
        }
        prev = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
    }
    return sign * a[static_cast<size_t>(dim - 1)][static_cast<size_t>(dim - 1)];
}

namespace {

// lc(B)^{degA-degB+1} A = Q B + R
ZPoly pseudo_rem(const ZPoly& A, const ZPoly& B) {
    std::vector<mpz_class> r = A.c;
    const mpz_class& lb = B.lc();
    int e = A.degree() - B.degree() + 1;
    while (static_cast<int>(r.size()) - 1 >= B.degree() && !r.empty()) {
        mpz_class lr = r.back();
        size_t shift = r.size() - B.c.size();
        for (auto& v : r) v *= lb;
        for (size_t i = 0; i < B.c.size(); ++i) r[shift + i] -= lr * B.c[i];
        ztrim(r);
        --e;
    }
    ZPoly R(std::move(r));
    if (e > 0) {
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
        for (auto& v : R.c) v *= scale;
    }
    return R;
}

mpz_class divexact_checked(const mpz_class& num, const mpz_class& den, const char* where) {
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (r != 0) throw std::logic_error(std::string("subresultant: inexact division in ") + where);
    return q;
}

}  // namespace

mpz_class resultant_subresultant(const ZPoly& f, const ZPoly& g) {
    if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant: zero polynomial");
    ZPoly A = f, B = g;
    int s = 1;
    if (A.degree() < B.degree()) {
        if (A.degree() % 2 == 1 && B.degree() % 2 == 1) s = -s;
        std::swap(A, B);
    }
    if (B.degree() == 0) {
        mpz_class res;
        mpz_pow_ui(res.get_mpz_t(), B.c[0].get_mpz_t(), static_cast<unsigned long>(A.degree()));
        return s * res;
    }
    mpz_class gg = 1, h = 1;
    while (B.degree() > 0) {
        int d = A.degree() - B.degree();
        if (A.degree() % 2 == 1 && B.degree() % 2 == 1) s = -s;
        ZPoly R = pseudo_rem(A, B);
        A = B;
        mpz_class hd;
        mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(d));
        mpz_class den = gg * hd;
        for (auto& v : R.c) v = divexact_checked(v, den, "remainder");
        ztrim(R.c);
        B = R;
        if (B.is_zero()) return 0;
        gg = A.lc();
        if (d > 0) {
            mpz_class gd;
            mpz_pow_ui(gd.get_mpz_t(), gg.get_mpz_t(), static_cast<unsigned long>(d));
            mpz_class hprev;
            mpz_pow_ui(hprev.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(d - 1));
            h = divexact_checked(gd, hprev, "h update");
        }
    }
    mpz_class num;
    mpz_pow_ui(num.get_mpz_t(), B.c[0].get_mpz_t(), static_cast<unsigned long>(A.degree()));
    mpz_class hpow;
    mpz_pow_ui(hpow.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(A.degree() - 1));
    return s * divexact_checked(num, hpow, "final");
}

namespace {

mpz_class disc_from_resultant(const ZPoly& f, const mpz_class& res) {
    int n = f.degree();
    mpz_class d = divexact_checked(res, f.lc(), "disc/lc");
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 == 1) d = -d;
    return d;
}

}  // namespace

mpz_class discriminant(const ZPoly& f) {
    if (f.degree() < 1) throw std::domain_error("discriminant: deg f must be >= 1");
    return disc_from_resultant(f, resultant_sylvester(f, z_derivative(f)));
}

mpz_class discriminant_prs(const ZPoly& f) {
    if (f.degree() < 1) throw std::domain_error("discriminant: deg f must be >= 1");
    return disc_from_resultant(f, resultant_subresultant(f, z_derivative(f)));
}

// --------------------------------------------------------------------------
// Local predicates mod p^2
// --------------------------------------------------------------------------

const char* to_string(DiscTag tag) {
    switch (tag) {
        case DiscTag::unit: return "unit";
        case DiscTag::valuation_one: return "valuation_one";
        case DiscTag::valuation_ge_two: return "valuation_ge_two";
        case DiscTag::not_applicable: return "not_applicable";
    }
    return "?";
}

DiscClass disc_class_mod_p2(const std::vector<i64>& f, i64 p) {
    if (f.empty() || f.back() != 1)
        throw std::invalid_argument("disc_class_mod_p2: f must be monic (lead 1 mod p^2)");
    i64 p2 = p * p;
    std::vector<i64> fbar(f.size());
    for (size_t i = 0; i < f.size(); ++i) fbar[i] = f[i] % p;
    std::vector<i64> fd = fpk::derivative(fbar, p);
    std::vector<i64> r = fd.empty() ? fbar : fpk::gcd(fbar, fd, p);
    if (r.size() == 1) return {DiscTag::unit, std::nullopt};
    if (p == 2)
        throw std::domain_error("disc_valuation_class: valuation-one branch requires p odd");
    if (r.size() == 2) {
        // repeated part is exactly (x+c)^2 with the cofactor squarefree and
        // coprime to x+c (p odd); decide v = 1 vs v >= 2 by f(-c) mod p^2
        i64 c = r[0];
        i64 x0 = (p2 - c) % p2;
        i64 value = 0;
        for (size_t i = f.size(); i-- > 0;) value = (mulmod_p2(value, x0, p2) + f[i]) % p2;
        if (value % p != 0) throw std::logic_error("disc_class_mod_p2: witness not a root mod p");
        DiscTag tag = (value != 0) ? DiscTag::valuation_one : DiscTag::valuation_ge_two;
        return {tag, std::make_pair(c, value)};
    }
    return {DiscTag::not_applicable, std::nullopt};
}

bool maximal_mod_p2(const std::vector<i64>& f, i64 p) {
    if (f.empty() || f.back() != 1)
        throw std::invalid_argument("maximal_mod_p2: f must be monic (lead 1 mod p^2)");
    i64 p2 = p * p;
    std::vector<i64> fbar(f.size());
    for (size_t i = 0; i < f.size(); ++i) fbar[i] = f[i] % p;
    std::vector<i64> fd = fpk::derivative(fbar, p);
    if (!fd.empty() && fpk::gcd(fbar, fd, p).size() == 1) return true;  // unit discriminant

    std::vector<i64> g = fpk::radical(fbar, p);
    std::vector<i64> rem = fbar, h;
    fpk::divrem(rem, g, p, &h);
    // T = (g~ h~ - f) / p with the [0, p) lifts; only T mod p is needed
    std::vector<i64> prod(g.size() + h.size() - 1, 0);
    for (size_t i = 0; i < g.size(); ++i) {
        if (g[i] == 0) continue;
        for (size_t j = 0; j < h.size(); ++j)
            prod[i + j] = (prod[i + j] + mulmod_p2(g[i], h[j], p2)) % p2;
    }
    std::vector<i64> tbar(prod.size());
    for (size_t i = 0; i < prod.size(); ++i) {
        i64 fi = i < f.size() ? f[i] : 0;
        i64 diff = (prod[i] - fi) % p2;
        if (diff < 0) diff += p2;
        if (diff % p != 0) throw std::logic_error("maximal_mod_p2: g*h != f mod p");
        tbar[i] = (diff / p) % p;
    }
    fpk::trim(tbar);
    std::vector<i64> w = fpk::gcd(g, h, p);
    w = fpk::gcd(std::move(tbar), std::move(w), p);
    return w.size() == 1;
}

namespace {

std::vector<i64> reduce_mod_p2_vec(const ZPoly& f, i64 p2) {
    std::vector<i64> out(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) {
        mpz_class r = f.c[i] % p2;
        if (r < 0) r += p2;
        out[i] = r.get_si();
    }
    return out;
}

}  // namespace

DiscClass disc_valuation_class(const ZPoly& f, i64 p) {
    if (!f.is_monic()) throw std::invalid_argument("disc_valuation_class: f must be monic");
    if (f.degree() < 1) throw std::invalid_argument("disc_valuation_class: deg f must be >= 1");
    i64 p2 = p_squared_checked(p);
    return disc_class_mod_p2(reduce_mod_p2_vec(f, p2), p);
}

bool is_maximal_at_p(const ZPoly& f, i64 p) {
    if (!f.is_monic()) throw std::invalid_argument("is_maximal_at_p: f must be monic");
    if (f.degree() < 1) throw std::invalid_argument("is_maximal_at_p: deg f must be >= 1");
    i64 p2 = p_squared_checked(p);
    return maximal_mod_p2(reduce_mod_p2_vec(f, p2), p);
}

bool ideal_membership_sq(const ZPoly& f, i64 p, const FpPoly& u) {
    if (u.p != p) throw std::invalid_argument("ideal_membership_sq: field mismatch");
    if (u.is_zero() || !u.is_monic())
        throw std::invalid_argument("ideal_membership_sq: u must be monic nonzero");
    p_squared_checked(p);
    if (f.is_zero()) return true;
    FpPoly fbar = reduce_mod_p(f, p);
    FpPoly usq_bar = fp_mul(u, u);
    if (fbar.is_zero()) {
        // f = p w: membership reduces to u | w mod p
        std::vector<mpz_class> wc(f.c.size());
        for (size_t i = 0; i < f.c.size(); ++i)
            wc[i] = divexact_checked(f.c[i], p, "ideal_membership_sq");
        return fp_mod(reduce_mod_p(ZPoly(std::move(wc)), p), u).is_zero();
    }
    auto [qbar, rbar] = fp_divrem(fbar, usq_bar);
    if (!rbar.is_zero()) return false;
    ZPoly usq_lift = z_mul(lift_of(u), lift_of(u));  // genuine integer square of the lift
    ZPoly g = z_sub(f, z_mul(usq_lift, lift_of(qbar)));
    std::vector<mpz_class> gp(g.c.size());
    for (size_t i = 0; i < g.c.size(); ++i) gp[i] = divexact_checked(g.c[i], p, "ideal_membership_sq");
    return fp_mod(reduce_mod_p(ZPoly(std::move(gp)), p), u).is_zero();
}

// --------------------------------------------------------------------------
// Integer squarefree detection
// --------------------------------------------------------------------------

namespace {

// Pollard-Brent; returns a nontrivial factor of odd composite n, or 1 on
// budget exhaustion.  Deterministic: parameters walk 1, 2, 3, ...
mpz_class pollard_brent(const mpz_class& n, u64& iters_left) {
    for (i64 param = 1; iters_left > 0; ++param) {
        mpz_class c = param, y = 2 + param, m = 64;
        mpz_class g = 1, r = 1, q = 1, x, ys;
        while (g == 1 && iters_left > 0) {
            x = y;
            for (mpz_class i = 0; i < r && iters_left > 0; ++i) {
                y = (y * y + c) % n;
                --iters_left;
            }
            mpz_class k = 0;
            while (k < r && g == 1 && iters_left > 0) {
                ys = y;
                mpz_class lim = r - k;
                if (m < lim) lim = m;
                for (mpz_class i = 0; i < lim && iters_left > 0; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                    --iters_left;
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = gcd(abs(x - ys), n);
            }
        }
        if (g > 1 && g < n) return g;
    }
    return 1;
}

struct IntFactorizer {
    u64 rho_left;
    mpz_class certified_bound_sq;  // below this, a rough cofactor is prime
    std::map<mpz_class, int> found;
    mpz_class unfactored = 1;

    void record(const mpz_class& prime, int mult) { found[prime] += mult; }

    void rec(const mpz_class& c, int mult) {
        if (c == 1) return;
        if (c < certified_bound_sq || mpz_probab_prime_p(c.get_mpz_t(), 32) > 0) {
            record(c, mult);
            return;
        }
        if (mpz_perfect_square_p(c.get_mpz_t())) {
            mpz_class s;
            mpz_sqrt(s.get_mpz_t(), c.get_mpz_t());
            rec(s, 2 * mult);
            return;
        }
        mpz_class d = pollard_brent(c, rho_left);
        if (d == 1 || d == c) {
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(mult));
            unfactored *= pw;
            return;
        }
        rec(d, mult);
        rec(c / d, mult);
    }
};

}  // namespace

IntSqfReport is_squarefree_int(const mpz_class& N, const SqfBudget& budget, bool odd_part_only) {
    if (N == 0) throw std::domain_error("is_squarefree_int: N must be nonzero");
    mpz_class n = abs(N);
    IntSqfReport report;
    if (n == 1) {
        report.status = SqfStatus::yes;
        return report;
    }

    IntFactorizer fz;
    fz.rho_left = budget.rho_iters;

    i64 certified = 1;
    bool cofactor_prime = false;
    auto try_prime = [&](i64 p) -> bool {  // returns false to stop trial division
        if (p > budget.trial_bound) return false;
        certified = p;
        if (mpz_class(p) * p > n) {
            cofactor_prime = (n > 1);
            return false;
        }
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
            int e = 0;
            do {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
                ++e;
            } while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p)));
            fz.record(p, e);
        }
        return true;
    };

    if (budget.primes != nullptr) {
        for (i64 p : *budget.primes)
            if (!try_prime(p)) break;
    } else {
        // 2-3-5 wheel
        static constexpr int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
        bool go = try_prime(2) && try_prime(3) && try_prime(5);
        i64 p = 7;
        for (int w = 0; go; w = (w + 1) % 8) {
            if (!try_prime(p)) break;
            p += wheel[w];
        }
    }

    if (cofactor_prime) {
        fz.record(n, 1);
        n = 1;
    }
    if (n > 1) {
        fz.certified_bound_sq = mpz_class(certified) * certified;
        fz.rec(n, 1);
    }

    for (const auto& [prime, e] : fz.found) report.factors.emplace_back(prime, e);
    report.unfactored = fz.unfactored;

    for (const auto& [prime, e] : fz.found) {
        if (odd_part_only && prime == 2) continue;
        if (e >= 2) {
            report.status = SqfStatus::no;
            return report;
        }
    }
    if (fz.unfactored == 1) {
        report.status = SqfStatus::yes;
        return report;
    }
    // partial information can still settle the question
    if (mpz_perfect_power_p(fz.unfactored.get_mpz_t())) {
        report.status = SqfStatus::no;
        return report;
    }
    for (const auto& [prime, e] : fz.found) {
        if (odd_part_only && prime == 2) continue;
        if (mpz_divisible_p(fz.unfactored.get_mpz_t(), prime.get_mpz_t())) {
            report.status = SqfStatus::no;
            return report;
        }
    }
    report.status = SqfStatus::unknown;
    return report;
}

}  // namespace polydens
