#include "polydens/fp_poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include "polydens/poly_text.hpp"

namespace polydens {

bool is_prime_i64(i64 n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0 || n % 3 == 0) return false;
    for (i64 d = 5; d <= n / d; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

namespace fpk {

i64 mod_reduce(i64 v, i64 p) {
    v %= p;
    return v < 0 ? v + p : v;
}

i64 mod_inv(i64 a, i64 p) {
    // extended Euclid; a nonzero mod p
    i64 t = 0, newt = 1, r = p, newr = mod_reduce(a, p);
    while (newr != 0) {
        i64 q = r / newr;
        t = std::exchange(newt, t - q * newt);
        r = std::exchange(newr, r - q * newr);
    }
    if (r != 1) throw std::domain_error("mod_inv: not invertible");
    return mod_reduce(t, p);
}

void trim(std::vector<i64>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

std::vector<i64> mul(const std::vector<i64>& a, const std::vector<i64>& b, i64 p) {
    if (a.empty() || b.empty()) return {};
    std::vector<i64> out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    for (auto& v : out) v %= p;
    trim(out);
    return out;
}

void divrem(std::vector<i64>& a, const std::vector<i64>& b, i64 p,
            std::vector<i64>* quotient) {
    i64 lead_inv = mod_inv(b.back(), p);
    if (quotient) quotient->assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    while (a.size() >= b.size() && !a.empty()) {
        i64 q = a.back() * lead_inv % p;
        size_t shift = a.size() - b.size();
        if (q != 0) {
            if (quotient) (*quotient)[shift] = q;
            for (size_t i = 0; i < b.size(); ++i)
                a[shift + i] = mod_reduce(a[shift + i] - q * b[i], p);
        }
        a.pop_back();
        trim(a);
        if (a.size() < b.size()) break;
    }
    trim(a);
    if (quotient) trim(*quotient);
}

std::vector<i64> gcd(std::vector<i64> a, std::vector<i64> b, i64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        divrem(a, b, p, nullptr);
        a.swap(b);
    }
    if (!a.empty() && a.back() != 1) {
        i64 inv = mod_inv(a.back(), p);
        for (auto& v : a) v = v * inv % p;
    }
    return a;
}

std::vector<i64> derivative(const std::vector<i64>& a, i64 p) {
    if (a.size() <= 1) return {};
    std::vector<i64> d(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) d[i - 1] = static_cast<i64>(i % p) * a[i] % p;
    trim(d);
    return d;
}

std::vector<i64> radical(std::vector<i64> f, i64 p) {
    if (f.empty()) throw std::domain_error("fpk::radical: zero polynomial");
    if (f.back() != 1) {
        i64 inv = mod_inv(f.back(), p);
        for (auto& v : f) v = v * inv % p;
    }
    std::vector<i64> result{1};
    while (f.size() > 1) {
        std::vector<i64> fd = derivative(f, p);
        if (fd.empty()) {
            // f = g(x^p) = g(x)^p over F_p: keep every p-th coefficient
            std::vector<i64> g((f.size() - 1) / static_cast<size_t>(p) + 1);
            for (size_t i = 0; i < g.size(); ++i) g[i] = f[i * static_cast<size_t>(p)];
            f = std::move(g);
            continue;
        }
        std::vector<i64> g = gcd(f, fd, p);
        std::vector<i64> rem = f, w;
        divrem(rem, g, p, &w);  // w = f/g: factors with multiplicity prime to p, once each
        std::vector<i64> dup = gcd(result, w, p);
        std::vector<i64> rem2 = std::move(w), fresh;
        divrem(rem2, dup, p, &fresh);
        result = mul(result, fresh, p);
        f = std::move(g);
    }
    return result;
}

}  // namespace fpk

namespace {

using fpk::mod_inv;
using fpk::mod_reduce;
using fpk::trim;

void check_same_field(const FpPoly& a, const FpPoly& b) {
    if (a.p != b.p) throw std::invalid_argument("FpPoly: field mismatch");
}

std::vector<i64> raw_mul(const std::vector<i64>& a, const std::vector<i64>& b, i64 p) {
    return fpk::mul(a, b, p);
}

void raw_divrem(std::vector<i64>& a, const std::vector<i64>& b, i64 p,
                std::vector<i64>* quotient) {
    fpk::divrem(a, b, p, quotient);
}

std::vector<i64> raw_gcd(std::vector<i64> a, std::vector<i64> b, i64 p) {
    return fpk::gcd(std::move(a), std::move(b), p);
}

std::vector<i64> raw_derivative(const std::vector<i64>& a, i64 p) {
    return fpk::derivative(a, p);
}

}  // namespace

FpPoly::FpPoly(i64 p_, std::vector<i64> coeffs) : p(p_), c(std::move(coeffs)) {
    if (p < 2 || !is_prime_i64(p)) throw std::invalid_argument("FpPoly: p must be prime");
    for (auto& v : c) v = mod_reduce(v, p);
    trim(c);
}

FpPoly fp_zero(i64 p) { return FpPoly(p, {}); }
FpPoly fp_const(i64 p, i64 v) { return FpPoly(p, {v}); }
FpPoly fp_x(i64 p) { return FpPoly(p, {0, 1}); }
FpPoly fp_x_plus(i64 p, i64 cc) { return FpPoly(p, {cc, 1}); }

FpPoly fp_xn_minus_1(i64 p, i64 n) {
    std::vector<i64> c(static_cast<size_t>(n) + 1, 0);
    c[0] = p - 1;
    c.back() = 1;
    return FpPoly(p, std::move(c));
}

FpPoly fp_add(const FpPoly& a, const FpPoly& b) {
    check_same_field(a, b);
    std::vector<i64> out(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = mod_reduce(a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i)), a.p);
    trim(out);
    return FpPoly(a.p, std::move(out));
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b) {
    check_same_field(a, b);
    std::vector<i64> out(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = mod_reduce(a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i)), a.p);
    trim(out);
    return FpPoly(a.p, std::move(out));
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
    check_same_field(a, b);
    return FpPoly(a.p, raw_mul(a.c, b.c, a.p));
}

FpPoly fp_scale(const FpPoly& a, i64 s) {
    std::vector<i64> out = a.c;
    s = mod_reduce(s, a.p);
    for (auto& v : out) v = v * s % a.p;
    trim(out);
    return FpPoly(a.p, std::move(out));
}

std::pair<FpPoly, FpPoly> fp_divrem(const FpPoly& a, const FpPoly& b) {
    check_same_field(a, b);
    if (b.is_zero()) throw std::domain_error("fp_divrem: division by zero polynomial");
    std::vector<i64> r = a.c, q;
    raw_divrem(r, b.c, a.p, &q);
    return {FpPoly(a.p, std::move(q)), FpPoly(a.p, std::move(r))};
}

FpPoly fp_mod(const FpPoly& a, const FpPoly& b) { return fp_divrem(a, b).second; }

FpPoly fp_pow(const FpPoly& a, u64 e) {
    FpPoly result = fp_const(a.p, 1);
    FpPoly base = a;
    while (e) {
        if (e & 1) result = fp_mul(result, base);
        base = fp_mul(base, base);
        e >>= 1;
    }
    return result;
}

FpPoly monic_normalize(const FpPoly& a) {
    if (a.is_zero() || a.lc() == 1) return a;
    return fp_scale(a, mod_inv(a.lc(), a.p));
}

FpPoly fp_derivative(const FpPoly& a) { return FpPoly(a.p, raw_derivative(a.c, a.p)); }

i64 fp_eval(const FpPoly& a, i64 x) {
    x = mod_reduce(x, a.p);
    i64 acc = 0;
    for (size_t i = a.c.size(); i-- > 0;) acc = (acc * x + a.c[i]) % a.p;
    return acc;
}

FpPoly fp_gcd(const FpPoly& a, const FpPoly& b) {
    check_same_field(a, b);
    if (a.is_zero() && b.is_zero()) throw std::domain_error("fp_gcd: gcd(0, 0)");
    return FpPoly(a.p, raw_gcd(a.c, b.c, a.p));
}

bool is_squarefree(const FpPoly& a) {
    if (a.is_zero()) throw std::domain_error("is_squarefree: zero polynomial");
    if (a.degree() == 0) return true;
    FpPoly d = fp_derivative(a);
    if (d.is_zero()) return false;  // a = g(x^p) = (g*)^p
    return fp_gcd(a, d).degree() == 0;
}

FpPoly fp_radical(const FpPoly& a) {
    if (a.is_zero()) throw std::domain_error("fp_radical: zero polynomial");
    return FpPoly(a.p, fpk::radical(a.c, a.p));
}

// --------------------------------------------------------------------------
// Irreducible tables and factorization
// --------------------------------------------------------------------------

namespace {

struct IrrTable {
    std::vector<std::vector<FpPoly>> by_degree;  // [0] unused
};

std::map<i64, IrrTable>& irr_cache() {
    static std::map<i64, IrrTable> cache;
    return cache;
}

bool has_factor_up_to(const std::vector<i64>& f, i64 p, int max_deg) {
    // linear factors via evaluation first
    if (max_deg >= 1) {
        for (i64 r = 0; r < p; ++r) {
            i64 acc = 0;
            for (size_t i = f.size(); i-- > 0;) acc = (acc * r + f[i]) % p;
            if (acc == 0) return true;
        }
    }
    for (int e = 2; e <= max_deg; ++e) {
        for (const FpPoly& g : irreducibles(p, e)) {
            std::vector<i64> r = f;
            raw_divrem(r, g.c, p, nullptr);
            if (r.empty()) return true;
        }
    }
    return false;
}

}  // namespace

const std::vector<FpPoly>& irreducibles(i64 p, int deg, u64 enum_budget) {
    if (deg < 1) throw std::invalid_argument("irreducibles: degree must be >= 1");
    if (!is_prime_i64(p)) throw std::invalid_argument("irreducibles: p must be prime");
    IrrTable& table = irr_cache()[p];
    if (static_cast<int>(table.by_degree.size()) <= deg)
        table.by_degree.resize(static_cast<size_t>(deg) + 1);
    for (int e = 1; e <= deg; ++e) {
        auto& list = table.by_degree[static_cast<size_t>(e)];
        if (!list.empty()) continue;
        u64 n_monic = upow_checked(static_cast<u64>(p), static_cast<unsigned>(e), "irreducibles");
        if (n_monic > enum_budget)
            throw BudgetError("irreducibles: p^deg exceeds enumeration budget");
        if (e == 1) {
            for (i64 c0 = 0; c0 < p; ++c0) list.push_back(fp_x_plus(p, c0));
            continue;
        }
        // sieve: every composite monic of degree e is g*h with g irreducible
        // of degree <= e/2 (already tabulated) and h monic of degree e - g
        std::vector<char> composite(n_monic, 0);
        std::vector<i64> hdig(static_cast<size_t>(e), 0);
        std::vector<i64> prod(static_cast<size_t>(e) + 1, 0);
        for (int fe = 1; fe <= e / 2; ++fe) {
            int he = e - fe;
            u64 n_h = upow_checked(static_cast<u64>(p), static_cast<unsigned>(he), "irreducibles");
            for (const FpPoly& g : table.by_degree[static_cast<size_t>(fe)]) {
                for (u64 hidx = 0; hidx < n_h; ++hidx) {
                    u64 rest = hidx;
                    for (int i = 0; i < he; ++i) {
                        hdig[static_cast<size_t>(i)] = static_cast<i64>(rest % static_cast<u64>(p));
                        rest /= static_cast<u64>(p);
                    }
                    hdig[static_cast<size_t>(he)] = 1;
                    std::fill(prod.begin(), prod.end(), 0);
                    for (int i = 0; i <= fe; ++i) {
                        i64 gi = g.c[static_cast<size_t>(i)];
                        if (gi == 0) continue;
                        for (int j = 0; j <= he; ++j)
                            prod[static_cast<size_t>(i + j)] += gi * hdig[static_cast<size_t>(j)];
                    }
                    u64 idx = 0;
                    for (int i = e; i-- > 0;)
                        idx = idx * static_cast<u64>(p) +
                              static_cast<u64>(prod[static_cast<size_t>(i)] % p);
                    composite[idx] = 1;
                }
            }
        }
        MonicRange range(p, e, MonicConstraint::all, enum_budget);
        for (u64 idx = 0; idx < n_monic; ++idx)
            if (!composite[idx]) list.push_back(range.at(idx));
    }
    return table.by_degree[static_cast<size_t>(deg)];
}

bool is_irreducible(const FpPoly& a, const FactorBudget& budget) {
    if (a.is_zero() || a.degree() < 1) return false;
    FpPoly f = monic_normalize(a);
    if (f.degree() == 1) return true;
    irreducibles(f.p, f.degree() / 2, budget.enum_budget);
    return !has_factor_up_to(f.c, f.p, f.degree() / 2);
}

FpFactorization factor(const FpPoly& a, const FactorBudget& budget) {
    if (a.is_zero()) throw std::invalid_argument("factor: zero polynomial");
    FpFactorization result;
    result.unit = a.lc();
    std::vector<i64> f = monic_normalize(a).c;
    i64 p = a.p;
    for (int e = 1; f.size() > 1 && e <= (static_cast<int>(f.size()) - 1) / 2; ++e) {
        for (const FpPoly& g : irreducibles(p, e, budget.enum_budget)) {
            if (f.size() <= g.c.size()) break;
            int mult = 0;
            for (;;) {
                std::vector<i64> r = f, q;
                raw_divrem(r, g.c, p, &q);
                if (!r.empty()) break;
                f = std::move(q);
                ++mult;
            }
            if (mult > 0) result.factors.emplace_back(g, mult);
            if (f.size() == 1) break;
        }
    }
    if (f.size() > 1) result.factors.emplace_back(FpPoly(p, f), 1);

    // soundness check: unit * prod factors reproduces the input
    FpPoly check = fp_const(p, result.unit);
    for (const auto& [g, m] : result.factors)
        check = fp_mul(check, fp_pow(g, static_cast<u64>(m)));
    if (!(check == a)) throw std::logic_error("factor: re-multiplication check failed");
    return result;
}

int mobius(const FpPoly& u, const FactorBudget& budget) {
    if (u.is_zero() || !u.is_monic()) throw std::invalid_argument("mobius: u must be monic nonzero");
    if (u.degree() == 0) return 1;
    if (!is_squarefree(u)) return 0;
    FpFactorization f = factor(u, budget);
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

// --------------------------------------------------------------------------
// Enumeration
// --------------------------------------------------------------------------

MonicRange::MonicRange(i64 p, int d, MonicConstraint constraint, u64 budget)
    : p_(p), d_(d), constraint_(constraint) {
    if (!is_prime_i64(p)) throw std::invalid_argument("MonicRange: p must be prime");
    if (d < 0) throw std::invalid_argument("MonicRange: negative degree");
    u64 base = constraint == MonicConstraint::nonzero_coeffs ? static_cast<u64>(p - 1)
                                                             : static_cast<u64>(p);
    raw_size_ = upow_checked(base, static_cast<unsigned>(d), "MonicRange");
    if (raw_size_ > budget) throw BudgetError("MonicRange: p^d exceeds enumeration budget");
}

FpPoly MonicRange::at(u64 index) const {
    std::vector<i64> c(static_cast<size_t>(d_) + 1, 0);
    c.back() = 1;
    u64 rest = index;
    if (constraint_ == MonicConstraint::nonzero_coeffs) {
        u64 base = static_cast<u64>(p_ - 1);
        for (int i = 0; i < d_; ++i) {
            c[static_cast<size_t>(i)] = static_cast<i64>(rest % base) + 1;
            rest /= base;
        }
    } else {
        u64 base = static_cast<u64>(p_);
        for (int i = 0; i < d_; ++i) {
            c[static_cast<size_t>(i)] = static_cast<i64>(rest % base);
            rest /= base;
        }
    }
    return FpPoly(p_, std::move(c));
}

bool MonicRange::admits(const FpPoly& f) const {
    switch (constraint_) {
        case MonicConstraint::all:
        case MonicConstraint::nonzero_coeffs:
            return true;
        case MonicConstraint::squarefree:
            return is_squarefree(f);
        case MonicConstraint::coprime_to_x:
            return f.degree() == 0 || f.coeff(0) != 0;
    }
    return false;
}

std::optional<FpPoly> MonicRange::next() {
    while (cursor_ < raw_size_) {
        FpPoly f = at(cursor_++);
        if (admits(f)) return f;
    }
    return std::nullopt;
}

void for_each_squarefree_monic(i64 p, int d, const std::vector<i64>& excluded_roots,
                               const std::function<void(const FpPoly&, int)>& fn,
                               u64 enum_budget) {
    if (d < 0) return;
    if (d == 0) {
        fn(fp_const(p, 1), +1);
        return;
    }
    for (int e = 1; e <= d; ++e) irreducibles(p, e, enum_budget);

    std::vector<char> excluded_linear(static_cast<size_t>(p), 0);
    for (i64 r : excluded_roots) {
        i64 v = mod_reduce(r, p);
        excluded_linear[static_cast<size_t>(v)] = 1;
    }

    // Subset products of distinct irreducibles enumerated in (degree, index)
    // order; mu = (-1)^{number of factors}.
    std::function<void(int, size_t, int, const FpPoly&, int)> rec =
        [&](int deg_at, size_t idx_at, int remaining, const FpPoly& product, int sign) {
            if (remaining == 0) {
                fn(product, sign);
                return;
            }
            for (int e = deg_at; e <= remaining; ++e) {
                const auto& list = irreducibles(p, e, enum_budget);
                size_t start = (e == deg_at) ? idx_at : 0;
                for (size_t i = start; i < list.size(); ++i) {
                    const FpPoly& g = list[i];
                    if (e == 1 && excluded_linear[static_cast<size_t>(g.c[0])]) continue;
                    rec(e, i + 1, remaining - e, fp_mul(product, g), -sign);
                }
            }
        };
    rec(1, 0, d, fp_const(p, 1), +1);
}

// --------------------------------------------------------------------------
// Residue indexing and the divisibility count
// --------------------------------------------------------------------------

i64 residue_index(const FpPoly& r, i64 p, int deg_u) {
    if (r.degree() >= deg_u) throw std::invalid_argument("residue_index: residue not reduced");
    i64 idx = 0;
    for (int i = deg_u; i-- > 0;) idx = idx * p + r.coeff(i);
    return idx;
}

FpPoly residue_from_index(i64 p, int deg_u, i64 index) {
    std::vector<i64> c(static_cast<size_t>(deg_u), 0);
    for (int i = 0; i < deg_u; ++i) {
        c[static_cast<size_t>(i)] = index % p;
        index /= p;
    }
    return FpPoly(p, std::move(c));
}

std::vector<i64> mulx_table(i64 p, const FpPoly& u, u64 budget) {
    if (!u.is_monic() || u.degree() < 1)
        throw std::invalid_argument("mulx_table: u must be monic of degree >= 1");
    int m = u.degree();
    u64 n_states = upow_checked(static_cast<u64>(p), static_cast<unsigned>(m), "mulx_table");
    if (n_states > budget) throw BudgetError("mulx_table: p^deg(u) exceeds budget");
    i64 big_n = static_cast<i64>(n_states);

    std::vector<i64> table(n_states);
    std::vector<i64> digits(static_cast<size_t>(m));
    for (i64 s = 0; s < big_n; ++s) {
        i64 rest = s;
        for (int i = 0; i < m; ++i) {
            digits[static_cast<size_t>(i)] = rest % p;
            rest /= p;
        }
        i64 carry = digits[static_cast<size_t>(m - 1)];
        // multiply by x: shift digits up, reduce x^m = -(u - x^m) using monic u
        i64 idx = 0;
        for (int i = m; i-- > 0;) {
            i64 di = (i == 0) ? 0 : digits[static_cast<size_t>(i - 1)];
            di = mod_reduce(di - carry * u.coeff(i), p);
            idx = idx * p + di;
        }
        table[static_cast<size_t>(s)] = idx;
    }
    return table;
}

namespace {

// Residue-walk DP: r_0 = 1, r_j = r_{j-1} x + a_j with a_j in F_p^x; the
// count of walks landing on 0 after n steps is #{h in U_n : w | h}.
u64 count_via_dp(int n, i64 p, const FpPoly& w, u64 budget) {
    std::vector<i64> mulx = mulx_table(p, w, budget);
    i64 n_states = static_cast<i64>(mulx.size());
    std::vector<u64> cur(static_cast<size_t>(n_states), 0), nxt(static_cast<size_t>(n_states), 0);
    cur[1] = 1;  // the constant polynomial 1 has index 1
    for (int step = 0; step < n; ++step) {
        std::fill(nxt.begin(), nxt.end(), 0);
        for (i64 s = 0; s < n_states; ++s) {
            u64 v = cur[static_cast<size_t>(s)];
            if (v == 0) continue;
            i64 t = mulx[static_cast<size_t>(s)];
            i64 d0 = t % p;
            i64 base = t - d0;
            i64 nd = d0;
            for (i64 a = 1; a < p; ++a) {
                if (++nd == p) nd = 0;
                nxt[static_cast<size_t>(base + nd)] += v;
            }
        }
        cur.swap(nxt);
    }
    return cur[0];
}

// Pruned search over monic quotients q with w*q in U_n: every alive prefix
// keeps all determined product coefficients nonzero.
struct QuotientSearch {
    const std::vector<i64>& w;
    i64 p;
    int m, n, k;
    i64 inv0;
    std::vector<i64> q;
    u64 count = 0;
    u64 work = 0;
    u64 budget;

    QuotientSearch(const std::vector<i64>& w_, i64 p_, int n_, u64 budget_)
        : w(w_), p(p_), m(static_cast<int>(w_.size()) - 1), n(n_), k(n_ - m),
          inv0(mod_inv(w_[0], p_)), q(static_cast<size_t>(n_ - m) + 1, 0), budget(budget_) {}

    void bump_work() {
        if (++work % 4096 == 0 && work > budget)
            throw BudgetError("count_divisible: quotient search exceeds work budget");
    }

    i64 partial(int j) const {  // sum_{i>=1} w_i q_{j-i}, indices clipped to [0, k]
        i64 acc = 0;
        int lo = std::max(1, j - k);
        int hi = std::min(m, j);
        for (int i = lo; i <= hi; ++i) acc += w[static_cast<size_t>(i)] * q[static_cast<size_t>(j - i)];
        return acc % p;
    }

    void rec(int j) {
        bump_work();
        i64 forbidden = mod_reduce(-partial(j) * inv0, p);
        if (j == k) {
            if (forbidden == 1) return;  // q monic: q_k = 1 would zero coefficient k
            q[static_cast<size_t>(k)] = 1;
            for (int t = k + 1; t < n; ++t) {
                bump_work();
                i64 acc = 0;
                int lo = std::max(0, t - k);
                int hi = std::min(m, t);
                for (int i = lo; i <= hi; ++i)
                    acc += w[static_cast<size_t>(i)] * q[static_cast<size_t>(t - i)];
                if (acc % p == 0) return;
            }
            ++count;
            return;
        }
        for (i64 cq = 0; cq < p; ++cq) {
            if (cq == forbidden) continue;
            q[static_cast<size_t>(j)] = cq;
            rec(j + 1);
        }
    }
};

}  // namespace

u64 count_divisible(int n, i64 p, const FpPoly& u, u64 work_budget) {
    if (u.is_zero() || !u.is_monic())
        throw std::invalid_argument("count_divisible: u must be monic nonzero");
    if (u.p != p) throw std::invalid_argument("count_divisible: field mismatch");
    if (n < 0) throw std::invalid_argument("count_divisible: n must be >= 0");
    int m = u.degree();
    // counts live in U_n, so they are bounded by (p-1)^n; insist it fits u64
    u64 total = upow_checked(static_cast<u64>(p - 1), static_cast<unsigned>(n),
                             "count_divisible");
    if (m == 0) return total;
    if (u.coeff(0) == 0) return 0;  // x | u and every h in U_n has h(0) != 0
    if (m > n) return 0;

    constexpr u64 kInfeasible = UINT64_MAX;
    u64 dp_cost = kInfeasible;
    {
        u64 states = 1, overflow = 0;
        for (int i = 0; i < m; ++i) {
            if (states > work_budget) { overflow = 1; break; }
            states *= static_cast<u64>(p);
        }
        if (!overflow && states <= work_budget)
            dp_cost = states * (static_cast<u64>(m) + static_cast<u64>(n) * static_cast<u64>(p));
    }
    u64 stream_cost = kInfeasible;
    {
        u64 leaves = 1, overflow = 0;
        for (int i = 0; i < n - m; ++i) {
            if (leaves > work_budget) { overflow = 1; break; }
            leaves *= static_cast<u64>(p - 1);
        }
        if (!overflow && leaves <= work_budget)
            stream_cost = leaves * static_cast<u64>(m + 4);
    }
    if (dp_cost == kInfeasible && stream_cost == kInfeasible)
        throw BudgetError("count_divisible: both strategies exceed the work budget");

    if (dp_cost <= stream_cost) return count_via_dp(n, p, u, work_budget);
    QuotientSearch search(u.c, p, n, work_budget);
    search.rec(0);
    return search.count;
}

// --------------------------------------------------------------------------
// Text form
// --------------------------------------------------------------------------

std::string to_string(const FpPoly& f) {
    std::vector<mpz_class> z(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) z[i] = f.c[i];
    return int_poly_to_string(z) + " mod " + std::to_string(f.p);
}

FpPoly parse_fp_poly(const std::string& text) {
    size_t pos = text.rfind(" mod ");
    if (pos == std::string::npos)
        throw std::invalid_argument("parse_fp_poly: missing ' mod p' suffix");
    i64 p = 0;
    try {
        p = std::stoll(text.substr(pos + 5));
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_fp_poly: bad modulus");
    }
    std::vector<mpz_class> z = parse_int_poly(text.substr(0, pos));
    std::vector<i64> c(z.size());
    for (size_t i = 0; i < z.size(); ++i) {
        mpz_class r = z[i] % p;
        if (r < 0) r += p;
        c[i] = r.get_si();
    }
    return FpPoly(p, std::move(c));
}

std::vector<mpz_class> parse_int_poly(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("parse_int_poly: empty input");

    std::vector<mpz_class> coeffs;
    auto add_term = [&](const mpz_class& coef, long exp) {
        if (exp < 0 || exp > 1000000) throw std::invalid_argument("parse_int_poly: bad exponent");
        if (coeffs.size() <= static_cast<size_t>(exp)) coeffs.resize(static_cast<size_t>(exp) + 1);
        coeffs[static_cast<size_t>(exp)] += coef;
    };

    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-') sign = -1;
            ++i;
        }
        if (i >= s.size()) throw std::invalid_argument("parse_int_poly: dangling sign");
        std::string digits;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
        bool have_coef = !digits.empty();
        mpz_class coef = have_coef ? mpz_class(digits) : mpz_class(1);
        if (sign < 0) coef = -coef;
        if (i < s.size() && s[i] == '*') {
            if (!have_coef) throw std::invalid_argument("parse_int_poly: stray '*'");
            ++i;
            if (i >= s.size() || s[i] != 'x') throw std::invalid_argument("parse_int_poly: expected x");
        }
        if (i < s.size() && s[i] == 'x') {
            ++i;
            long exp = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string e;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e.push_back(s[i++]);
                if (e.empty()) throw std::invalid_argument("parse_int_poly: missing exponent");
                exp = std::stol(e);
            }
            add_term(coef, exp);
        } else {
            if (!have_coef) throw std::invalid_argument("parse_int_poly: empty term");
            add_term(coef, 0);
        }
    }
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    return coeffs;
}

std::string int_poly_to_string(const std::vector<mpz_class>& c) {
    std::ostringstream out;
    bool first = true;
    for (size_t ii = c.size(); ii-- > 0;) {
        const mpz_class& v = c[ii];
        if (v == 0) continue;
        mpz_class mag = abs(v);
        if (first) {
            if (v < 0) out << '-';
            first = false;
        } else {
            out << (v < 0 ? '-' : '+');
        }
        if (ii == 0) {
            out << mag.get_str();
        } else {
            if (mag != 1) out << mag.get_str() << '*';
            out << 'x';
            if (ii > 1) out << '^' << ii;
        }
    }
    if (first) out << '0';
    return out.str();
}

}  // namespace polydens
