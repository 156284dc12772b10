#include "polydens/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace polydens {

IntMatrix IntMatrix::identity(int d) {
    IntMatrix m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("mat_mul: dimension mismatch");
    IntMatrix out(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int k = 0; k < x.dim; ++k) {
            const mpz_class& v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < x.dim; ++j) out.at(i, j) += v * y.at(k, j);
        }
    return out;
}

IntMatrix mat_pow(const IntMatrix& x, u64 e) {
    IntMatrix result = IntMatrix::identity(x.dim);
    IntMatrix base = x;
    while (e) {
        if (e & 1) result = mat_mul(result, base);
        if (e >>= 1) base = mat_mul(base, base);
    }
    return result;
}

mpz_class min_entry(const IntMatrix& m) { return *std::min_element(m.a.begin(), m.a.end()); }
mpz_class max_entry(const IntMatrix& m) { return *std::max_element(m.a.begin(), m.a.end()); }

RatMatrix RatMatrix::identity(int d) {
    RatMatrix m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::uniform(int d) {
    RatMatrix m(d);
    mpq_class v(1, d);
    v.canonicalize();
    for (auto& e : m.a) e = v;
    return m;
}

RatMatrix mat_mul(const RatMatrix& x, const RatMatrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("mat_mul: dimension mismatch");
    RatMatrix out(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int k = 0; k < x.dim; ++k) {
            const mpq_class& v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < x.dim; ++j) out.at(i, j) += v * y.at(k, j);
        }
    return out;
}

RatMatrix mat_sub(const RatMatrix& x, const RatMatrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("mat_sub: dimension mismatch");
    RatMatrix out(x.dim);
    for (size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] - y.a[i];
    return out;
}

RatMatrix mat_pow(const RatMatrix& x, u64 e) {
    RatMatrix result = RatMatrix::identity(x.dim);
    RatMatrix base = x;
    while (e) {
        if (e & 1) result = mat_mul(result, base);
        if (e >>= 1) base = mat_mul(base, base);
    }
    return result;
}

RatMatrix to_rational(const IntMatrix& m, const mpz_class& denominator) {
    RatMatrix out(m.dim);
    for (size_t i = 0; i < m.a.size(); ++i) {
        out.a[i] = mpq_class(m.a[i], denominator);
        out.a[i].canonicalize();
    }
    return out;
}

bool is_doubly_stochastic(const RatMatrix& m) {
    for (const auto& v : m.a)
        if (v < 0) return false;
    for (int i = 0; i < m.dim; ++i) {
        mpq_class row = 0, col = 0;
        for (int j = 0; j < m.dim; ++j) {
            row += m.at(i, j);
            col += m.at(j, i);
        }
        if (row != 1 || col != 1) return false;
    }
    return true;
}

mpq_class e_min(const RatMatrix& m) { return *std::min_element(m.a.begin(), m.a.end()); }
mpq_class e_max(const RatMatrix& m) { return *std::max_element(m.a.begin(), m.a.end()); }

mpq_class norm_max(const RatMatrix& m) {
    mpq_class best = 0;
    for (const auto& v : m.a) {
        mpq_class av = abs(v);
        if (av > best) best = av;
    }
    return mpq_class(m.dim) * best;
}

mpq_class mpq_pow(const mpq_class& x, u64 e) {
    mpq_class r = 1, b = x;
    while (e) {
        if (e & 1) r *= b;
        if (e >>= 1) b *= b;
    }
    return r;
}

namespace {

// mt19937_64 output is standardized; sampling through explicit modular
// arithmetic keeps the generated matrices identical across standard
// libraries (std::shuffle and the distributions are not pinned down)
i64 draw(std::mt19937_64& rng, i64 lo, i64 hi) {
    return lo + static_cast<i64>(rng() % static_cast<u64>(hi - lo + 1));
}

}  // namespace

RatMatrix random_doubly_stochastic(int dim, int k, std::mt19937_64& rng) {
    if (dim < 1 || k < 1) throw std::invalid_argument("random_doubly_stochastic: bad parameters");
    std::vector<i64> weights(static_cast<size_t>(k));
    i64 total = 0;
    for (auto& w : weights) {
        w = draw(rng, 1, 100);
        total += w;
    }
    RatMatrix out(dim);
    std::vector<int> perm(static_cast<size_t>(dim));
    for (int t = 0; t < k; ++t) {
        std::iota(perm.begin(), perm.end(), 0);
        for (int j = dim - 1; j > 0; --j)  // Fisher-Yates
            std::swap(perm[static_cast<size_t>(j)], perm[static_cast<size_t>(draw(rng, 0, j))]);
        mpq_class w(weights[static_cast<size_t>(t)], total);
        w.canonicalize();
        for (int j = 0; j < dim; ++j) out.at(perm[static_cast<size_t>(j)], j) += w;
    }
    return out;
}

RatMatrix random_rational_matrix(int dim, std::mt19937_64& rng) {
    RatMatrix out(dim);
    for (auto& v : out.a) {
        v = mpq_class(draw(rng, -10, 10), draw(rng, 1, 10));
        v.canonicalize();
    }
    return out;
}

// --------------------------------------------------------------------------
// Residue graph
// --------------------------------------------------------------------------

ResidueGraph build_graph(i64 p, const FpPoly& u, u64 budget) {
    if (u.p != p) throw std::invalid_argument("build_graph: field mismatch");
    if (u.is_zero() || !u.is_monic())
        throw std::invalid_argument("build_graph: u must be monic nonzero");
    if (u.degree() >= 1 && u.coeff(0) == 0)
        throw std::invalid_argument("build_graph: x divides u");
    ResidueGraph g;
    g.p = p;
    g.u = u;
    g.d = u.degree();
    if (g.d == 0) {
        g.n_vertices = 1;
        g.mulx = {0};
        return g;
    }
    g.mulx = mulx_table(p, u, budget);
    g.n_vertices = static_cast<i64>(g.mulx.size());

    // x invertible mod u makes alpha -> alpha x a bijection, so verify
    // (p-1)-regularity in both directions.
    std::vector<i64> indeg(static_cast<size_t>(g.n_vertices), 0);
    for (i64 s = 0; s < g.n_vertices; ++s) {
        i64 t = g.mulx[static_cast<size_t>(s)];
        i64 d0 = t % p, base = t - d0, nd = d0;
        for (i64 c = 1; c < p; ++c) {
            if (++nd == p) nd = 0;
            indeg[static_cast<size_t>(base + nd)] += 1;
        }
    }
    for (i64 v : indeg)
        if (v != p - 1) throw std::logic_error("build_graph: graph is not (p-1)-in-regular");
    return g;
}

IntMatrix adjacency_int(const ResidueGraph& g) {
    if (g.n_vertices > 4096) throw BudgetError("adjacency: matrix too large");
    IntMatrix m(static_cast<int>(g.n_vertices));
    if (g.d == 0) {  // trivial ring: p-1 loops at the single vertex
        m.at(0, 0) = g.p - 1;
        return m;
    }
    for (i64 s = 0; s < g.n_vertices; ++s) {
        i64 t = g.mulx[static_cast<size_t>(s)];
        i64 d0 = t % g.p, base = t - d0, nd = d0;
        for (i64 c = 1; c < g.p; ++c) {
            if (++nd == g.p) nd = 0;
            m.at(static_cast<int>(base + nd), static_cast<int>(s)) += 1;
        }
    }
    return m;
}

RatMatrix adjacency(const ResidueGraph& g, bool normalized) {
    IntMatrix m = adjacency_int(g);
    if (!normalized) return to_rational(m, 1);
    RatMatrix out = to_rational(m, mpz_class(g.p - 1));
    if (!is_doubly_stochastic(out))
        throw std::logic_error("adjacency: normalized matrix not doubly stochastic");
    return out;
}

mpz_class path_count(const ResidueGraph& g, i64 alpha, i64 beta, u64 n) {
    if (alpha < 0 || alpha >= g.n_vertices || beta < 0 || beta >= g.n_vertices)
        throw std::invalid_argument("path_count: vertex out of range");
    if (g.d == 0) {
        // single vertex with p-1 loops
        mpz_class total;
        mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(g.p - 1),
                      static_cast<unsigned long>(n));
        return total;
    }
    IntMatrix m = mat_pow(adjacency_int(g), n);
    return m.at(static_cast<int>(beta), static_cast<int>(alpha));
}

std::vector<u64> residue_class_counts(const ResidueGraph& g, int n) {
    u64 total = upow_checked(static_cast<u64>(g.p - 1), static_cast<unsigned>(n),
                             "residue_class_counts");
    if (g.d == 0) return {total};
    std::vector<u64> cur(static_cast<size_t>(g.n_vertices), 0);
    std::vector<u64> nxt(static_cast<size_t>(g.n_vertices), 0);
    cur[0] = 1;
    for (int step = 0; step < n; ++step) {
        std::fill(nxt.begin(), nxt.end(), 0);
        for (i64 s = 0; s < g.n_vertices; ++s) {
            u64 v = cur[static_cast<size_t>(s)];
            if (v == 0) continue;
            i64 t = g.mulx[static_cast<size_t>(s)];
            i64 d0 = t % g.p, base = t - d0, nd = d0;
            for (i64 c = 1; c < g.p; ++c) {
                if (++nd == g.p) nd = 0;
                nxt[static_cast<size_t>(base + nd)] += v;
            }
        }
        cur.swap(nxt);
    }
    return cur;
}

// --------------------------------------------------------------------------
// delta and its bounds
// --------------------------------------------------------------------------

DeltaReport delta_exact(int n, i64 p, int d, u64 budget) {
    if (n < 0 || d < 0) throw std::invalid_argument("delta_exact: n, d must be >= 0");
    DeltaReport rep;
    rep.n = n;
    rep.p = p;
    rep.d = d;
    rep.bound_trivial = mpq_class(1, ipow(p - 1, static_cast<unsigned>(d)));
    rep.bound_trivial.canonicalize();
    rep.bound_large_value = bound_large(n, p, d);
    rep.bound_small_value = bound_small(n, p, d);
    if (d == 0) {
        rep.delta = 0;
        rep.argmax_u = fp_const(p, 1);
        rep.argmax_alpha = 0;
        return rep;
    }

    u64 total = upow_checked(static_cast<u64>(p - 1), static_cast<unsigned>(n), "delta_exact");
    u64 n_states = upow_checked(static_cast<u64>(p), static_cast<unsigned>(d), "delta_exact");
    if (n_states > budget) throw BudgetError("delta_exact: p^d exceeds budget");
    u64 n_moduli = n_states - n_states / static_cast<u64>(p);  // monic deg d, x not | u
    long double cost = static_cast<long double>(n_moduli) * n_states *
                       static_cast<long double>(std::max(n, 1)) * static_cast<long double>(p - 1);
    if (cost > static_cast<long double>(budget))
        throw BudgetError("delta_exact: work exceeds budget");

    mpz_class pd = i64(n_states);
    mpz_class total_z = i64(total);
    // deviations share the denominator p^d (p-1)^n; track the max numerator
    mpz_class best_num = -1;
    MonicRange us(p, d, MonicConstraint::coprime_to_x, n_states);
    while (auto u = us.next()) {
        ResidueGraph g = build_graph(p, *u);
        std::vector<u64> counts = residue_class_counts(g, n);
        for (i64 alpha = 0; alpha < g.n_vertices; ++alpha) {
            mpz_class num = pd * i64(counts[static_cast<size_t>(alpha)]) - total_z;
            mpz_class mag = abs(num);
            if (mag > best_num) {
                best_num = mag;
                rep.argmax_u = *u;
                rep.argmax_alpha = alpha;
            }
        }
    }
    rep.delta = mpq_class(best_num, pd * total_z);
    rep.delta.canonicalize();
    return rep;
}

double bound_large(int n, i64 p, int d) {
    if (p == 2 || d < 1 || n < 2 * d) return std::numeric_limits<double>::infinity();
    double ratio = std::pow(static_cast<double>(p) / static_cast<double>(p - 1), d) - 1.0;
    return std::pow(static_cast<double>(p), -d) * std::pow(ratio, n / (2 * d));
}

double bound_small(int n, i64 p, int d) {
    if (p == 2 || d < 1 || n < 1) return std::numeric_limits<double>::infinity();
    double pd2 = std::pow(static_cast<double>(p), static_cast<double>(d) * d);
    double rate = static_cast<double>(n) / ((static_cast<double>(d) * d + d) * pd2);
    return std::exp(1.0 / 3.0 - rate);
}

// --------------------------------------------------------------------------
// Lemma suite
// --------------------------------------------------------------------------

namespace {

struct Checker {
    LemmaCheckReport::Item item;

    explicit Checker(std::string name) { item.name = std::move(name); item.pass = true; }

    void expect(bool ok, const std::string& context) {
        ++item.cases;
        if (!ok && item.pass) {
            item.pass = false;
            item.detail = context;
        }
    }
};

std::string graph_context(const FpPoly& u, const char* what) {
    return std::string(what) + " at u = " + to_string(u);
}

}  // namespace

LemmaCheckReport lemma_checks(i64 p, int d_max, int n_max, u64 seed, int n_random,
                              int random_dim_max) {
    if (p == 2) throw std::invalid_argument("lemma_checks: the graph lemmas require p odd");
    std::mt19937_64 rng(seed);

    // the doubly stochastic matrices under test: graph normalizations plus
    // seeded random convex combinations of permutations
    std::vector<std::pair<std::string, RatMatrix>> ds_matrices;
    std::vector<std::pair<FpPoly, IntMatrix>> graph_powers_2d;   // (u, M_u^{2d})
    std::vector<std::pair<FpPoly, IntMatrix>> graph_powers_dd;   // (u, M_u^{d^2+d})
    for (int d = 1; d <= d_max; ++d) {
        MonicRange us(p, d, MonicConstraint::coprime_to_x);
        while (auto u = us.next()) {
            ResidueGraph g = build_graph(p, *u);
            IntMatrix m = adjacency_int(g);
            ds_matrices.emplace_back(to_string(*u), adjacency(g, true));
            graph_powers_2d.emplace_back(*u, mat_pow(m, static_cast<u64>(2 * d)));
            graph_powers_dd.emplace_back(*u, mat_pow(m, static_cast<u64>(d) * d + d));
        }
    }
    auto dim_dist = [&](std::mt19937_64& r) { return static_cast<int>(draw(r, 2, random_dim_max)); };
    auto k_dist = [&](std::mt19937_64& r) { return static_cast<int>(draw(r, 1, 8)); };
    for (int t = 0; t < n_random; ++t) {
        int dim = dim_dist(rng);
        ds_matrices.emplace_back("random#" + std::to_string(t),
                                 random_doubly_stochastic(dim, k_dist(rng), rng));
    }

    LemmaCheckReport report;

    {  // (M~ - J~)^k = M~^k - J~
        Checker c("power_identity");
        for (const auto& [name, m] : ds_matrices) {
            RatMatrix j = RatMatrix::uniform(m.dim);
            RatMatrix diff = mat_sub(m, j);
            for (int k = 1; k <= std::min(n_max, 6); ++k)
                c.expect(mat_pow(diff, static_cast<u64>(k)) ==
                             mat_sub(mat_pow(m, static_cast<u64>(k)), j),
                         name + " k=" + std::to_string(k));
        }
        report.items.push_back(c.item);
    }

    {  // multiplication by a doubly stochastic matrix: E_min/E_max monotone,
       // norm does not increase
        Checker c("ds_multiplication_monotone");
        for (int t = 0; t < n_random; ++t) {
            int dim = dim_dist(rng);
            RatMatrix m1 = random_rational_matrix(dim, rng);
            RatMatrix m2 = random_doubly_stochastic(dim, k_dist(rng), rng);
            RatMatrix left = mat_mul(m1, m2), right = mat_mul(m2, m1);
            std::string ctx = "random pair #" + std::to_string(t);
            c.expect(e_min(left) >= e_min(m1) && e_min(right) >= e_min(m1), ctx + " (E_min)");
            c.expect(e_max(left) <= e_max(m1) && e_max(right) <= e_max(m1), ctx + " (E_max)");
            c.expect(norm_max(left) <= norm_max(m1) && norm_max(right) <= norm_max(m1),
                     ctx + " (norm)");
        }
        report.items.push_back(c.item);
    }

    {  // ||M1 M2|| <= ||M1|| ||M2|| on arbitrary rational matrices
        Checker c("norm_submultiplicative");
        for (int t = 0; t < n_random; ++t) {
            int dim = dim_dist(rng);
            RatMatrix m1 = random_rational_matrix(dim, rng);
            RatMatrix m2 = random_rational_matrix(dim, rng);
            c.expect(norm_max(mat_mul(m1, m2)) <= norm_max(m1) * norm_max(m2),
                     "random pair #" + std::to_string(t));
        }
        report.items.push_back(c.item);
    }

    {  // ||M^k - J~|| <= ||M^l - J~||^{floor(k/l)}
        Checker c("power_norm_corollary");
        for (const auto& [name, m] : ds_matrices) {
            RatMatrix j = RatMatrix::uniform(m.dim);
            int kmax = std::min(n_max, 6);
            for (int k = 1; k <= kmax; ++k)
                for (int l = 1; l <= k; ++l) {
                    mpq_class lhs = norm_max(mat_sub(mat_pow(m, static_cast<u64>(k)), j));
                    mpq_class rhs = mpq_pow(norm_max(mat_sub(mat_pow(m, static_cast<u64>(l)), j)),
                                            static_cast<u64>(k / l));
                    c.expect(lhs <= rhs,
                             name + " k=" + std::to_string(k) + " l=" + std::to_string(l));
                }
        }
        report.items.push_back(c.item);
    }

    {  // 1 - m E_min(M1 M2) <= (1 - m E_min(M1)) (1 - m E_min(M2))
        Checker c("emin_product");
        for (int t = 0; t < n_random; ++t) {
            int dim = dim_dist(rng);
            RatMatrix m1 = random_doubly_stochastic(dim, k_dist(rng), rng);
            RatMatrix m2 = random_doubly_stochastic(dim, k_dist(rng), rng);
            mpq_class md(dim);
            mpq_class lhs = 1 - md * e_min(mat_mul(m1, m2));
            mpq_class rhs = (1 - md * e_min(m1)) * (1 - md * e_min(m2));
            c.expect(lhs <= rhs, "random pair #" + std::to_string(t));
        }
        report.items.push_back(c.item);
    }

    {  // E_min(M_u^{2d}) >= 2(p-1)^d - p^d and E_max(M_u^{2d}) <= (p-1)^d
        Checker c("graph_power_entry_bounds");
        for (const auto& [u, m2d] : graph_powers_2d) {
            int d = u.degree();
            mpz_class lo = 2 * mpz_class(ipow(p - 1, static_cast<unsigned>(d))) -
                           mpz_class(ipow(p, static_cast<unsigned>(d)));
            mpz_class hi = ipow(p - 1, static_cast<unsigned>(d));
            c.expect(min_entry(m2d) >= lo, graph_context(u, "E_min(M^2d) lower bound"));
            c.expect(max_entry(m2d) <= hi, graph_context(u, "E_max(M^2d) upper bound"));
        }
        report.items.push_back(c.item);
    }

    {  // all entries of M_u^{d^2+d} strictly positive
        Checker c("graph_power_positivity");
        for (const auto& [u, mdd] : graph_powers_dd)
            c.expect(min_entry(mdd) > 0, graph_context(u, "positivity of M^{d^2+d}"));
        report.items.push_back(c.item);
    }

    for (const auto& item : report.items) report.all_pass = report.all_pass && item.pass;
    return report;
}

}  // namespace polydens
