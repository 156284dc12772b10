// Command-line interface: every library operation as a subcommand with
// machine-readable output.  Exit codes: 0 success, 1 check failure,
// 2 usage or budget error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polydens/density.hpp"
#include "polydens/equidist.hpp"
#include "polydens/fp_poly.hpp"
#include "polydens/sieve.hpp"
#include "polydens/verify.hpp"
#include "polydens/zpoly.hpp"

using json = nlohmann::json;
using namespace polydens;

namespace {

json q_json(const mpq_class& q) {
    return json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

std::string q_str(const mpq_class& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

struct Output {
    std::string format = "json";
    std::string path;

    void emit(const json& doc, const std::string& text_form, const std::string& csv_form) const {
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output path: " + path);
            os = &file;
        }
        if (format == "json") (*os) << doc.dump(2) << "\n";
        else if (format == "csv") (*os) << csv_form;
        else (*os) << text_form;
    }
};

json density_report_json(const DensityReport& r) {
    json j;
    j["schema"] = "1";
    j["n"] = r.n;
    j["p"] = r.p;
    j["kind"] = to_string(r.kind);
    j["route"] = to_string(r.route);
    j["exact"] = q_json(r.exact);
    j["main_term"] = q_json(r.main_term_value);
    j["error_bound"] = r.error_bound_value;
    return j;
}

int cmd_density(const std::vector<int>& ns, const std::vector<i64>& ps, const std::string& kind_s,
                const std::string& route_s, u64 budget, const Output& out) {
    DensityKind kind = (kind_s == "sqf") ? DensityKind::sqf : DensityKind::max;
    json results = json::array();
    std::ostringstream text, csv;
    csv << "n,p,kind,route,exact_num,exact_den,exact,main_term,error_bound\n";
    for (int n : ns) {
        for (i64 p : ps) {
            std::vector<DensityReport> reports;
            if (route_s == "brute" || route_s == "both")
                reports.push_back(local_density_brute(n, p, kind, budget ? budget : kDefaultBruteBudget));
            if (route_s == "series" || route_s == "both")
                reports.push_back(local_density_series(n, p, kind, budget ? budget : kDefaultCountBudget));
            if (route_s == "both" && reports[0].exact != reports[1].exact) {
                std::cerr << "route mismatch at n=" << n << " p=" << p << "\n";
                return 1;
            }
            for (const DensityReport& r : reports) {
                results.push_back(density_report_json(r));
                text << "n=" << r.n << " p=" << r.p << " kind=" << to_string(r.kind)
                     << " route=" << to_string(r.route) << " exact=" << q_str(r.exact)
                     << " main_term=" << q_str(r.main_term_value)
                     << " error_bound=" << r.error_bound_value << "\n";
                csv << r.n << "," << r.p << "," << to_string(r.kind) << "," << to_string(r.route)
                    << "," << r.exact.get_num().get_str() << "," << r.exact.get_den().get_str()
                    << "," << mpq_get_d(r.exact.get_mpq_t()) << ","
                    << mpq_get_d(r.main_term_value.get_mpq_t()) << "," << r.error_bound_value
                    << "\n";
            }
        }
    }
    json doc;
    doc["schema"] = "1";
    doc["command"] = "density";
    doc["result"] = (results.size() == 1) ? results[0] : results;
    out.emit(doc, text.str(), csv.str());
    return 0;
}

int cmd_constants(const std::string& kind_s, i64 cutoff, const Output& out) {
    std::map<std::string, ProductKind> kinds{{"a4b3", ProductKind::a4b3},
                                             {"sqf-limit", ProductKind::sqf_limit},
                                             {"max-limit", ProductKind::max_limit},
                                             {"yamamura", ProductKind::yamamura},
                                             {"lenstra", ProductKind::lenstra}};
    EulerProduct e = euler_product(kinds.at(kind_s), cutoff);
    json doc;
    doc["schema"] = "1";
    doc["command"] = "constants";
    doc["result"] = {{"kind", to_string(e.kind)},
                     {"cutoff", e.cutoff},
                     {"value", e.value},
                     {"tail_bound", e.tail_bound},
                     {"note", e.note}};
    std::ostringstream text, csv;
    text << to_string(e.kind) << " (cutoff " << e.cutoff << ") = " << e.value << " +- "
         << e.tail_bound << "\n";
    csv << "kind,cutoff,value,tail_bound\n"
        << to_string(e.kind) << "," << e.cutoff << "," << e.value << "," << e.tail_bound << "\n";
    out.emit(doc, text.str(), csv.str());
    return 0;
}

int cmd_delta(const std::vector<int>& ns, i64 p, int d, bool witness, u64 budget,
              const Output& out) {
    json results = json::array();
    std::ostringstream text, csv;
    csv << "n,p,d,delta_num,delta_den,delta,bound_trivial,bound_large,bound_small\n";
    for (int n : ns) {
        DeltaReport r = delta_exact(n, p, d, budget ? budget : kDefaultCountBudget);
        json j;
        j["n"] = r.n;
        j["p"] = r.p;
        j["d"] = r.d;
        j["delta_exact"] = q_json(r.delta);
        j["bound_trivial"] = q_json(r.bound_trivial);
        j["bound_large"] = r.bound_large_value;
        j["bound_small"] = r.bound_small_value;
        if (witness) {
            j["argmax_u"] = to_string(r.argmax_u);
            j["argmax_alpha"] = to_string(residue_from_index(p, r.d, r.argmax_alpha));
        }
        results.push_back(j);
        text << "delta(" << r.n << "," << r.p << "," << r.d << ") = " << q_str(r.delta);
        if (witness)
            text << "  at u = " << to_string(r.argmax_u) << ", alpha = "
                 << to_string(residue_from_index(p, r.d, r.argmax_alpha));
        text << "\n";
        csv << r.n << "," << r.p << "," << r.d << "," << r.delta.get_num().get_str() << ","
            << r.delta.get_den().get_str() << "," << mpq_get_d(r.delta.get_mpq_t()) << ","
            << mpq_get_d(r.bound_trivial.get_mpq_t()) << "," << r.bound_large_value << ","
            << r.bound_small_value << "\n";
    }
    json doc;
    doc["schema"] = "1";
    doc["command"] = "delta";
    doc["result"] = (results.size() == 1) ? results[0] : results;
    out.emit(doc, text.str(), csv.str());
    return 0;
}

int cmd_lemma_check(i64 p, int dmax, int nmax, u64 seed, const Output& out) {
    LemmaCheckReport rep = lemma_checks(p, dmax, nmax, seed);
    json items = json::array();
    std::ostringstream text, csv;
    csv << "lemma,pass,cases\n";
    for (const auto& item : rep.items) {
        items.push_back({{"name", item.name},
                         {"pass", item.pass},
                         {"cases", item.cases},
                         {"detail", item.detail}});
        text << (item.pass ? "[PASS] " : "[FAIL] ") << item.name << " (" << item.cases
             << " cases)" << (item.pass ? "" : ": " + item.detail) << "\n";
        csv << item.name << "," << item.pass << "," << item.cases << "\n";
    }
    json doc;
    doc["schema"] = "1";
    doc["command"] = "lemma-check";
    doc["result"] = {{"p", p}, {"dmax", dmax}, {"nmax", nmax}, {"seed", seed},
                     {"all_pass", rep.all_pass}, {"items", items}};
    out.emit(doc, text.str(), csv.str());
    return rep.all_pass ? 0 : 1;
}

int cmd_dedekind(const std::string& poly_s, i64 p, const Output& out) {
    ZPoly f = parse_zpoly(poly_s);
    if (!f.is_monic() || f.degree() < 1)
        throw std::invalid_argument("dedekind: the polynomial must be monic of degree >= 1");
    bool maximal = is_maximal_at_p(f, p);
    mpz_class disc = discriminant(f);
    std::string tag;
    if (p == 2) {
        // the valuation-one branch needs p odd; at 2 the class is unit or >= 2
        tag = is_squarefree(reduce_mod_p(f, 2)) ? "unit" : "not_applicable";
    } else {
        tag = to_string(disc_valuation_class(f, p).tag);
    }
    json doc;
    doc["schema"] = "1";
    doc["command"] = "dedekind";
    doc["result"] = {{"poly", to_string(f)}, {"p", p}, {"maximal", maximal},
                     {"disc", disc.get_str()}, {"disc_class", tag}};
    std::ostringstream text, csv;
    text << to_string(f) << " at p = " << p << ": maximal = " << (maximal ? "true" : "false")
         << ", disc = " << disc.get_str() << ", class = " << tag << "\n";
    csv << "poly,p,maximal,disc,disc_class\n"
        << to_string(f) << "," << p << "," << maximal << "," << disc.get_str() << "," << tag
        << "\n";
    out.emit(doc, text.str(), csv.str());
    return 0;
}

int cmd_experiment(const std::string& kind_s, int n, double X, bool odd_part, u64 budget,
                   const Output& out) {
    std::map<std::string, ExperimentFamily> fams{
        {"a4b3", ExperimentFamily::a4b3},
        {"sqf-monic", ExperimentFamily::sqf_monic},
        {"max-monic", ExperimentFamily::max_monic},
        {"sqf-allcoeff", ExperimentFamily::sqf_allcoeff},
        {"max-allcoeff", ExperimentFamily::max_allcoeff}};
    ExperimentKind kind{fams.at(kind_s), n};
    std::vector<std::map<i64, u64>> marginals;
    ExperimentReport r = run_experiment(kind, X, odd_part, budget ? budget : kDefaultBruteBudget,
                                        20'000, &marginals);
    json doc;
    doc["schema"] = "1";
    doc["command"] = "experiment";
    doc["result"] = {{"kind", to_string(r.kind.family)},
                     {"n", r.kind.n},
                     {"X", r.X},
                     {"odd_part_only", r.odd_part_only},
                     {"exponents", r.exponents},
                     {"total_tuples", r.total_tuples},
                     {"counted", r.counted},
                     {"unknown", r.unknown},
                     {"singular_series", r.singular_series_value},
                     {"li_product", r.li_product},
                     {"predicted", r.predicted},
                     {"relative_gap", r.relative_gap},
                     {"note", r.note}};
    std::ostringstream text, csv;
    text << to_string(r.kind.family) << " X=" << r.X << (r.odd_part_only ? " (odd part)" : "")
         << ": counted " << r.counted << " of " << r.total_tuples << " (" << r.unknown
         << " unknown), predicted " << r.predicted << ", relative gap " << r.relative_gap << "\n";
    csv << "coordinate,value,good_count\n";
    for (size_t i = 0; i < marginals.size(); ++i)
        for (const auto& [v, cnt] : marginals[i]) csv << i << "," << v << "," << cnt << "\n";
    out.emit(doc, text.str(), csv.str());
    return 0;
}

int cmd_rho(const std::string& spec_s, i64 p, int n, u64 budget, const Output& out) {
    BadSetSpec spec;
    if (spec_s == "a4b3") spec = bad_set_a4b3();
    else if (spec_s == "sqf-disc-monic") spec = bad_set_sqf_disc_monic(n);
    else if (spec_s == "max-monic") spec = bad_set_max_monic(n);
    else throw std::invalid_argument("unknown bad-set spec: " + spec_s);
    u64 rho = rho_prime(p, spec, budget ? budget : kDefaultBruteBudget);
    i64 pN = 1;
    for (int i = 0; i < spec.N; ++i) pN *= p;
    mpz_class phin;
    mpz_ui_pow_ui(phin.get_mpz_t(), static_cast<unsigned long>(pN - pN / p),
                  static_cast<unsigned long>(spec.n));
    mpq_class factor = 1 - mpq_class(i64(rho), phin);
    factor.canonicalize();
    json doc;
    doc["schema"] = "1";
    doc["command"] = "rho";
    doc["result"] = {{"spec", spec.name}, {"p", p}, {"N", spec.N}, {"rho", rho},
                     {"phi_pN_pow_n", phin.get_str()}, {"local_factor", q_json(factor)}};
    std::ostringstream text, csv;
    text << spec.name << " at p = " << p << ": rho'(" << pN << ") = " << rho
         << ", local factor " << q_str(factor) << "\n";
    csv << "spec,p,rho,local_factor\n" << spec.name << "," << p << "," << rho << ","
        << q_str(factor) << "\n";
    out.emit(doc, text.str(), csv.str());
    return 0;
}

int cmd_lseries(i64 p, const std::string& which, int D, u64 budget, const Output& out) {
    LseriesVariant v = (which == "no-x") ? LseriesVariant::no_x : LseriesVariant::no_x_no_c;
    LseriesCheck c = lseries_identity_check(p, v, D, budget ? budget : kDefaultEnumBudget);
    json doc;
    doc["schema"] = "1";
    doc["command"] = "lseries";
    doc["result"] = {{"p", c.p}, {"which", which}, {"D", c.D}, {"partial", q_json(c.partial)},
                     {"target", q_json(c.target)}, {"gap", q_json(c.gap)},
                     {"bound", q_json(c.bound)}, {"ok", c.ok}};
    std::ostringstream text, csv;
    text << "p=" << c.p << " " << which << " D=" << c.D << ": partial " << q_str(c.partial)
         << ", target " << q_str(c.target) << ", gap " << q_str(c.gap) << " vs bound "
         << q_str(c.bound) << " -> " << (c.ok ? "ok" : "FAIL") << "\n";
    csv << "p,which,D,partial,target,gap,bound,ok\n"
        << c.p << "," << which << "," << c.D << "," << q_str(c.partial) << ","
        << q_str(c.target) << "," << q_str(c.gap) << "," << q_str(c.bound) << "," << c.ok << "\n";
    out.emit(doc, text.str(), csv.str());
    return c.ok ? 0 : 1;
}

int cmd_p2(int n, const std::string& kind_s, const Output& out) {
    DensityKind kind = (kind_s == "sqf") ? DensityKind::sqf : DensityKind::max;
    mpq_class closed = p2_density(n, kind);
    mpq_class brute = p2_density_brute(n, kind);
    json doc;
    doc["schema"] = "1";
    doc["command"] = "p2";
    doc["result"] = {{"n", n}, {"kind", kind_s}, {"closed_form", q_json(closed)},
                     {"brute_force", q_json(brute)}, {"agree", closed == brute}};
    std::ostringstream text, csv;
    text << "P_{" << n << ",2}^" << kind_s << " = " << q_str(closed) << " (brute "
         << q_str(brute) << ")\n";
    csv << "n,kind,closed_form,brute\n" << n << "," << kind_s << "," << q_str(closed) << ","
        << q_str(brute) << "\n";
    out.emit(doc, text.str(), csv.str());
    return closed == brute ? 0 : 1;
}

int cmd_verify_all(u64 seed, const Output& out) {
    VerifyOptions opts;
    opts.seed = seed;
    std::vector<CriterionResult> results =
        run_all_criteria(opts, out.format == "json" ? nullptr : &std::cout);
    json items = json::array();
    std::ostringstream csv;
    csv << "id,pass,warn_only,seconds\n";
    for (const auto& r : results) {
        items.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass},
                         {"warn_only", r.warn_only}, {"seconds", r.seconds},
                         {"detail", r.detail}});
        csv << r.id << "," << r.pass << "," << r.warn_only << "," << r.seconds << "\n";
    }
    bool ok = all_passed(results);
    json doc;
    doc["schema"] = "1";
    doc["command"] = "verify-all";
    doc["result"] = {{"seed", seed}, {"all_passed", ok}, {"criteria", items}};
    if (out.format == "json") out.emit(doc, "", "");
    else if (out.format == "csv") out.emit(doc, "", csv.str());
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact local densities, equidistribution discrepancies, and prime-tuple "
                 "sieve experiments for polynomials with unit coefficients"};
    app.require_subcommand(1);
    app.fallthrough();

    Output out;
    u64 budget = 0;  // 0 = per-operation default
    u64 seed = 42;
    app.add_option("--format", out.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", out.path, "write output to a file instead of stdout");
    app.add_option("--budget", budget, "work budget override");
    app.add_option("--seed", seed, "seed for sampled checks");

    auto* dens = app.add_subcommand("density", "local density P_{n,p} by one or both routes");
    std::vector<int> dens_n{2};
    std::vector<i64> dens_p{3};
    std::string dens_kind = "sqf", dens_route = "both";
    dens->add_option("--n", dens_n, "degree(s)")->required();
    dens->add_option("--p", dens_p, "prime(s)")->required();
    dens->add_option("--kind", dens_kind)->check(CLI::IsMember({"sqf", "max"}))->required();
    dens->add_option("--route", dens_route)->check(CLI::IsMember({"brute", "series", "both"}));

    auto* cons = app.add_subcommand("constants", "Euler-product constants");
    std::string cons_kind = "a4b3";
    i64 cons_cutoff = 1'000'000;
    cons->add_option("--kind", cons_kind)
        ->check(CLI::IsMember({"a4b3", "sqf-limit", "max-limit", "yamamura", "lenstra"}))
        ->required();
    cons->add_option("--cutoff", cons_cutoff);

    auto* del = app.add_subcommand("delta", "exact equidistribution discrepancy delta_{n,p}(d)");
    std::vector<int> del_n{4};
    i64 del_p = 3;
    int del_d = 1;
    bool del_witness = false;
    del->add_option("--n", del_n, "length(s) of the coefficient tuples")->required();
    del->add_option("--p", del_p)->required();
    del->add_option("--d", del_d)->required();
    del->add_flag("--witness", del_witness, "include the maximizing (u, alpha)");

    auto* lem = app.add_subcommand("lemma-check", "exact doubly stochastic lemma suite");
    i64 lem_p = 3;
    int lem_dmax = 2, lem_nmax = 6;
    lem->add_option("--p", lem_p)->required();
    lem->add_option("--dmax", lem_dmax);
    lem->add_option("--nmax", lem_nmax);

    auto* ded = app.add_subcommand("dedekind", "local maximality and discriminant class at p");
    std::string ded_poly;
    i64 ded_p = 3;
    ded->add_option("--poly", ded_poly, "monic integer polynomial, e.g. x^3-2*x+7")->required();
    ded->add_option("--p", ded_p)->required();

    auto* exp = app.add_subcommand("experiment", "desk-scale sieve experiment");
    std::string exp_kind = "a4b3";
    int exp_n = 2;
    double exp_x = 10;
    bool exp_odd = false;
    exp->add_option("--kind", exp_kind)
        ->check(CLI::IsMember({"a4b3", "sqf-monic", "max-monic", "sqf-allcoeff", "max-allcoeff"}))
        ->required();
    exp->add_option("--n", exp_n, "degree for the polynomial families");
    exp->add_option("--X", exp_x)->required();
    exp->add_flag("--odd-part", exp_odd, "test the odd part of the discriminant");

    auto* rho = app.add_subcommand("rho", "rho'(p^N) for a congruence bad set");
    std::string rho_spec = "a4b3";
    i64 rho_p = 3;
    int rho_n = 2;
    rho->add_option("--spec", rho_spec)
        ->check(CLI::IsMember({"a4b3", "sqf-disc-monic", "max-monic"}))
        ->required();
    rho->add_option("--p", rho_p)->required();
    rho->add_option("--n", rho_n, "degree for the monic specs");

    auto* lse = app.add_subcommand("lseries", "Mobius L-series partial sums vs closed forms");
    i64 lse_p = 3;
    std::string lse_which = "no-x";
    int lse_d = 8;
    lse->add_option("--p", lse_p)->required();
    lse->add_option("--which", lse_which)->check(CLI::IsMember({"no-x", "no-x-no-c"}));
    lse->add_option("--D", lse_d);

    auto* p2c = app.add_subcommand("p2", "p = 2 closed forms vs exhaustive lifts");
    int p2_n = 5;
    std::string p2_kind = "max";
    p2c->add_option("--n", p2_n)->required();
    p2c->add_option("--kind", p2_kind)->check(CLI::IsMember({"sqf", "max"}));

    auto* ver = app.add_subcommand("verify-all", "run every acceptance criterion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (budget == 0) {
        if (const char* env = std::getenv("POLYDENS_BUDGET")) budget = std::strtoull(env, nullptr, 10);
    }

    try {
        if (dens->parsed()) return cmd_density(dens_n, dens_p, dens_kind, dens_route, budget, out);
        if (cons->parsed()) return cmd_constants(cons_kind, cons_cutoff, out);
        if (del->parsed()) return cmd_delta(del_n, del_p, del_d, del_witness, budget, out);
        if (lem->parsed()) return cmd_lemma_check(lem_p, lem_dmax, lem_nmax, seed, out);
        if (ded->parsed()) return cmd_dedekind(ded_poly, ded_p, out);
        if (exp->parsed()) return cmd_experiment(exp_kind, exp_n, exp_x, exp_odd, budget, out);
        if (rho->parsed()) return cmd_rho(rho_spec, rho_p, rho_n, budget, out);
        if (lse->parsed()) return cmd_lseries(lse_p, lse_which, lse_d, budget, out);
        if (p2c->parsed()) return cmd_p2(p2_n, p2_kind, out);
        if (ver->parsed()) return cmd_verify_all(seed, out);
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
