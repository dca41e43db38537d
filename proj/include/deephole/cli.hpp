#pragma once

// Command-line front end. Every subcommand prints one JSON envelope
//   {"command", "params", "result", "timing_ms", "version"}
// with sorted keys, or CSV rows with --format csv.
//
// Exit codes: 0 success, 1 proven negative, 2 invalid parameters,
// 3 budget exhausted or a size guard tripped.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "error.hpp"
#include "gf.hpp"
#include "poly.hpp"
#include "rscode.hpp"
#include "symmetric.hpp"
#include "witness.hpp"

namespace deephole::cli {

using json = nlohmann::json;

inline constexpr const char* version = "0.3.1";
inline constexpr std::uint64_t default_seed = 0x5EED;

enum exit_code : int { ok = 0, negative = 1, invalid = 2, guard = 3 };

namespace detail {

inline std::vector<std::uint64_t> parse_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::logic_error&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw error(errc::invalid_params, "expected a comma separated list of integers, got '" + s + "'");
        out.push_back(v);
    }
    return out;
}

inline std::vector<Felt> parse_elements(const Field& F, const std::string& s) {
    std::vector<Felt> out;
    for (auto v : parse_list(s)) out.push_back(F.element(v));
    return out;
}

inline json reps(std::span<const Felt> xs) {
    json a = json::array();
    for (Felt x : xs) a.push_back(x.rep);
    return a;
}

inline json upoly_json(const UPoly& p) { return reps(p.coeffs()); }

inline json surd_json(const Surd& s) {
    return json{{"exact", s.to_string()}, {"approx", s.approx()}, {"sign", s.sign()}};
}

inline json report_json(const BoundReport& r) {
    json terms = json::object();
    for (const auto& [k, v] : r.terms) terms[k] = surd_json(v);
    json conds = json::object();
    for (const auto& [k, v] : r.conditions) conds[k] = v;
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    return json{{"name", r.name},   {"params", params},          {"terms", terms},
                {"conditions", conds}, {"verdict", to_string(r.verdict)}, {"reasons", r.reasons}};
}

inline json cert_json(const WitnessCert& c) {
    return json{{"point", reps(c.point)},
                {"r", upoly_json(c.r)},
                {"agreements", c.agreements},
                {"distance_bound", c.distance_bound}};
}

inline json scan_json(const ScanResult& s, std::size_t d) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back(json{{"point", reps(p.point)}, {"distinct", p.distinct}});
    json fams = json::array();
    for (const auto& f : s.full_families) fams.push_back(f.blocks);
    return json{{"points", pts},
                {"count", s.points.size()},
                {"max_distinct", s.max_distinct},
                {"within_bound", d == 0 || s.max_distinct + 1 <= d},
                {"full_families", fams},
                {"non_monomial_family", s.non_monomial_family}};
}

inline std::string csv_cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return s;
}

// Rows from result[key] when it is an array of objects, else one row of the
// scalar members of result.
inline void write_csv(std::ostream& out, const json& result, const std::string& key) {
    std::vector<json> rows;
    if (!key.empty() && result.contains(key) && result[key].is_array()) {
        for (const auto& r : result[key]) rows.push_back(r.is_object() ? r : json{{"value", r}});
    } else {
        json row = json::object();
        for (auto it = result.begin(); it != result.end(); ++it)
            if (!it.value().is_structured()) row[it.key()] = it.value();
        rows.push_back(row);
    }
    std::vector<std::string> header;
    for (const auto& r : rows)
        for (auto it = r.begin(); it != r.end(); ++it)
            if (std::find(header.begin(), header.end(), it.key()) == header.end()) header.push_back(it.key());
    std::sort(header.begin(), header.end());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            out << (i ? "," : "");
            if (r.contains(header[i])) out << csv_cell(r[header[i]]);
        }
        out << "\n";
    }
}

inline unsigned env_threads() {
    if (const char* s = std::getenv("DEEPHOLE_THREADS")) {
        try {
            const auto v = std::stoul(s);
            if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
        } catch (const std::logic_error&) {
        }
    }
    return 1;
}

}  // namespace detail

/// Parsed flags shared by the subcommands.
struct RunConfig {
    std::string subcommand;
    std::uint64_t seed = default_seed;
    std::uint64_t trials = 100;
    unsigned threads = 1;
    bool deterministic = false;
    std::string format = "json";

    // field selection
    std::uint64_t q = 0, p = 0, s = 1;
    std::string modulus;
    // problem parameters
    std::uint64_t k = 0, d = 0, m = 0, s_dim = 0, kplus1 = 0;
    std::string f, x, a, b, epsilon, method = "both", kind = "all";
    std::uint64_t budget = 0;
    bool large_char = false;
};

namespace detail {

inline FieldPtr field_from(const RunConfig& c) {
    if (c.q && c.p) throw error(errc::invalid_params, "give either --q or --p/--s");
    if (c.q) return Field::of_order(c.q);
    if (!c.p) throw error(errc::invalid_params, "a field is required: --q or --p [--s]");
    if (c.s > 64) throw error(errc::too_large, "extension degree too large");
    std::optional<std::vector<std::uint32_t>> mod;
    if (!c.modulus.empty()) {
        std::vector<std::uint32_t> v;
        for (auto e : parse_list(c.modulus)) v.push_back(static_cast<std::uint32_t>(e));
        mod = v;
    }
    return Field::make(c.p, static_cast<std::uint32_t>(c.s), mod);
}

inline json field_params(const Field& F) {
    return json{{"p", F.p()}, {"s", F.s()}, {"q", F.q()}, {"modulus", F.modulus()}, {"field", F.describe()}};
}

inline TopPoly top_from(const FieldPtr& F, const RunConfig& c) {
    auto lows = parse_elements(*F, c.f);
    if (lows.size() != c.d)
        throw error(errc::invalid_params, "--f must list exactly d=" + std::to_string(c.d) + " coefficients f_0..f_{d-1}");
    return TopPoly(F, c.k, c.d, std::move(lows));
}

inline void need_kd(const FieldPtr& F, const RunConfig& c) {
    if (c.k < 1) throw error(errc::invalid_params, "--k must be >= 1");
    if (c.k + 1 > F->q() - 1 && c.subcommand == "search")
        throw error(errc::invalid_dimensions, "k+1 exceeds q-1");
}

struct Outcome {
    json params = json::object();
    json result = json::object();
    int code = ok;
    std::string csv_key;
};

// ---------------------------------------------------------------------------

inline Outcome cmd_field(const RunConfig& c) {
    const FieldPtr F = field_from(c);
    Outcome o;
    o.params = field_params(*F);
    json elems = json::array();
    std::size_t tz = 0;
    for (Felt a : F->elements()) {
        const Felt t = F->trace(a);
        tz += (t.rep == 0);
        if (F->q() <= 1024) {
            json e{{"rep", a.rep}, {"trace", t.rep}, {"digits", F->digits(a)}};
            e["inverse"] = a.rep ? json(F->inv(a).rep) : json(nullptr);
            elems.push_back(e);
        }
    }
    o.result = json{{"q", F->q()}, {"units", F->q() - 1}, {"trace_zero_count", tz}, {"elements", elems}};
    if (!c.a.empty() || !c.b.empty()) {
        const auto av = parse_elements(*F, c.a.empty() ? "0" : c.a), bv = parse_elements(*F, c.b.empty() ? "0" : c.b);
        if (av.size() != 1 || bv.size() != 1) throw error(errc::invalid_params, "--a and --b take one element each");
        const Felt x = av[0], y = bv[0];
        json ops{{"add", F->add(x, y).rep}, {"sub", F->sub(x, y).rep}, {"mul", F->mul(x, y).rep},
                 {"neg_a", F->neg(x).rep}, {"trace_a", F->trace(x).rep}};
        ops["inv_a"] = x.rep ? json(F->inv(x).rep) : json(nullptr);
        ops["div"] = y.rep ? json(F->div(x, y).rep) : json(nullptr);
        o.result["ops"] = ops;
        o.params["a"] = x.rep;
        o.params["b"] = y.rep;
    }
    o.csv_key = "elements";
    return o;
}

inline Outcome cmd_hd(const RunConfig& c) {
    const FieldPtr F = field_from(c);
    Outcome o;
    o.params = field_params(*F);
    o.params["d"] = c.d;
    o.params["method"] = c.method;
    if (c.d > 40) throw error(errc::cap_exceeded, "d is limited to 40");
    if (c.method != "recursive" && c.method != "explicit" && c.method != "both")
        throw error(errc::invalid_params, "--method must be recursive, explicit or both");
    const SymPoly h = (c.method == "explicit") ? h_basis_explicit(c.d, F) : h_basis_recursive(c.d, F);
    json terms = json::object(), list = json::array();
    bool homogeneous = true;
    for (const auto& [key, coef] : h.terms()) {
        terms[SymPoly::key_string(key)] = coef.rep;
        list.push_back(json{{"term", SymPoly::key_string(key)}, {"coeff", coef.rep}, {"weight", SymPoly::weight(key)}});
        homogeneous &= SymPoly::weight(key) == c.d;
    }
    o.result = json{{"terms", terms}, {"term_list", list}, {"term_count", h.term_count()},
                    {"weight_homogeneous", homogeneous}};
    if (c.method == "both") {
        const bool agree = (h == h_basis_explicit(c.d, F));
        o.result["methods_agree"] = agree;
        if (!agree) o.code = negative;
    }
    o.csv_key = "term_list";
    return o;
}

inline Outcome cmd_hf_eval(const RunConfig& c) {
    const FieldPtr F = field_from(c);
    const TopPoly f = top_from(F, c);
    const auto x = parse_elements(*F, c.x);
    Outcome o;
    o.params = field_params(*F);
    o.params.update(json{{"k", c.k}, {"d", c.d}, {"f", reps(f.lows)}, {"x", reps(x)}});
    const HfEvaluator hf(f);
    const Felt v = hf.value(x), v2 = eval_hf_by_division(f, x);
    const auto g = hf.gradient(x), g2 = grad_hf_by_lemma(f, x);
    json grad = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) grad.push_back(json{{"index", i}, {"partial", g[i].rep}});
    o.result = json{{"value", v.rep},
                    {"value_by_division", v2.rep},
                    {"gradient", grad},
                    {"routes_agree", v == v2 && g == g2}};
    if (!(v == v2 && g == g2)) o.code = negative;
    o.csv_key = "gradient";
    return o;
}

inline Outcome cmd_search(const RunConfig& c) {
    const FieldPtr F = field_from(c);
    need_kd(F, c);
    const TopPoly f = top_from(F, c);
    const RSCode code(F, c.k);
    SearchOptions opt;
    if (c.budget) opt.budget = c.budget;
    opt.threads = c.threads;
    const SearchResult res = search_good_point(f, code, opt);
    Outcome o;
    o.params = field_params(*F);
    o.params.update(json{{"k", c.k}, {"d", c.d}, {"f", reps(f.lows)}, {"budget", c.budget}});
    o.result = json{{"status", to_string(res.status)}, {"evaluations", res.evaluations}};
    json rows = json::array();
    if (res.cert) {
        o.result["cert"] = cert_json(*res.cert);
        rows.push_back(cert_json(*res.cert));
    }
    o.result["certs"] = rows;
    o.result["verdict"] = res.cert ? "not_deep_hole" : (res.status == SearchStatus::no_witness ? "no_witness" : "unknown");
    o.code = res.status == SearchStatus::found ? ok : res.status == SearchStatus::no_witness ? negative : guard;
    o.csv_key = "certs";
    return o;
}

inline Outcome cmd_deephole(const RunConfig& c) {
    const FieldPtr F = field_from(c);
    if (c.k < 1) throw error(errc::invalid_params, "--k must be >= 1");
    const RSCode code(F, c.k);
    const UPoly full(F, parse_elements(*F, c.f));
    Outcome o;
    o.params = field_params(*F);
    o.params.update(json{{"k", c.k}, {"f", upoly_json(full)}, {"n", code.n()}});
    const Word w = word_from_poly(code, full);
    const std::size_t dist = distance_to_code(code, w, c.threads);
    o.result = json{{"distance", dist}, {"covering_radius", code.covering_radius()}, {"degree", full.degree()}};
    if (full.degree() < static_cast<long>(c.k)) {
        o.result["verdict"] = "codeword";
        return o;
    }
    const TopPoly top = canonical_top(code, full);
    o.result["top"] = json{{"d", top.d}, {"lows", reps(top.lows)}};
    o.result["verdict"] = dist == code.covering_radius() ? "deep_hole" : "not_deep_hole";
    if (top.d >= 1 && top.k + 1 <= code.n()) {
        const SearchResult sr = search_good_point(top, code, SearchOptions{UINT64_MAX, c.threads});
        o.result["witness_status"] = to_string(sr.status);
        if (sr.cert) o.result["witness"] = cert_json(*sr.cert);
    }
    return o;
}

inline Outcome cmd_verify(const RunConfig& c) {
    const FieldPtr F = field_from(c);
    Outcome o;
    o.params = field_params(*F);
    const std::size_t d = c.d ? c.d : 3;
    o.params.update(json{{"seed", c.seed}, {"trials", c.trials}, {"kplus1", c.kplus1}, {"d", d}});
    std::vector<std::size_t> sizes;
    if (c.kplus1) sizes.push_back(c.kplus1);
    else
        for (std::size_t n = 2; n <= 6; ++n) sizes.push_back(n);
    json rows = json::array();
    bool all = true;
    for (auto n : sizes) {
        const JacobianReport r = jacobian_identities(n, F);
        rows.push_back(json{{"kplus1", n},
                            {"jacobian_factorization", r.jacobian_factorization},
                            {"determinant_formula", r.determinant_formula},
                            {"h_jacobian_factorization", r.h_jacobian_factorization},
                            {"b_inverse", r.b_inverse},
                            {"derivative_lemma", r.derivative_lemma},
                            {"alternate_sign_convention", r.alternate_sign_convention}});
        all &= r.all_required();
    }
    // seeded agreement of the evaluation and gradient routes
    std::mt19937_64 rng(c.seed);
    std::uint64_t mismatches = 0;
    for (auto n : sizes) {
        const std::size_t k = n - 1;
        std::vector<Felt> lows(d);
        for (auto& v : lows) v = Felt{static_cast<std::uint32_t>(rng() % F->q())};
        const TopPoly f(F, k, d, lows);
        const HfEvaluator hf(f);
        const MVPoly expanded = deephole::detail::expand_sym(g_f(f), n, default_expansion_cap);
        std::vector<MVPoly> partials;
        for (std::size_t i = 0; i < n; ++i) partials.push_back(expanded.partial(i));
        for (std::uint64_t t = 0; t < c.trials; ++t) {
            std::vector<Felt> x(n);
            for (auto& v : x) v = Felt{static_cast<std::uint32_t>(rng() % F->q())};
            const Felt v1 = hf.value(x);
            bool same = v1 == eval_hf_by_division(f, x);
            const auto g1 = hf.gradient(x);
            same &= g1 == grad_hf_by_lemma(f, x);
            same &= v1 == expanded.eval(x);
            for (std::size_t i = 0; i < n; ++i) same &= g1[i] == partials[i].eval(x);
            mismatches += !same;
        }
    }
    o.result = json{{"identities", rows}, {"route_mismatches", mismatches}, {"all_pass", all && mismatches == 0}};
    o.code = (all && mismatches == 0) ? ok : negative;
    o.csv_key = "identities";
    return o;
}

inline Outcome cmd_scan(const RunConfig& c, bool infinity) {
    const FieldPtr F = field_from(c);
    need_kd(F, c);
    const TopPoly f = top_from(F, c);
    const RSCode code(F, c.k);
    Outcome o;
    o.params = field_params(*F);
    o.params.update(json{{"k", c.k}, {"d", c.d}, {"f", reps(f.lows)}});
    const ScanResult s = infinity ? scan_infinity_singular(f, code, c.threads)
                                  : scan_rational_singular_points(f, code, c.threads);
    o.result = scan_json(s, c.d);
    if (infinity) {
        std::set<std::vector<Felt>> pts;
        for (const auto& p : s.points) pts.insert(p.point);
        bool cone = true;
        for (const auto& p : s.points)
            for (Felt l : F->units()) {
                std::vector<Felt> y(p.point.size());
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = F->mul(l, p.point[i]);
                cone &= pts.count(y) > 0;
            }
        o.result["is_cone"] = cone;
        o.result.erase("full_families");
        o.result.erase("non_monomial_family");
    }
    o.csv_key = "points";
    return o;
}

inline Outcome cmd_artin_schreier(const RunConfig& c) {
    const FieldPtr F = field_from(c);
    const ASWitness as = artin_schreier_witness(F, c.k, c.d);
    Outcome o;
    o.params = field_params(*F);
    o.params.update(json{{"k", c.k}, {"d", c.d}});
    json roots = json::array();
    for (Felt r : as.roots) roots.push_back(json{{"root", r.rep}});
    o.result = json{{"b_list", reps(as.b_list)},
                    {"g", upoly_json(as.g)},
                    {"h", upoly_json(as.h)},
                    {"codeword", upoly_json(as.codeword)},
                    {"deg_h", as.h.degree()},
                    {"root_count", as.root_count},
                    {"roots", roots},
                    {"agreements", as.agreements},
                    {"distance", as.distance},
                    {"covering_radius", as.n - as.k},
                    {"not_deep_hole", as.distance < as.n - as.k}};
    o.csv_key = "roots";
    return o;
}

inline Outcome cmd_bounds(const RunConfig& c) {
    Outcome o;
    o.params = json{{"q", c.q}, {"k", c.k}, {"d", c.d}, {"kind", c.kind}, {"m", c.m}, {"s", c.s_dim}};
    const std::string kind = c.kind;
    const bool all = kind == "all";
    json reports = json::array();
    auto want = [&](const char* name) { return all || kind == name; };
    bool any = false;
    if (want("affine")) { reports.push_back(report_json(affine_lower_bound(c.q, c.k, c.d))); any = true; }
    if (want("n1")) { reports.push_back(report_json(n1_bound(c.q, c.k, c.d))); any = true; }
    if (want("n2")) { reports.push_back(report_json(n2_bound(c.q, c.k, c.d))); any = true; }
    if (want("useful")) { reports.push_back(report_json(useful_points_lower_bound(c.q, c.k, c.d, false))); any = true; }
    if (want("useful-large")) { reports.push_back(report_json(useful_points_lower_bound(c.q, c.k, c.d, true))); any = true; }
    if (kind == "gl" || (all && c.m)) {
        reports.push_back(report_json(gl_estimate_terms(c.m, c.s_dim, c.d, c.q)));
        any = true;
    }
    if (kind == "csm" || (all && c.m)) {
        const CsmBound b = c_sm_bound(c.m, c.d);
        json row{{"name", "c_sm_bound"}, {"katz_sum", b.katz.str()}, {"closed_form", b.closed_form.str()},
                 {"holds", b.holds}, {"verdict", b.holds ? "conditions_met" : "conditions_not_met"}};
        json E = json::array(), A = json::array();
        for (const auto& e : b.E) E.push_back(e.str());
        for (const auto& a : b.A) A.push_back(a.str());
        row["E"] = E;
        row["A"] = A;
        reports.push_back(row);
        any = true;
    }
    if (!any) throw error(errc::invalid_params, "unknown --kind " + kind);
    o.result = json{{"reports", reports}};
    o.csv_key = "reports";
    return o;
}

inline Outcome cmd_thresholds(const RunConfig& c) {
    const Ratio eps = Ratio::parse(c.epsilon.empty() ? "1/2" : c.epsilon);
    std::optional<std::uint64_t> p;
    if (c.p) p = c.p;
    const BoundReport r = theorem_conditions(c.q, c.k, c.d, eps, c.large_char, p);
    Outcome o;
    o.params = json{{"q", c.q}, {"k", c.k}, {"d", c.d}, {"epsilon", eps.str()}, {"large_char", c.large_char}};
    if (p) o.params["p"] = *p;
    o.result = report_json(r);
    json rows = json::array();
    for (const auto& [name, okv] : r.conditions) rows.push_back(json{{"condition", name}, {"holds", okv}});
    o.result["condition_list"] = rows;
    if (r.verdict == Verdict::conditions_met && c.d >= 2 && c.k > c.d) {
        const BoundReport u = useful_points_lower_bound(c.q, c.k, c.d, c.large_char);
        o.result["useful_points_positive"] = u.value().sign() > 0;
    }
    o.code = r.verdict == Verdict::conditions_met ? ok : r.verdict == Verdict::conditions_not_met ? negative : invalid;
    o.csv_key = "condition_list";
    return o;
}

inline Outcome cmd_sweep(const RunConfig& c) {
    const FieldPtr F = field_from(c);
    if (!(c.k > c.d && c.d >= 1)) throw error(errc::invalid_params, "need k > d >= 1");
    if (!(c.k + c.d < F->q() - 1)) throw error(errc::invalid_params, "need k+d < q-1");
    const RSCode code(F, c.k);
    if (code.size() > brute_force_limit) throw error(errc::too_large_for_brute_force, "q^k exceeds 10^7");
    Outcome o;
    o.params = field_params(*F);
    o.params.update(json{{"k", c.k}, {"d", c.d}});
    json rows = json::array();
    std::uint64_t mismatches = 0, holes = 0;
    std::vector<Felt> lows(c.d, Felt{0});
    while (true) {
        const TopPoly f(F, c.k, c.d, lows);
        const bool hole = is_deep_hole(code, word_from_top(code, f), c.threads);
        const SearchResult s = search_good_point(f, code, SearchOptions{UINT64_MAX, c.threads});
        const bool agree = hole == (s.status == SearchStatus::no_witness);
        mismatches += !agree;
        holes += hole;
        rows.push_back(json{{"f", reps(lows)}, {"deep_hole", hole}, {"witness", s.status == SearchStatus::found},
                            {"agree", agree}});
        std::size_t j = 0;
        while (j < c.d && ++lows[j].rep == F->q()) lows[j++].rep = 0;
        if (j == c.d) break;
    }
    o.result = json{{"instances", rows}, {"count", rows.size()}, {"deep_holes", holes}, {"mismatches", mismatches}};
    o.code = mismatches == 0 ? ok : negative;
    o.csv_key = "instances";
    return o;
}

inline int code_for(errc e) {
    switch (e) {
    case errc::too_large_for_brute_force:
    case errc::too_large_for_exhaustive:
    case errc::cap_exceeded:
    case errc::too_many_variables:
        return guard;
    default:
        return invalid;
    }
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    cfg.threads = detail::env_threads();
    CLI::App app{"Reed-Solomon deep hole workbench", "deephole"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    auto common = [&](CLI::App* sc) {
        sc->add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();
        sc->add_option("--trials", cfg.trials, "number of randomized trials")->capture_default_str();
        sc->add_option("--threads", cfg.threads, "worker threads (default: DEEPHOLE_THREADS or 1)");
        sc->add_flag("--deterministic", cfg.deterministic, "single-threaded canonical order; timing_ms is 0");
        sc->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto field_opts = [&](CLI::App* sc) {
        sc->add_option("--q", cfg.q, "field order (prime power)");
        sc->add_option("--p", cfg.p, "characteristic");
        sc->add_option("--s", cfg.s, "extension degree");
        sc->add_option("--modulus", cfg.modulus, "monic modulus c0,c1,...,1 (low first)");
    };
    auto top_opts = [&](CLI::App* sc) {
        sc->add_option("--k", cfg.k, "code dimension")->required();
        sc->add_option("--d", cfg.d, "degree excess of f over k")->required();
        sc->add_option("--f", cfg.f, "f_0,...,f_{d-1}: low coefficients of the monic top part");
    };

    std::map<std::string, CLI::App*> subs;
    auto add = [&](const char* name, const char* help) {
        CLI::App* sc = app.add_subcommand(name, help);
        common(sc);
        subs[name] = sc;
        return sc;
    };

    field_opts(add("field", "field parameters, element table and single operations"));
    subs["field"]->add_option("--a", cfg.a, "element a (rep)");
    subs["field"]->add_option("--b", cfg.b, "element b (rep)");

    auto* hd = add("hd", "H_d in the elementary-symmetric basis");
    field_opts(hd);
    hd->add_option("--d", cfg.d, "degree")->required();
    hd->add_option("--method", cfg.method, "recursive, explicit or both")->capture_default_str();

    auto* hfe = add("hf-eval", "H_f and its gradient at a point; e.g. --q 7 --k 2 --d 1 --f 0 --x 1,2,4");
    field_opts(hfe);
    top_opts(hfe);
    hfe->add_option("--x", cfg.x, "point x_1,...,x_{k+1}")->required();

    auto* se = add("search", "first rational point of V_f with distinct nonzero coordinates");
    field_opts(se);
    top_opts(se);
    se->add_option("--budget", cfg.budget, "maximum H_f evaluations (0 = unlimited)");

    auto* dh = add("deephole",
                   "exact deep-hole verdict for the word of f; --f is the FULL polynomial low first, "
                   "e.g. --q 7 --k 2 --f 0,0,1 for T^2");
    field_opts(dh);
    dh->add_option("--k", cfg.k, "code dimension")->required();
    dh->add_option("--f", cfg.f, "c_0,c_1,...: all coefficients of f, low degree first")->required();

    auto* vi = add("verify-identities", "symbolic Jacobian identities and seeded route agreement");
    field_opts(vi);
    vi->add_option("--kplus1", cfg.kplus1, "number of variables, 2..6 (default: all)");
    vi->add_option("--d", cfg.d, "degree used for the route agreement checks (default 3)");

    auto* ss = add("singular-scan", "exhaustive rational singular points of V_f");
    field_opts(ss);
    top_opts(ss);
    auto* is = add("infinity-scan", "exhaustive rational singular points at infinity (affine cone)");
    field_opts(is);
    top_opts(is);

    auto* as = add("artin-schreier", "explicit codeword close to the word of T^{k+d}");
    field_opts(as);
    as->add_option("--k", cfg.k, "code dimension")->required();
    as->add_option("--d", cfg.d, "degree excess")->required();

    auto* bo = add("bounds", "exact point-count bounds");
    bo->add_option("--q", cfg.q, "field order")->required();
    bo->add_option("--k", cfg.k, "code dimension");
    bo->add_option("--d", cfg.d, "degree excess")->required();
    bo->add_option("--kind", cfg.kind, "all, affine, n1, n2, useful, useful-large, gl, csm")->capture_default_str();
    bo->add_option("--m", cfg.m, "dimension m for gl/csm");
    bo->add_option("--sdim", cfg.s_dim, "singular locus dimension s for gl");

    auto* th = add("thresholds", "hypotheses of the nonexistence theorems, decided exactly");
    th->add_option("--q", cfg.q, "field order")->required();
    th->add_option("--k", cfg.k, "code dimension")->required();
    th->add_option("--d", cfg.d, "degree excess")->required();
    th->add_option("--epsilon", cfg.epsilon, "rational a/b in (0,1)")->required();
    th->add_flag("--large-char", cfg.large_char, "use the char > d+1 variant");
    th->add_option("--p", cfg.p, "characteristic (large-char variant)");

    auto* sw = add("equivalence-sweep", "deep-hole verdict versus witness search over all top parts");
    field_opts(sw);
    sw->add_option("--k", cfg.k, "code dimension")->required();
    sw->add_option("--d", cfg.d, "degree excess")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? ok : invalid;
    }

    for (const auto& [name, sc] : subs)
        if (sc->parsed()) cfg.subcommand = name;
    if (cfg.deterministic) cfg.threads = 1;
    if (cfg.threads < 1) cfg.threads = 1;

    const auto start = std::chrono::steady_clock::now();
    detail::Outcome o;
    try {
        const std::string& c = cfg.subcommand;
        if (c == "field") o = detail::cmd_field(cfg);
        else if (c == "hd") o = detail::cmd_hd(cfg);
        else if (c == "hf-eval") o = detail::cmd_hf_eval(cfg);
        else if (c == "search") o = detail::cmd_search(cfg);
        else if (c == "deephole") o = detail::cmd_deephole(cfg);
        else if (c == "verify-identities") o = detail::cmd_verify(cfg);
        else if (c == "singular-scan") o = detail::cmd_scan(cfg, false);
        else if (c == "infinity-scan") o = detail::cmd_scan(cfg, true);
        else if (c == "artin-schreier") o = detail::cmd_artin_schreier(cfg);
        else if (c == "bounds") o = detail::cmd_bounds(cfg);
        else if (c == "thresholds") o = detail::cmd_thresholds(cfg);
        else if (c == "equivalence-sweep") o = detail::cmd_sweep(cfg);
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return detail::code_for(e.code());
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (cfg.format == "csv") {
        detail::write_csv(out, o.result, o.csv_key);
    } else {
        o.params["threads"] = cfg.threads;
        o.params["deterministic"] = cfg.deterministic;
        json env{{"command", cfg.subcommand},
                 {"params", o.params},
                 {"result", o.result},
                 {"timing_ms", cfg.deterministic ? 0.0 : elapsed},
                 {"version", version}};
        out << env.dump() << "\n";
    }
    return o.code;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"deephole"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace deephole::cli
