#pragma once

// Rational witness points on V_f = {H_f = 0}, not-a-deep-hole certificates,
// the Artin-Schreier construction for monomials, and exhaustive scans of
// rational singular points.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gf.hpp"
#include "poly.hpp"
#include "rscode.hpp"
#include "symmetric.hpp"

namespace deephole {

struct WitnessCert {
    std::vector<Felt> point;
    UPoly r;  // f mod prod(T - x_i); degree <= k-1
    std::size_t agreements = 0;
    std::size_t distance_bound = 0;
};

enum class SearchStatus { found, no_witness, budget_exhausted };

inline const char* to_string(SearchStatus s) noexcept {
    switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::no_witness: return "no_witness";
    case SearchStatus::budget_exhausted: return "budget_exhausted";
    }
    return "unknown";
}

struct SearchOptions {
    std::uint64_t budget = std::numeric_limits<std::uint64_t>::max();  // eval_hf calls
    unsigned threads = 1;
};

struct SearchResult {
    SearchStatus status = SearchStatus::no_witness;
    std::optional<WitnessCert> cert;
    std::uint64_t evaluations = 0;
};

namespace detail {

inline void check_code_poly(const TopPoly& f, const RSCode& code) {
    require_same_field(f.field, code.field());
    if (f.k != code.k()) throw error(errc::invalid_dimensions, "TopPoly k differs from the code's k");
}

// Advance idx (strictly increasing, values < n) to the next combination whose
// first entry stays fixed. Returns false when exhausted.
inline bool next_combination_tail(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t r = idx.size();
    std::size_t j = r;
    while (j > 1 && idx[j - 1] == n - r + j - 1) --j;
    if (j <= 1) return false;
    ++idx[j - 1];
    for (std::size_t t = j; t < r; ++t) idx[t] = idx[t - 1] + 1;
    return true;
}

}  // namespace detail

/// Build and verify the certificate for a zero x of H_f with nonzero,
/// pairwise-distinct coordinates.
inline WitnessCert certificate_from_point(const TopPoly& f, const RSCode& code, std::span<const Felt> x) {
    detail::check_code_poly(f, code);
    const Field& F = *code.field();
    if (x.size() != f.k + 1) throw error(errc::not_a_witness, "point must have k+1 coordinates");
    std::set<Felt> seen;
    for (Felt v : x) {
        if (!F.contains(v)) throw error(errc::not_a_witness, "coordinate outside field");
        if (v.rep == 0) throw error(errc::not_a_witness, "zero coordinate");
        if (!seen.insert(v).second) throw error(errc::not_a_witness, "repeated coordinate");
    }
    if (eval_hf(f, x).rep != 0) throw error(errc::not_a_witness, "H_f does not vanish at the point");

    const UPoly full = full_poly(f);
    UPoly r = uni_rem(full, UPoly::from_roots(code.field(), x));
    if (r.degree() > static_cast<long>(f.k) - 1)
        throw error(errc::not_a_witness, "remainder has degree >= k");
    const std::size_t agree = agreements(word_from_poly(code, full), word_from_poly(code, r));
    if (agree < f.k + 1) throw error(errc::not_a_witness, "fewer than k+1 agreements");
    WitnessCert cert;
    cert.point.assign(x.begin(), x.end());
    cert.r = std::move(r);
    cert.agreements = agree;
    cert.distance_bound = code.n() - agree;
    return cert;
}

/// First zero of H_f among strictly increasing (k+1)-tuples of units, in
/// lexicographic canonical order. With several threads the first coordinate is
/// split across workers and the smallest hit wins, so the answer matches the
/// single-threaded one whenever the budget is not hit.
inline SearchResult search_good_point(const TopPoly& f, const RSCode& code, const SearchOptions& opt = {}) {
    detail::check_code_poly(f, code);
    const std::size_t r = f.k + 1;
    const auto units = code.field()->units();
    const std::size_t n = units.size();
    if (r > n) throw error(errc::invalid_dimensions, "k+1 exceeds q-1: no point with distinct nonzero coordinates");

    const HfEvaluator hf(f);
    const Field& F = *code.field();
    std::atomic<std::uint64_t> evals{0};
    std::atomic<std::size_t> best_first{n};  // smallest first index with a hit
    std::atomic<bool> out_of_budget{false};
    std::vector<std::optional<std::vector<std::size_t>>> hits(n);

    auto work_on_first = [&](std::size_t first) {
        std::vector<std::size_t> idx(r);
        for (std::size_t t = 0; t < r; ++t) idx[t] = first + t;
        if (idx.back() >= n) return;
        std::vector<Felt> x(r), e;
        do {
            if (best_first.load(std::memory_order_relaxed) < first) return;
            if (evals.fetch_add(1, std::memory_order_relaxed) >= opt.budget) {
                out_of_budget = true;
                return;
            }
            for (std::size_t t = 0; t < r; ++t) x[t] = units[idx[t]];
            detail::elementary_values(F, x, f.d, e);
            if (hf.value_from_elementary(e).rep == 0) {
                hits[first] = idx;
                std::size_t cur = best_first.load();
                while (first < cur && !best_first.compare_exchange_weak(cur, first)) {
                }
                return;
            }
        } while (detail::next_combination_tail(idx, n));
    };

    const unsigned t = std::max(1u, opt.threads);
    if (t == 1) {
        for (std::size_t first = 0; first + r <= n; ++first) {
            work_on_first(first);
            if (hits[first] || out_of_budget) break;
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < t; ++i)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t first = next.fetch_add(1);
                    if (first + r > n || first > best_first.load() || out_of_budget) return;
                    work_on_first(first);
                }
            });
        for (auto& th : pool) th.join();
    }

    SearchResult res;
    res.evaluations = std::min<std::uint64_t>(evals.load(), opt.budget);
    const std::size_t bf = best_first.load();
    if (bf < n) {
        std::vector<Felt> x(r);
        for (std::size_t i = 0; i < r; ++i) x[i] = units[(*hits[bf])[i]];
        res.status = SearchStatus::found;
        res.cert = certificate_from_point(f, code, x);
    } else {
        res.status = out_of_budget ? SearchStatus::budget_exhausted : SearchStatus::no_witness;
    }
    return res;
}

// ---------------------------------------------------------------------------

struct ASWitness {
    std::vector<Felt> b_list;
    UPoly g;         // prod (T^p - T - b_i)
    UPoly h;         // g - T^{k+d}, degree <= k-1
    UPoly codeword;  // -h: its word agrees with that of T^{k+d} on the roots of g
    std::vector<Felt> roots;
    std::size_t root_count = 0;
    std::size_t agreements = 0;
    std::size_t distance = 0;  // n - agreements, an upper bound on d(w, C)
    std::size_t n = 0;
    std::size_t k = 0;
};

inline ASWitness artin_schreier_witness(const FieldPtr& field, std::size_t k, std::size_t d) {
    const Field& F = *field;
    const std::size_t p = F.p(), q = F.q();
    if (!(p > d + 1)) throw error(errc::hypothesis_violated, "p>d+1");
    if ((k + d) % p != 0) throw error(errc::hypothesis_violated, "p|(k+d)");
    if (!(q > k + d)) throw error(errc::hypothesis_violated, "q>k+d");
    if (!(k > d)) throw error(errc::hypothesis_violated, "k>d");
    const std::size_t l = (k + d) / p;

    ASWitness as;
    for (std::uint32_t a = 1; a < q && as.b_list.size() < l; ++a)
        if (F.trace(Felt{a}).rep == 0) as.b_list.push_back(Felt{a});
    if (as.b_list.size() < l)
        throw error(errc::insufficient_trace_zero_elements,
                    "need " + std::to_string(l) + " nonzero trace-zero elements, found " + std::to_string(as.b_list.size()));

    UPoly g = UPoly(field, {F.one()});
    for (Felt b : as.b_list) {
        std::vector<Felt> c(p + 1, F.zero());
        c[p] = F.one();
        c[1] = F.neg(F.one());
        c[0] = F.neg(b);
        g = g * UPoly(field, std::move(c));
    }
    as.g = g;
    as.roots = uni_distinct_roots(g);
    as.root_count = as.roots.size();
    if (as.root_count != p * l) throw error(errc::not_a_witness, "g does not split into p*l distinct roots");
    if (!as.roots.empty() && as.roots.front().rep == 0) throw error(errc::not_a_witness, "g vanishes at 0");

    as.h = g - UPoly::monomial(field, k + d, F.one());
    if (as.h.degree() > static_cast<long>(k) - 1) throw error(errc::not_a_witness, "deg(g - T^{k+d}) >= k");
    as.codeword = -as.h;

    const RSCode code(field, k);
    const Word w = word_from_poly(code, UPoly::monomial(field, k + d, F.one()));
    as.agreements = agreements(w, word_from_poly(code, as.codeword));
    as.n = code.n();
    as.k = k;
    as.distance = as.n - as.agreements;
    return as;
}

// ---------------------------------------------------------------------------

struct ScanPoint {
    std::vector<Felt> point;
    std::size_t distinct = 0;
};

struct LinearFamily {
    std::vector<std::vector<std::size_t>> blocks;  // partition of coordinate indices
};

struct ScanResult {
    std::vector<ScanPoint> points;
    std::size_t max_distinct = 0;
    // L_I for partitions I into d-1 blocks whose rational points all lie in the list
    std::vector<LinearFamily> full_families;
    bool non_monomial_family = false;
};

inline constexpr std::uint64_t exhaustive_limit = 100'000'000;

namespace detail {

inline std::size_t count_distinct(std::span<const Felt> x) {
    std::vector<Felt> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

inline void check_exhaustive(const Field& F, std::size_t vars) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < vars; ++i) {
        total *= F.q();
        if (total > exhaustive_limit) throw error(errc::too_large_for_exhaustive, "q^{k+1} exceeds 10^8");
    }
}

// Visit every point of F_q^vars in lexicographic order (first coordinate
// slowest), split by first coordinate across threads; results merged in order.
template <class Pred>
std::vector<ScanPoint> scan_all(const Field& F, std::size_t vars, unsigned threads, Pred pred) {
    const std::uint32_t q = F.q();
    std::vector<std::vector<ScanPoint>> per_first(q);
    std::atomic<std::uint32_t> next{0};
    auto worker = [&] {
        std::vector<Felt> x(vars);
        while (true) {
            const std::uint32_t first = next.fetch_add(1);
            if (first >= q) return;
            std::fill(x.begin(), x.end(), Felt{0});
            x[0] = Felt{first};
            while (true) {
                if (pred(std::span<const Felt>(x))) per_first[first].push_back({x, count_distinct(x)});
                bool done = true;
                for (std::size_t j = vars; j-- > 1;) {
                    if (++x[j].rep < q) { done = false; break; }
                    x[j].rep = 0;
                }
                if (done) break;
            }
        }
    };
    const unsigned t = std::max(1u, std::min<unsigned>(threads, q));
    if (t == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<ScanPoint> out;
    for (auto& v : per_first)
        for (auto& p : v) out.push_back(std::move(p));
    return out;
}

// All set partitions of {0..n-1} into exactly b nonempty blocks.
inline void set_partitions(std::size_t n, std::size_t b, std::vector<std::vector<std::vector<std::size_t>>>& out) {
    std::vector<std::size_t> label(n, 0);
    auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            if (used != b) return;
            std::vector<std::vector<std::size_t>> blocks(b);
            for (std::size_t t = 0; t < n; ++t) blocks[label[t]].push_back(t);
            out.push_back(std::move(blocks));
            return;
        }
        if (n - i < b - used) return;
        for (std::size_t l = 0; l < used; ++l) {
            label[i] = l;
            self(self, i + 1, used);
        }
        if (used < b) {
            label[i] = used;
            self(self, i + 1, used + 1);
        }
    };
    if (b >= 1 && b <= n) rec(rec, 0, 0);
}

inline void find_full_families(const Field& F, std::size_t vars, std::size_t blocks_wanted, ScanResult& res) {
    if (blocks_wanted == 0 || blocks_wanted > vars) return;
    std::set<std::vector<Felt>> pts;
    for (const auto& p : res.points) pts.insert(p.point);
    std::vector<std::vector<std::vector<std::size_t>>> parts;
    set_partitions(vars, blocks_wanted, parts);
    for (const auto& blocks : parts) {
        std::vector<std::uint32_t> val(blocks_wanted, 0);
        bool full = true;
        std::vector<Felt> x(vars);
        while (full) {
            for (std::size_t b = 0; b < blocks_wanted; ++b)
                for (auto idx : blocks[b]) x[idx] = Felt{val[b]};
            if (!pts.count(x)) { full = false; break; }
            std::size_t j = 0;
            while (j < blocks_wanted && ++val[j] == F.q()) val[j++] = 0;
            if (j == blocks_wanted) break;
        }
        if (full) res.full_families.push_back({blocks});
    }
}

inline void finish_scan(ScanResult& res) {
    for (const auto& p : res.points) res.max_distinct = std::max(res.max_distinct, p.distinct);
}

}  // namespace detail

/// All x in F_q^{k+1} with H_f(x) = 0 and grad H_f(x) = 0.
inline ScanResult scan_rational_singular_points(const TopPoly& f, const RSCode& code, unsigned threads = 1) {
    detail::check_code_poly(f, code);
    const Field& F = *code.field();
    const std::size_t vars = f.k + 1;
    detail::check_exhaustive(F, vars);
    const HfEvaluator hf(f);
    ScanResult res;
    res.points = detail::scan_all(F, vars, threads, [&](std::span<const Felt> x) {
        std::vector<Felt> e;
        detail::elementary_values(F, x, f.d, e);
        if (hf.value_from_elementary(e).rep != 0) return false;
        for (Felt g : hf.gradient(x))
            if (g.rep != 0) return false;
        return true;
    });
    detail::finish_scan(res);
    if (f.d >= 2) detail::find_full_families(F, vars, f.d - 1, res);
    res.non_monomial_family = !res.full_families.empty() && !f.is_monomial();
    return res;
}

/// Affine-cone representatives of the singular points at infinity:
/// H_d(x) = 0, f_{d-1} H_{d-1}(x) = 0, dH_d/dX_i(x) = 0 for all i.
inline ScanResult scan_infinity_singular(const TopPoly& f, const RSCode& code, unsigned threads = 1) {
    detail::check_code_poly(f, code);
    const Field& F = *code.field();
    const std::size_t vars = f.k + 1;
    detail::check_exhaustive(F, vars);
    ScanResult res;
    if (f.d == 0) return res;
    const HfEvaluator hd(TopPoly::monomial(code.field(), f.k, f.d));
    const HfEvaluator hd1(TopPoly::monomial(code.field(), f.k, f.d - 1));
    const bool use_lower = f.lows[f.d - 1].rep != 0;
    res.points = detail::scan_all(F, vars, threads, [&](std::span<const Felt> x) {
        if (hd.value(x).rep != 0) return false;
        if (use_lower && hd1.value(x).rep != 0) return false;
        for (Felt g : hd.gradient(x))
            if (g.rep != 0) return false;
        return true;
    });
    detail::finish_scan(res);
    return res;
}

/// Point counts on V_f used by the bound comparisons: all rational zeros, those
/// with a zero coordinate, those with two equal coordinates, and the good ones.
struct PointCounts {
    std::uint64_t total = 0;
    std::uint64_t with_zero = 0;
    std::uint64_t with_repeat = 0;
    std::uint64_t good = 0;
};

inline PointCounts count_points(const TopPoly& f) {
    const Field& F = *f.field;
    const std::size_t vars = f.k + 1;
    detail::check_exhaustive(F, vars);
    const HfEvaluator hf(f);
    PointCounts pc;
    std::vector<Felt> x(vars, Felt{0}), e;
    const std::uint32_t q = F.q();
    while (true) {
        detail::elementary_values(F, x, f.d, e);
        if (hf.value_from_elementary(e).rep == 0) {
            ++pc.total;
            bool zero = false;
            for (Felt v : x) zero |= (v.rep == 0);
            const bool repeat = detail::count_distinct(x) < vars;
            pc.with_zero += zero;
            pc.with_repeat += repeat;
            pc.good += (!zero && !repeat);
        }
        std::size_t j = 0;
        while (j < vars && ++x[j].rep == q) x[j++].rep = 0;
        if (j == vars) break;
    }
    return pc;
}

}  // namespace deephole
