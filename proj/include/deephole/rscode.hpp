#pragma once

// Standard Reed-Solomon code C(F_q^*, k) and brute-force distance computations.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "gf.hpp"
#include "poly.hpp"
#include "symmetric.hpp"

namespace deephole {

struct Word {
    std::vector<Felt> symbols;

    friend bool operator==(const Word&, const Word&) = default;
};

class RSCode {
public:
    RSCode(FieldPtr field, std::size_t k) : field_(std::move(field)), k_(k), order_(field_->units()) {
        if (k_ < 1 || k_ > order_.size())
            throw error(errc::invalid_dimensions, "need 1 <= k <= q-1");
    }

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t n() const noexcept { return order_.size(); }
    const std::vector<Felt>& eval_order() const noexcept { return order_; }
    std::size_t min_distance() const noexcept { return n() - k_ + 1; }
    std::size_t covering_radius() const noexcept { return n() - k_; }

    /// Number of codewords, q^k, saturating at UINT64_MAX.
    std::uint64_t size() const noexcept {
        std::uint64_t s = 1;
        for (std::size_t i = 0; i < k_; ++i) {
            if (s > UINT64_MAX / field_->q()) return UINT64_MAX;
            s *= field_->q();
        }
        return s;
    }

private:
    FieldPtr field_;
    std::size_t k_;
    std::vector<Felt> order_;
};

inline Word word_from_poly(const RSCode& code, const UPoly& f) {
    require_same_field(code.field(), f.field());
    if (f.degree() > static_cast<long>(code.n()) - 1)
        throw error(errc::degree_too_high, "degree exceeds n-1");
    Word w;
    w.symbols.reserve(code.n());
    for (Felt x : code.eval_order()) w.symbols.push_back(f.eval(x));
    return w;
}

inline Word word_from_top(const RSCode& code, const TopPoly& f) { return word_from_poly(code, full_poly(f)); }

inline std::size_t agreements(const Word& a, const Word& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.symbols.size(); ++i) c += (a.symbols[i] == b.symbols[i]);
    return c;
}

inline constexpr std::uint64_t brute_force_limit = 10'000'000;

/// Largest agreement between w and any codeword, by enumeration of all q^k
/// messages. For each choice of (a_1..a_{k-1}) the best a_0 is the most frequent
/// value of w - sum_{j>=1} a_j x^j, so only q^{k-1} histograms are built.
/// Stops as soon as the running maximum reaches stop_at.
inline std::size_t max_agreement(const RSCode& code, const Word& w, std::size_t stop_at = SIZE_MAX,
                                 unsigned threads = 1) {
    if (w.symbols.size() != code.n()) throw error(errc::arity_mismatch, "word length differs from n");
    if (code.size() > brute_force_limit)
        throw error(errc::too_large_for_brute_force, "q^k exceeds 10^7");
    const Field& F = *code.field();
    const std::size_t n = code.n(), k = code.k();
    const std::uint32_t q = F.q();
    const auto& xs = code.eval_order();

    // pw[j][i] = x_i^j; step[j*s+t][i] = -(alpha^t x_i^j) for digit t of a_j,
    // alpha^t having rep p^t. Each digit wraps after p steps, which is 0 in F_q.
    const std::uint32_t p = F.p(), s = F.s();
    std::vector<std::vector<Felt>> pw(k, std::vector<Felt>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Felt v = F.one();
        for (std::size_t j = 0; j < k; ++j) {
            pw[j][i] = v;
            v = F.mul(v, xs[i]);
        }
    }
    const std::size_t free_digits = k >= 2 ? (k - 2) * s : 0;  // digits of a_1 .. a_{k-2}
    std::vector<std::vector<Felt>> step(free_digits, std::vector<Felt>(n));
    for (std::size_t j = 1; j + 1 < k; ++j) {
        std::uint32_t basis = 1;
        for (std::uint32_t t = 0; t < s; ++t, basis *= p)
            for (std::size_t i = 0; i < n; ++i) step[(j - 1) * s + t][i] = F.neg(F.mul(Felt{basis}, pw[j][i]));
    }

    std::atomic<std::size_t> best{0};
    auto raise = [&](std::size_t v) {
        std::size_t cur = best.load(std::memory_order_relaxed);
        while (v > cur && !best.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
        }
    };

    // a_{k-1} runs over reps [lo, hi); a_1 .. a_{k-2} by a base-p odometer on their digits
    auto run = [&](std::uint32_t lo, std::uint32_t hi) {
        std::vector<std::uint32_t> hist(q, 0), cnt(free_digits);
        std::vector<Felt> r(n);
        std::size_t local = 0;
        for (std::uint32_t top = lo; top < hi; ++top) {
            for (std::size_t i = 0; i < n; ++i)
                r[i] = k >= 2 ? F.sub(w.symbols[i], F.mul(Felt{top}, pw[k - 1][i])) : w.symbols[i];
            std::fill(cnt.begin(), cnt.end(), 0u);
            while (true) {
                for (std::size_t i = 0; i < n; ++i) ++hist[r[i].rep];
                for (std::size_t i = 0; i < n; ++i) {
                    local = std::max<std::size_t>(local, hist[r[i].rep]);
                    hist[r[i].rep] = 0;
                }
                if (local >= stop_at || best.load(std::memory_order_relaxed) >= stop_at) {
                    raise(local);
                    return;
                }
                std::size_t pos = 0;
                for (; pos < free_digits; ++pos) {
                    for (std::size_t i = 0; i < n; ++i) r[i] = F.add(r[i], step[pos][i]);
                    if (++cnt[pos] < p) break;
                    cnt[pos] = 0;
                }
                if (pos == free_digits) break;
            }
            if (k == 1) break;
        }
        raise(local);
    };

    if (k == 1 || threads <= 1) {
        run(0, q);
    } else {
        const unsigned t = std::min<unsigned>(threads, q);
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < t; ++i) {
            const auto lo = static_cast<std::uint32_t>(std::uint64_t{q} * i / t);
            const auto hi = static_cast<std::uint32_t>(std::uint64_t{q} * (i + 1) / t);
            pool.emplace_back(run, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return best.load();
}

inline std::size_t distance_to_code(const RSCode& code, const Word& w, unsigned threads = 1) {
    return code.n() - max_agreement(code, w, code.n(), threads);
}

inline bool is_deep_hole(const RSCode& code, const Word& w, unsigned threads = 1) {
    // a codeword agreeing in k+1 places already rules it out
    return max_agreement(code, w, code.k() + 1, threads) <= code.k();
}

/// Monic top part of f: drop monomials of degree < k, divide by the leading
/// coefficient. Requires k <= deg f <= n-1.
inline TopPoly canonical_top(const RSCode& code, const UPoly& f) {
    require_same_field(code.field(), f.field());
    const long deg = f.degree();
    if (deg < static_cast<long>(code.k()) || deg > static_cast<long>(code.n()) - 1)
        throw error(errc::degree_out_of_range, "need k <= deg f <= n-1");
    const Field& F = *code.field();
    const Felt inv_lead = F.inv(f.leading());
    const std::size_t k = code.k();
    const auto d = static_cast<std::size_t>(deg) - k;
    std::vector<Felt> lows(d);
    for (std::size_t j = 0; j < d; ++j) lows[j] = F.mul(f.coeff(k + j), inv_lead);
    return TopPoly(code.field(), k, d, std::move(lows));
}

}  // namespace deephole
