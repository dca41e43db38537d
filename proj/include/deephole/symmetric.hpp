#pragma once

// H_d and H_f in the elementary-symmetric basis Y_j = Pi_j, fast pointwise
// evaluation of H_f and its gradient, and the Jacobian identity checks.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gf.hpp"
#include "poly.hpp"

namespace deephole {

/// Polynomial in Y_1..Y_d; a term key (i_1,..,i_d) stands for prod Y_j^{i_j}.
class SymPoly {
public:
    using Key = std::vector<std::uint8_t>;
    using Terms = std::map<Key, Felt>;

    SymPoly() = default;
    SymPoly(FieldPtr field, std::size_t d) : field_(std::move(field)), d_(d) {}

    static SymPoly constant(FieldPtr field, std::size_t d, Felt c) {
        SymPoly out(std::move(field), d);
        out.add_term(Key(d, 0), c);
        return out;
    }

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t d() const noexcept { return d_; }
    const Terms& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Felt coeff(const Key& k) const noexcept {
        auto it = terms_.find(k);
        return it == terms_.end() ? Felt{0} : it->second;
    }

    static unsigned weight(const Key& k) noexcept {
        unsigned w = 0;
        for (std::size_t j = 0; j < k.size(); ++j) w += static_cast<unsigned>(j + 1) * k[j];
        return w;
    }

    void add_term(const Key& k, Felt c) {
        if (k.size() != d_) throw error(errc::arity_mismatch, "term key length differs from d");
        if (weight(k) > d_) throw error(errc::degree_out_of_range, "term weight exceeds d");
        if (c.rep == 0) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second = field_->add(it->second, c);
            if (it->second.rep == 0) terms_.erase(it);
        }
    }

    /// Multiply by Y_j (1-based). Terms whose weight would exceed d are rejected.
    SymPoly times_y(std::size_t j) const {
        if (j == 0 || j > d_) throw error(errc::index_out_of_range, "Y index");
        SymPoly out(field_, d_);
        for (const auto& [k, c] : terms_) {
            Key nk = k;
            ++nk[j - 1];
            out.add_term(nk, c);
        }
        return out;
    }

    SymPoly scale(Felt s) const {
        SymPoly out(field_, d_);
        for (const auto& [k, c] : terms_) out.add_term(k, field_->mul(c, s));
        return out;
    }

    /// d/dY_j (1-based).
    SymPoly partial(std::size_t j) const {
        if (j == 0 || j > d_) throw error(errc::index_out_of_range, "Y index");
        SymPoly out(field_, d_);
        for (const auto& [k, c] : terms_) {
            if (k[j - 1] == 0) continue;
            Key nk = k;
            --nk[j - 1];
            out.add_term(nk, field_->mul(c, field_->from_integer(k[j - 1])));
        }
        return out;
    }

    Felt eval(std::span<const Felt> y) const {
        if (y.size() != d_) throw error(errc::arity_mismatch, "expected " + std::to_string(d_) + " values");
        const Field& F = *field_;
        Felt acc = F.zero();
        for (const auto& [k, c] : terms_) {
            Felt t = c;
            for (std::size_t j = 0; j < d_ && t.rep != 0; ++j)
                if (k[j]) t = F.mul(t, F.pow(y[j], k[j]));
            acc = F.add(acc, t);
        }
        return acc;
    }

    friend SymPoly operator+(const SymPoly& a, const SymPoly& b) {
        require_same_field(a.field_, b.field_);
        if (a.d_ != b.d_) throw error(errc::arity_mismatch, "weight bounds differ");
        SymPoly out = a;
        for (const auto& [k, c] : b.terms_) out.add_term(k, c);
        return out;
    }

    friend SymPoly operator-(const SymPoly& a, const SymPoly& b) { return a + b.scale(b.field_->neg(b.field_->one())); }

    friend bool operator==(const SymPoly& a, const SymPoly& b) {
        return a.d_ == b.d_ && same_field(a.field_, b.field_) && a.terms_ == b.terms_;
    }

    /// "(i_1,...,i_d)"
    static std::string key_string(const Key& k) {
        std::string s = "(";
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (j) s += ",";
            s += std::to_string(k[j]);
        }
        return s + ")";
    }

private:
    FieldPtr field_;
    std::size_t d_ = 0;
    Terms terms_;
};

namespace detail {

// H_0..H_top as SymPolys with key length width, by the alternating recursion.
inline std::vector<SymPoly> h_recursive_upto(std::size_t top, std::size_t width, const FieldPtr& field) {
    const Field& F = *field;
    std::vector<SymPoly> h;
    h.reserve(top + 1);
    h.push_back(SymPoly::constant(field, width, F.one()));
    for (std::size_t m = 1; m <= top; ++m) {
        SymPoly acc(field, width);
        for (std::size_t j = 1; j <= m; ++j) {
            SymPoly t = h[m - j].times_y(j);
            acc = (j % 2 == 1) ? acc + t : acc - t;
        }
        h.push_back(std::move(acc));
    }
    return h;
}

}  // namespace detail

/// H_d from H_m = Y_1 H_{m-1} - Y_2 H_{m-2} + ... + (-1)^{m-1} Y_m H_0, H_0 = 1.
inline SymPoly h_basis_recursive(std::size_t d, const FieldPtr& field) {
    return detail::h_recursive_upto(d, d, field).back();
}

/// H_d by the closed form: sum over i_1 + 2 i_2 + ... + d i_d = d of
/// (-1)^Delta (i_1+...+i_d)! / (i_1! ... i_d!) Y^i, Delta = sum of i_j over even j.
/// The multinomial is formed over Z and only then reduced mod p.
inline SymPoly h_basis_explicit(std::size_t d, const FieldPtr& field) {
    using boost::multiprecision::cpp_int;
    const Field& F = *field;
    SymPoly out(field, d);
    if (d == 0) {
        out.add_term({}, F.one());
        return out;
    }
    std::vector<cpp_int> fact(d + 1, 1);
    for (std::size_t i = 1; i <= d; ++i) fact[i] = fact[i - 1] * static_cast<unsigned>(i);
    SymPoly::Key key(d, 0);
    // depth-first over i_d, i_{d-1}, ..., i_1 with remaining weight
    auto rec = [&](auto&& self, std::size_t j, std::size_t remaining) -> void {
        if (j == 0) {
            if (remaining != 0) return;
            unsigned total = 0, delta = 0;
            cpp_int denom = 1;
            for (std::size_t t = 0; t < d; ++t) {
                total += key[t];
                denom *= fact[key[t]];
                if ((t + 1) % 2 == 0) delta += key[t];
            }
            const cpp_int multinomial = fact[total] / denom;
            const auto residue = static_cast<std::uint32_t>(multinomial % F.p());
            Felt c = F.from_integer(residue);
            if (delta % 2 == 1) c = F.neg(c);
            out.add_term(key, c);
            return;
        }
        for (std::size_t i = 0; i * j <= remaining; ++i) {
            key[j - 1] = static_cast<std::uint8_t>(i);
            self(self, j - 1, remaining - i * j);
        }
        key[j - 1] = 0;
    };
    rec(rec, d, d);
    return out;
}

/// H_0..H_d, all with key length d. Cached per (d, field); safe to call concurrently.
inline const std::vector<SymPoly>& h_family(std::size_t d, const FieldPtr& field) {
    using CacheKey = std::tuple<std::size_t, std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>;
    static std::mutex mu;
    static std::map<CacheKey, std::vector<SymPoly>> cache;
    CacheKey key{d, field->p(), field->s(), field->modulus()};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, detail::h_recursive_upto(d, d, field)).first;
    return it->second;
}

/// f = T^{k+d} + f_{d-1} T^{k+d-1} + ... + f_0 T^k.
struct TopPoly {
    FieldPtr field;
    std::size_t k = 0;
    std::size_t d = 0;
    std::vector<Felt> lows;  // f_0 .. f_{d-1}

    TopPoly() = default;
    TopPoly(FieldPtr f, std::size_t k_, std::size_t d_, std::vector<Felt> lows_)
        : field(std::move(f)), k(k_), d(d_), lows(std::move(lows_)) {
        if (lows.size() != d) throw error(errc::arity_mismatch,
            "expected " + std::to_string(d) + " low coefficients, got " + std::to_string(lows.size()));
        for (auto c : lows)
            if (!field->contains(c)) throw error(errc::field_mismatch, "coefficient outside field");
    }

    static TopPoly monomial(FieldPtr f, std::size_t k, std::size_t d) {
        std::vector<Felt> z(d, Felt{0});
        return TopPoly(std::move(f), k, d, std::move(z));
    }

    bool is_monomial() const noexcept {
        for (auto c : lows)
            if (c.rep) return false;
        return true;
    }

    friend bool operator==(const TopPoly& a, const TopPoly& b) {
        return a.k == b.k && a.d == b.d && a.lows == b.lows && same_field(a.field, b.field);
    }
};

/// The full univariate polynomial represented by a TopPoly.
inline UPoly full_poly(const TopPoly& f) {
    std::vector<Felt> c(f.k + f.d + 1, Felt{0});
    for (std::size_t j = 0; j < f.d; ++j) c[f.k + j] = f.lows[j];
    c[f.k + f.d] = f.field->one();
    return UPoly(f.field, std::move(c));
}

/// G_f = H_d + f_{d-1} H_{d-1} + ... + f_1 H_1 + f_0.
inline SymPoly g_f(const TopPoly& f) {
    const auto& h = h_family(f.d, f.field);
    SymPoly out = h[f.d];
    for (std::size_t j = 0; j < f.d; ++j) out = out + h[j].scale(f.lows[j]);
    return out;
}

namespace detail {

// Substitute Y_j -> Pi_j(X_1..X_nvars); Pi_j is taken as 0 when j > nvars.
inline MVPoly expand_sym(const SymPoly& G, std::size_t nvars, std::size_t cap) {
    const auto& field = G.field();
    std::vector<MVPoly> pis;
    for (std::size_t j = 1; j <= G.d(); ++j)
        pis.push_back(j <= nvars ? elementary_symmetric(field, j, nvars) : MVPoly(field, nvars));
    std::map<std::pair<std::size_t, unsigned>, MVPoly> powers;
    auto power = [&](std::size_t j, unsigned e) -> const MVPoly& {
        auto key = std::make_pair(j, e);
        auto it = powers.find(key);
        if (it == powers.end()) it = powers.emplace(key, pis[j].pow(e)).first;
        return it->second;
    };
    MVPoly out(field, nvars);
    for (const auto& [key, c] : G.terms()) {
        MVPoly t = MVPoly::constant(field, nvars, c);
        for (std::size_t j = 0; j < key.size() && !t.is_zero(); ++j) {
            if (key[j] == 0) continue;
            t = t * power(j, key[j]);
            if (t.term_count() > cap)
                throw error(errc::too_many_variables, "expansion exceeds " + std::to_string(cap) + " terms");
        }
        out = out + t;
        if (out.term_count() > cap)
            throw error(errc::too_many_variables, "expansion exceeds " + std::to_string(cap) + " terms");
    }
    return out;
}

// e_0..e_top of x, with e_m = 0 for m > |x|.
inline void elementary_values(const Field& F, std::span<const Felt> x, std::size_t top, std::vector<Felt>& e) {
    e.assign(top + 1, F.zero());
    e[0] = F.one();
    std::size_t filled = 0;
    for (Felt xi : x) {
        filled = std::min(filled + 1, top);
        for (std::size_t m = filled; m >= 1; --m) e[m] = F.add(e[m], F.mul(e[m - 1], xi));
    }
}

}  // namespace detail

inline constexpr std::size_t default_expansion_cap = 200000;

/// G as a polynomial in X_1..X_nvars (test oracle; the term cap guards blowup).
inline MVPoly expand_to_vars(const SymPoly& G, std::size_t nvars, std::size_t cap = default_expansion_cap) {
    if (nvars < G.d()) throw error(errc::invalid_dimensions,
        "need at least " + std::to_string(G.d()) + " variables");
    return detail::expand_sym(G, nvars, cap);
}

/// Pointwise H_f and its gradient for one fixed f. Reusable across threads.
class HfEvaluator {
public:
    explicit HfEvaluator(TopPoly f) : f_(std::move(f)), G_(g_f(f_)) {
        for (std::size_t j = 1; j <= f_.d; ++j) dG_.push_back(G_.partial(j));
    }

    const TopPoly& poly() const noexcept { return f_; }
    const SymPoly& g() const noexcept { return G_; }

    /// Coefficient of T^k in f mod prod(T - x_i), by division that only tracks
    /// degrees k..k+d.
    Felt value(std::span<const Felt> x) const {
        check(x);
        std::vector<Felt> e;
        detail::elementary_values(*f_.field, x, f_.d, e);
        return value_from_elementary(e);
    }

    /// Same, with e_0..e_d of the point already known.
    Felt value_from_elementary(std::span<const Felt> e) const {
        const Field& F = *f_.field;
        const std::size_t d = f_.d;
        Felt c[64];
        if (d >= 64) throw error(errc::cap_exceeded, "d too large for pointwise evaluation");
        for (std::size_t j = 0; j < d; ++j) c[j] = f_.lows[j];
        c[d] = F.one();
        for (std::size_t t = d; t >= 1; --t) {
            const Felt lead = c[t];
            if (lead.rep == 0) continue;
            for (std::size_t m = 1; m <= t; ++m) {
                const Felt term = F.mul(lead, e[m]);
                c[t - m] = (m % 2 == 1) ? F.add(c[t - m], term) : F.sub(c[t - m], term);
            }
        }
        return c[0];
    }

    /// Chain rule: grad H_f(x) = grad G_f(Pi(x)) * (dPi_i/dX_j)(x), i = 1..d.
    std::vector<Felt> gradient(std::span<const Felt> x) const {
        check(x);
        const Field& F = *f_.field;
        const std::size_t d = f_.d;
        std::vector<Felt> e;
        detail::elementary_values(F, x, d, e);
        std::vector<Felt> y(e.begin() + 1, e.end());
        std::vector<Felt> dg(d);
        for (std::size_t j = 0; j < d; ++j) dg[j] = dG_[j].eval(y);
        std::vector<Felt> out(x.size(), F.zero());
        for (std::size_t i = 0; i < x.size(); ++i) {
            // a_1 = 1, a_j = e_{j-1} - x_i a_{j-1}
            Felt a = F.one();
            Felt acc = F.zero();
            for (std::size_t j = 1; j <= d; ++j) {
                if (j > 1) a = F.sub(e[j - 1], F.mul(x[i], a));
                acc = F.add(acc, F.mul(dg[j - 1], a));
            }
            out[i] = acc;
        }
        return out;
    }

private:
    void check(std::span<const Felt> x) const {
        if (x.size() != f_.k + 1) throw error(errc::arity_mismatch,
            "expected " + std::to_string(f_.k + 1) + " coordinates, got " + std::to_string(x.size()));
    }

    TopPoly f_;
    SymPoly G_;
    std::vector<SymPoly> dG_;
};

inline Felt eval_hf(const TopPoly& f, std::span<const Felt> x) { return HfEvaluator(f).value(x); }

inline std::vector<Felt> grad_hf(const TopPoly& f, std::span<const Felt> x) { return HfEvaluator(f).gradient(x); }

/// Literal route: reduce the full polynomial modulo prod(T - x_i) and read off T^k.
inline Felt eval_hf_by_division(const TopPoly& f, std::span<const Felt> x) {
    if (x.size() != f.k + 1) throw error(errc::arity_mismatch, "point length must be k+1");
    const UPoly Q = UPoly::from_roots(f.field, x);
    return uni_rem(full_poly(f), Q).coeff(f.k);
}

/// Gradient from dH_j/dX_i = H_{j-1} + H_{j-2} X_i + ... + X_i^{j-1}.
inline std::vector<Felt> grad_hf_by_lemma(const TopPoly& f, std::span<const Felt> x) {
    if (x.size() != f.k + 1) throw error(errc::arity_mismatch, "point length must be k+1");
    const Field& F = *f.field;
    const std::size_t d = f.d;
    std::vector<Felt> e;
    detail::elementary_values(F, x, d, e);
    std::vector<Felt> h(d + 1, F.zero());
    h[0] = F.one();
    for (std::size_t m = 1; m <= d; ++m) {
        Felt acc = F.zero();
        for (std::size_t j = 1; j <= m; ++j) {
            const Felt t = F.mul(e[j], h[m - j]);
            acc = (j % 2 == 1) ? F.add(acc, t) : F.sub(acc, t);
        }
        h[m] = acc;
    }
    std::vector<Felt> coef(d + 1);
    for (std::size_t j = 0; j < d; ++j) coef[j] = f.lows[j];
    coef[d] = F.one();
    std::vector<Felt> out(x.size(), F.zero());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Felt acc = F.zero();
        for (std::size_t j = 1; j <= d; ++j) {
            Felt dj = F.zero(), xp = F.one();
            for (std::size_t m = 0; m < j; ++m) {
                dj = F.add(dj, F.mul(h[j - 1 - m], xp));
                xp = F.mul(xp, x[i]);
            }
            acc = F.add(acc, F.mul(coef[j], dj));
        }
        out[i] = acc;
    }
    return out;
}

struct JacobianReport {
    std::size_t kplus1 = 0;
    bool jacobian_factorization = false;    // (dPi_i/dX_j) = B A
    bool determinant_formula = false;       // det = (-1)^{k(k+1)/2} prod_{i<j} (X_j - X_i)
    bool h_jacobian_factorization = false;  // (dH_i/dX_j) = L A
    bool b_inverse = false;                 // B B^{-1} = I
    bool derivative_lemma = false;          // dH_j/dX_i formula, j <= 6
    // det = (-1)^{k(k+1)/2} prod_{i<j} (X_i - X_j); differs from the line above
    // by (-1)^{k(k+1)/2}, so it fails in odd characteristic when that is odd.
    bool alternate_sign_convention = false;

    bool all_required() const noexcept {
        return jacobian_factorization && determinant_formula && h_jacobian_factorization && b_inverse &&
               derivative_lemma;
    }
};

inline constexpr std::size_t lemma_max_j = 6;

/// Symbolic checks of the Jacobian identities in kplus1 variables, 2 <= kplus1 <= 6.
inline JacobianReport jacobian_identities(std::size_t kplus1, const FieldPtr& field) {
    if (kplus1 < 2 || kplus1 > 6)
        throw error(errc::cap_exceeded, "symbolic checks are limited to 2 <= k+1 <= 6");
    const std::size_t n = kplus1;
    const Field& F = *field;
    const Felt minus_one = F.neg(F.one());
    const MVPoly zero(field, n);
    const MVPoly one = MVPoly::constant(field, n, F.one());

    std::vector<MVPoly> X, pi;
    for (std::size_t i = 0; i < n; ++i) X.push_back(MVPoly::variable(field, n, i));
    for (std::size_t i = 0; i <= n; ++i) pi.push_back(elementary_symmetric(field, i, n));

    const std::size_t top = std::max(n, lemma_max_j);
    const auto hsym = detail::h_recursive_upto(top, top, field);
    std::vector<MVPoly> H;
    for (const auto& s : hsym) H.push_back(detail::expand_sym(s, n, default_expansion_cap));

    auto sgn = [&](std::size_t l) { return l % 2 ? minus_one : F.one(); };
    MVMatrix J(n, std::vector<MVPoly>(n, zero)), A = J, B = J, Binv = J, L = J, HJ = J, I = J;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            J[i][j] = pi[i + 1].partial(j);
            HJ[i][j] = H[i + 1].partial(j);
            A[i][j] = X[j].pow(static_cast<unsigned>(i));
            if (j <= i) {
                B[i][j] = pi[i - j].scale(sgn(j));
                Binv[i][j] = H[i - j].scale(sgn(j));
                L[i][j] = H[i - j];
            }
        }
        I[i][i] = one;
    }

    JacobianReport rep;
    rep.kplus1 = n;
    rep.jacobian_factorization = (mv_matmul(B, A) == J);
    rep.h_jacobian_factorization = (mv_matmul(L, A) == HJ);
    rep.b_inverse = (mv_matmul(B, Binv) == I);

    const MVPoly det = mv_determinant(J);
    MVPoly vand_ji = one, vand_ij = one;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            vand_ji = vand_ji * (X[j] - X[i]);
            vand_ij = vand_ij * (X[i] - X[j]);
        }
    const std::size_t k = n - 1;
    const Felt sign = sgn(k * (k + 1) / 2);
    rep.determinant_formula = (det == vand_ji.scale(sign)) && (det == mv_determinant(B) * mv_determinant(A));
    rep.alternate_sign_convention = (det == vand_ij.scale(sign));

    bool lemma = true;
    for (std::size_t j = 1; j <= lemma_max_j && lemma; ++j) {
        for (std::size_t i = 0; i < n && lemma; ++i) {
            MVPoly rhs = zero;
            MVPoly xp = one;
            for (std::size_t m = 0; m < j; ++m) {
                rhs = rhs + H[j - 1 - m] * xp;
                xp = xp * X[i];
            }
            lemma = (H[j].partial(i) == rhs);
        }
    }
    rep.derivative_lemma = lemma;
    return rep;
}

}  // namespace deephole
