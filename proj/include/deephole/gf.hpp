#pragma once

// Exact arithmetic in F_q = F_{p^s} for q <= 2^20.
//
// Elements are stored as a single canonical integer in [0, q): for s = 1 the
// residue itself, for s > 1 the base-p digit string c_0 + c_1 p + ... of the
// coefficient tuple of the residue class modulo the field's modulus. Ascending
// canonical order is the global element order (codeword coordinates, search
// order, irreducible selection).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace deephole {

struct Felt {
    std::uint32_t rep = 0;

    friend constexpr auto operator<=>(Felt, Felt) = default;
};

namespace detail {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 f = 3; f * f <= n; f += 2)
        if (n % f == 0) return false;
    return true;
}

inline u32 inv_mod_prime(u32 a, u32 p) {
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p, new_r = a;
    while (new_r != 0) {
        std::int64_t quot = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - quot * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - quot * new_r);
    }
    if (t < 0) t += p;
    return static_cast<u32>(t);
}

// Dense polynomials over F_p, low degree first, used for modulus handling.
using PrimePoly = std::vector<u32>;

inline void trim(PrimePoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline PrimePoly pp_rem(PrimePoly a, const PrimePoly& m, u32 p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const u32 lead_inv = inv_mod_prime(m.back(), p);
    while (a.size() > dm) {
        const std::size_t shift = a.size() - 1 - dm;
        const u64 c = static_cast<u64>(a.back()) * lead_inv % p;
        for (std::size_t i = 0; i <= dm; ++i) {
            const u64 sub = c * m[i] % p;
            a[shift + i] = static_cast<u32>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

inline PrimePoly pp_mulmod(const PrimePoly& a, const PrimePoly& b, const PrimePoly& m, u32 p) {
    if (a.empty() || b.empty()) return {};
    PrimePoly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = static_cast<u32>((prod[i + j] + static_cast<u64>(a[i]) * b[j]) % p);
    return pp_rem(std::move(prod), m, p);
}

inline PrimePoly pp_gcd(PrimePoly a, PrimePoly b, u32 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PrimePoly r = pp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline PrimePoly pp_powmod(PrimePoly base, u64 e, const PrimePoly& m, u32 p) {
    PrimePoly result{1};
    base = pp_rem(std::move(base), m, p);
    while (e) {
        if (e & 1) result = pp_mulmod(result, base, m, p);
        e >>= 1;
        if (e) base = pp_mulmod(base, base, m, p);
    }
    return result;
}

// Ben-Or: f of degree s is irreducible iff gcd(f, T^{p^i} - T) = 1 for i <= s/2.
inline bool pp_is_irreducible(const PrimePoly& f, u32 p) {
    const std::size_t s = f.size() - 1;
    if (s == 0) return false;
    if (s == 1) return true;
    PrimePoly x{0, 1};
    PrimePoly u = x;
    for (std::size_t i = 1; i <= s / 2; ++i) {
        u = pp_powmod(u, p, f, p);
        PrimePoly diff = u;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        if (diff.empty()) return false;  // f divides T^{p^i} - T
        if (pp_gcd(f, diff, p).size() > 1) return false;
    }
    return true;
}

inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace detail

/// Lowest monic irreducible polynomial of degree s over F_p, where "lowest" is
/// the smallest integer encoding c_0 + c_1 p + ... + c_{s-1} p^{s-1} of the
/// non-leading coefficients. Returned low degree first, leading 1 included.
inline std::vector<std::uint32_t> find_irreducible(std::uint32_t p, std::uint32_t s) {
    if (!detail::is_prime(p)) throw error(errc::non_prime, std::to_string(p) + " is not prime");
    if (s < 1) throw error(errc::invalid_params, "degree must be positive");
    detail::PrimePoly f(s + 1, 0);
    f[s] = 1;
    while (true) {
        if (detail::pp_is_irreducible(f, p)) return f;
        // odometer over c_0 (fastest) .. c_{s-1}
        std::uint32_t i = 0;
        while (i < s && ++f[i] == p) f[i++] = 0;
        if (i == s) break;
    }
    throw error(errc::not_irreducible, "no irreducible polynomial found");  // unreachable
}

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
public:
    static constexpr std::uint64_t max_order = std::uint64_t{1} << 20;
    static constexpr std::uint64_t table_limit = std::uint64_t{1} << 16;

    /// Validates (p, s, modulus) and builds the field. When s > 1 and no
    /// modulus is given, find_irreducible(p, s) is used.
    static FieldPtr make(std::uint64_t p, std::uint32_t s = 1,
                         std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
        if (!detail::is_prime(p)) throw error(errc::non_prime, std::to_string(p) + " is not prime");
        if (s < 1) throw error(errc::invalid_params, "extension degree must be >= 1");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < s; ++i) {
            q *= p;
            if (q > max_order)
                throw error(errc::too_large, "p^s exceeds 2^20");
        }
        const auto pp = static_cast<std::uint32_t>(p);
        std::vector<std::uint32_t> mod;
        if (s > 1) {
            if (modulus) {
                mod = *modulus;
                if (mod.size() != s + 1 || mod.back() != 1)
                    throw error(errc::not_irreducible, "modulus must be monic of degree " + std::to_string(s));
                for (auto c : mod)
                    if (c >= pp) throw error(errc::invalid_params, "modulus coefficient out of range");
                if (!detail::pp_is_irreducible(mod, pp))
                    throw error(errc::not_irreducible, "modulus is reducible over F_" + std::to_string(p));
            } else {
                mod = find_irreducible(pp, s);
            }
        } else if (modulus && !modulus->empty()) {
            const auto& m = *modulus;
            if (m.size() != 2 || m[1] != 1)
                throw error(errc::not_irreducible, "modulus must be monic of degree 1");
        }
        return FieldPtr(new Field(pp, s, static_cast<std::uint32_t>(q), std::move(mod)));
    }

    /// Field of order q (a prime power), default modulus.
    static FieldPtr of_order(std::uint64_t q) {
        if (q < 2) throw error(errc::non_prime, "order must be a prime power");
        if (q > max_order) throw error(errc::too_large, "q exceeds 2^20");
        auto factors = detail::prime_factors(q);
        if (factors.size() != 1) throw error(errc::non_prime, std::to_string(q) + " is not a prime power");
        std::uint32_t s = 0;
        for (std::uint64_t t = q; t > 1; t /= factors[0]) ++s;
        return make(factors[0], s);
    }

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t s() const noexcept { return s_; }
    std::uint32_t q() const noexcept { return q_; }
    bool is_prime_field() const noexcept { return s_ == 1; }
    /// Monic modulus, low degree first; empty for prime fields.
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    bool contains(Felt a) const noexcept { return a.rep < q_; }

    Felt zero() const noexcept { return Felt{0}; }
    Felt one() const noexcept { return Felt{1}; }

    /// Image of an integer under Z -> F_p -> F_q.
    Felt from_integer(std::int64_t v) const noexcept {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        return Felt{static_cast<std::uint32_t>(r)};
    }

    Felt element(std::uint64_t rep) const {
        if (rep >= q_) throw error(errc::field_mismatch, "rep " + std::to_string(rep) + " not in F_" + std::to_string(q_));
        return Felt{static_cast<std::uint32_t>(rep)};
    }

    Felt add(Felt a, Felt b) const noexcept {
        if (s_ == 1) {
            std::uint32_t r = a.rep + b.rep;
            return Felt{r >= p_ ? r - p_ : r};
        }
        if (p_ == 2) return Felt{a.rep ^ b.rep};
        std::uint32_t x = a.rep, y = b.rep, r = 0, place = 1;
        for (std::uint32_t i = 0; i < s_; ++i) {
            std::uint32_t d = x % p_ + y % p_;
            if (d >= p_) d -= p_;
            r += d * place;
            place *= p_;
            x /= p_;
            y /= p_;
        }
        return Felt{r};
    }

    Felt neg(Felt a) const noexcept {
        if (s_ == 1) return Felt{a.rep == 0 ? 0 : p_ - a.rep};
        if (p_ == 2) return a;
        std::uint32_t x = a.rep, r = 0, place = 1;
        for (std::uint32_t i = 0; i < s_; ++i) {
            std::uint32_t d = x % p_;
            r += (d == 0 ? 0 : p_ - d) * place;
            place *= p_;
            x /= p_;
        }
        return Felt{r};
    }

    Felt sub(Felt a, Felt b) const noexcept {
        if (s_ == 1) return Felt{a.rep >= b.rep ? a.rep - b.rep : a.rep + p_ - b.rep};
        return add(a, neg(b));
    }

    Felt mul(Felt a, Felt b) const noexcept {
        if (s_ == 1) return Felt{static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.rep) * b.rep % p_)};
        if (a.rep == 0 || b.rep == 0) return Felt{0};
        if (!log_.empty()) return Felt{exp_[log_[a.rep] + log_[b.rep]]};
        return mul_schoolbook(a, b);
    }

    /// Polynomial-basis multiplication with explicit reduction; the table path
    /// must agree with it bit for bit.
    Felt mul_schoolbook(Felt a, Felt b) const noexcept {
        if (s_ == 1) return mul(a, b);
        std::vector<std::uint64_t> prod(2 * s_ - 1, 0);
        auto da = digits(a), db = digits(b);
        for (std::uint32_t i = 0; i < s_; ++i) {
            if (da[i] == 0) continue;
            for (std::uint32_t j = 0; j < s_; ++j) prod[i + j] += static_cast<std::uint64_t>(da[i]) * db[j];
        }
        for (auto& c : prod) c %= p_;
        // reduce with the monic modulus: T^s = -sum m_i T^i
        for (std::size_t deg = prod.size() - 1; deg >= s_; --deg) {
            const std::uint64_t c = prod[deg];
            if (c != 0) {
                prod[deg] = 0;
                for (std::uint32_t i = 0; i < s_; ++i)
                    prod[deg - s_ + i] = (prod[deg - s_ + i] + (p_ - modulus_[i]) * c) % p_;
            }
        }
        std::uint32_t r = 0, place = 1;
        for (std::uint32_t i = 0; i < s_; ++i) {
            r += static_cast<std::uint32_t>(prod[i]) * place;
            place *= p_;
        }
        return Felt{r};
    }

    Felt pow(Felt a, std::uint64_t e) const noexcept {
        Felt result = one();
        while (e) {
            if (e & 1) result = mul(result, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return result;
    }

    Felt inv(Felt a) const {
        if (a.rep == 0 || a.rep >= q_) throw error(errc::division_by_zero, "inverse of zero");
        if (s_ == 1) return Felt{detail::inv_mod_prime(a.rep, p_)};
        if (!log_.empty()) return Felt{exp_[(q_ - 1 - log_[a.rep]) % (q_ - 1)]};
        return pow(a, q_ - 2);
    }

    Felt div(Felt a, Felt b) const { return mul(a, inv(b)); }

    Felt frobenius(Felt a) const noexcept { return pow(a, p_); }

    /// Absolute trace to F_p: sum of the s Frobenius conjugates.
    Felt trace(Felt a) const noexcept {
        Felt acc = a;
        Felt conj = a;
        for (std::uint32_t i = 1; i < s_; ++i) {
            conj = frobenius(conj);
            acc = add(acc, conj);
        }
        return acc;
    }

    std::vector<std::uint32_t> digits(Felt a) const {
        std::vector<std::uint32_t> out(s_);
        std::uint32_t x = a.rep;
        for (std::uint32_t i = 0; i < s_; ++i) {
            out[i] = x % p_;
            x /= p_;
        }
        return out;
    }

    Felt from_digits(std::span<const std::uint32_t> ds) const {
        if (ds.size() > s_) throw error(errc::field_mismatch, "too many digits");
        std::uint32_t r = 0, place = 1;
        for (auto d : ds) {
            if (d >= p_) throw error(errc::field_mismatch, "digit out of range");
            r += d * place;
            place *= p_;
        }
        return Felt{r};
    }

    /// All q - 1 nonzero elements in ascending canonical order.
    std::vector<Felt> units() const {
        std::vector<Felt> out(q_ - 1);
        for (std::uint32_t i = 1; i < q_; ++i) out[i - 1] = Felt{i};
        return out;
    }

    std::vector<Felt> elements() const {
        std::vector<Felt> out(q_);
        for (std::uint32_t i = 0; i < q_; ++i) out[i] = Felt{i};
        return out;
    }

    bool uses_tables() const noexcept { return !log_.empty(); }

    std::string describe() const {
        std::ostringstream os;
        os << "F_" << q_;
        if (s_ > 1) {
            os << " mod ";
            bool first = true;
            for (std::size_t i = modulus_.size(); i-- > 0;) {
                if (modulus_[i] == 0) continue;
                if (!first) os << "+";
                first = false;
                if (modulus_[i] != 1 || i == 0) os << modulus_[i];
                if (i >= 1) os << "T";
                if (i >= 2) os << "^" << i;
            }
        }
        return os.str();
    }

    friend bool operator==(const Field& a, const Field& b) noexcept {
        return a.p_ == b.p_ && a.s_ == b.s_ && a.modulus_ == b.modulus_;
    }

private:
    Field(std::uint32_t p, std::uint32_t s, std::uint32_t q, std::vector<std::uint32_t> modulus)
        : p_(p), s_(s), q_(q), modulus_(std::move(modulus)) {
        if (s_ > 1 && q_ <= table_limit) build_tables();
    }

    void build_tables() {
        const std::uint32_t order = q_ - 1;
        const auto factors = detail::prime_factors(order);
        auto slow_pow = [this](Felt a, std::uint64_t e) {
            Felt r = one();
            while (e) {
                if (e & 1) r = mul_schoolbook(r, a);
                e >>= 1;
                if (e) a = mul_schoolbook(a, a);
            }
            return r;
        };
        std::uint32_t gen = 0;
        for (std::uint32_t g = 1; g < q_ && gen == 0; ++g) {
            bool primitive = true;
            for (auto f : factors)
                if (slow_pow(Felt{g}, order / f) == one()) { primitive = false; break; }
            if (primitive) gen = g;
        }
        std::vector<std::uint32_t> exp_table(2 * static_cast<std::size_t>(order));
        std::vector<std::uint32_t> log_table(q_, 0);
        Felt cur = one();
        for (std::uint32_t i = 0; i < order; ++i) {
            exp_table[i] = cur.rep;
            log_table[cur.rep] = i;
            cur = mul_schoolbook(cur, Felt{gen});
        }
        for (std::uint32_t i = order; i < 2 * order; ++i) exp_table[i] = exp_table[i - order];
        exp_ = std::move(exp_table);
        log_ = std::move(log_table);
    }

    std::uint32_t p_;
    std::uint32_t s_;
    std::uint32_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> exp_;
};

inline bool same_field(const FieldPtr& a, const FieldPtr& b) noexcept {
    return a == b || (a && b && *a == *b);
}

inline void require_same_field(const FieldPtr& a, const FieldPtr& b) {
    if (!same_field(a, b)) throw error(errc::field_mismatch, "operands live in different fields");
}

/// Field element bound to its field; arithmetic between different fields throws.
class Element {
public:
    Element(FieldPtr field, Felt value) : field_(std::move(field)), value_(value) {
        if (!field_->contains(value_)) throw error(errc::field_mismatch, "rep out of range");
    }

    const FieldPtr& field() const noexcept { return field_; }
    Felt value() const noexcept { return value_; }

    friend Element operator+(const Element& a, const Element& b) {
        require_same_field(a.field_, b.field_);
        return {a.field_, a.field_->add(a.value_, b.value_)};
    }
    friend Element operator-(const Element& a, const Element& b) {
        require_same_field(a.field_, b.field_);
        return {a.field_, a.field_->sub(a.value_, b.value_)};
    }
    friend Element operator*(const Element& a, const Element& b) {
        require_same_field(a.field_, b.field_);
        return {a.field_, a.field_->mul(a.value_, b.value_)};
    }
    friend Element operator/(const Element& a, const Element& b) {
        require_same_field(a.field_, b.field_);
        return {a.field_, a.field_->div(a.value_, b.value_)};
    }
    Element operator-() const { return {field_, field_->neg(value_)}; }
    Element inverse() const { return {field_, field_->inv(value_)}; }
    Element pow(std::uint64_t e) const { return {field_, field_->pow(value_, e)}; }
    Element trace() const { return {field_, field_->trace(value_)}; }

    friend bool operator==(const Element& a, const Element& b) {
        return same_field(a.field_, b.field_) && a.value_ == b.value_;
    }

private:
    FieldPtr field_;
    Felt value_;
};

}  // namespace deephole
