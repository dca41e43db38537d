#pragma once

// Dense univariate and sparse multivariate polynomials over a Field.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gf.hpp"

namespace deephole {

class UPoly {
public:
    UPoly() = default;
    explicit UPoly(FieldPtr field) : field_(std::move(field)) {}
    UPoly(FieldPtr field, std::vector<Felt> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
        for (auto v : c_)
            if (!field_->contains(v)) throw error(errc::field_mismatch, "coefficient outside field");
        normalize();
    }

    static UPoly monomial(FieldPtr field, std::size_t deg, Felt c) {
        std::vector<Felt> v(deg + 1, field->zero());
        v[deg] = c;
        return UPoly(std::move(field), std::move(v));
    }

    /// prod (T - r) over the given roots.
    static UPoly from_roots(FieldPtr field, std::span<const Felt> roots) {
        const Field& F = *field;
        std::vector<Felt> c{F.one()};
        c.reserve(roots.size() + 1);
        for (Felt r : roots) {
            const Felt nr = F.neg(r);
            c.push_back(F.zero());
            for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = F.add(c[i - 1], F.mul(c[i], nr));
            c[0] = F.mul(c[0], nr);
        }
        return UPoly(std::move(field), std::move(c));
    }

    const FieldPtr& field() const noexcept { return field_; }
    const std::vector<Felt>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    Felt coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : Felt{0}; }
    Felt leading() const noexcept { return c_.empty() ? Felt{0} : c_.back(); }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == field_->one(); }

    Felt eval(Felt x) const noexcept {
        const Field& F = *field_;
        Felt acc = F.zero();
        for (std::size_t i = c_.size(); i-- > 0;) acc = F.add(F.mul(acc, x), c_[i]);
        return acc;
    }

    UPoly scale(Felt s) const {
        std::vector<Felt> v(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) v[i] = field_->mul(c_[i], s);
        return UPoly(field_, std::move(v));
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        require_same_field(a.field_, b.field_);
        const Field& F = *a.field_;
        std::vector<Felt> v(std::max(a.c_.size(), b.c_.size()), F.zero());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = F.add(a.coeff(i), b.coeff(i));
        return UPoly(a.field_, std::move(v));
    }

    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        require_same_field(a.field_, b.field_);
        const Field& F = *a.field_;
        std::vector<Felt> v(std::max(a.c_.size(), b.c_.size()), F.zero());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = F.sub(a.coeff(i), b.coeff(i));
        return UPoly(a.field_, std::move(v));
    }

    UPoly operator-() const { return scale(field_->neg(field_->one())); }

    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        require_same_field(a.field_, b.field_);
        if (a.is_zero() || b.is_zero()) return UPoly(a.field_);
        const Field& F = *a.field_;
        std::vector<Felt> v(a.c_.size() + b.c_.size() - 1, F.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].rep == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = F.add(v[i + j], F.mul(a.c_[i], b.c_[j]));
        }
        return UPoly(a.field_, std::move(v));
    }

    friend bool operator==(const UPoly& a, const UPoly& b) {
        return same_field(a.field_, b.field_) && a.c_ == b.c_;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back().rep == 0) c_.pop_back();
    }

    FieldPtr field_;
    std::vector<Felt> c_;
};

/// Long division by a monic divisor of degree >= 1: returns (quotient, remainder).
inline std::pair<UPoly, UPoly> uni_divmod(const UPoly& f, const UPoly& Q) {
    require_same_field(f.field(), Q.field());
    if (Q.degree() < 1 || !Q.is_monic()) throw error(errc::non_monic_divisor, "divisor must be monic of degree >= 1");
    const Field& F = *f.field();
    const auto dq = static_cast<std::size_t>(Q.degree());
    std::vector<Felt> r = f.coeffs();
    if (r.size() <= dq) return {UPoly(f.field()), f};
    std::vector<Felt> quot(r.size() - dq, F.zero());
    const auto& qc = Q.coeffs();
    for (std::size_t top = r.size() - 1; top >= dq; --top) {
        const Felt lead = r[top];
        if (lead.rep == 0) continue;
        quot[top - dq] = lead;
        for (std::size_t i = 0; i < dq; ++i) r[top - dq + i] = F.sub(r[top - dq + i], F.mul(lead, qc[i]));
        r[top] = F.zero();
    }
    r.resize(dq);
    return {UPoly(f.field(), std::move(quot)), UPoly(f.field(), std::move(r))};
}

inline UPoly uni_rem(const UPoly& f, const UPoly& Q) { return uni_divmod(f, Q).second; }

/// Roots of a nonzero polynomial in F_q by exhaustive evaluation, ascending.
inline std::vector<Felt> uni_distinct_roots(const UPoly& f) {
    if (f.is_zero()) throw error(errc::zero_polynomial, "every element is a root of 0");
    std::vector<Felt> out;
    const std::uint32_t q = f.field()->q();
    for (std::uint32_t a = 0; a < q; ++a)
        if (f.eval(Felt{a}).rep == 0) out.push_back(Felt{a});
    return out;
}

// ---------------------------------------------------------------------------

class MVPoly {
public:
    static constexpr std::size_t max_vars = 16;
    using Exponent = std::array<std::uint8_t, max_vars>;
    using Terms = std::map<Exponent, Felt>;

    MVPoly() = default;
    MVPoly(FieldPtr field, std::size_t nvars) : field_(std::move(field)), nvars_(nvars) {
        if (nvars_ > max_vars) throw error(errc::too_many_variables, "at most 16 variables are supported");
    }

    static MVPoly constant(FieldPtr field, std::size_t nvars, Felt c) {
        MVPoly out(std::move(field), nvars);
        out.add_term(Exponent{}, c);
        return out;
    }

    static MVPoly variable(FieldPtr field, std::size_t nvars, std::size_t i) {
        if (i >= nvars) throw error(errc::index_out_of_range, "variable index");
        MVPoly out(field, nvars);
        Exponent e{};
        e[i] = 1;
        out.add_term(e, field->one());
        return out;
    }

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t nvars() const noexcept { return nvars_; }
    const Terms& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Felt coeff(const Exponent& e) const noexcept {
        auto it = terms_.find(e);
        return it == terms_.end() ? Felt{0} : it->second;
    }

    void add_term(const Exponent& e, Felt c) {
        if (c.rep == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second = field_->add(it->second, c);
            if (it->second.rep == 0) terms_.erase(it);
        }
    }

    /// -1 for the zero polynomial.
    long total_degree() const noexcept {
        long best = -1;
        for (const auto& [e, c] : terms_) best = std::max(best, degree_of(e));
        return best;
    }

    bool is_homogeneous() const noexcept {
        long deg = -1;
        for (const auto& [e, c] : terms_) {
            const long t = degree_of(e);
            if (deg >= 0 && t != deg) return false;
            deg = t;
        }
        return true;
    }

    Felt eval(std::span<const Felt> x) const {
        if (x.size() != nvars_) throw error(errc::arity_mismatch,
            "expected " + std::to_string(nvars_) + " coordinates, got " + std::to_string(x.size()));
        const Field& F = *field_;
        // power cache per variable, sized on demand
        std::vector<std::vector<Felt>> pw(nvars_, std::vector<Felt>{F.one()});
        auto power = [&](std::size_t v, std::size_t e) {
            auto& row = pw[v];
            while (row.size() <= e) row.push_back(F.mul(row.back(), x[v]));
            return row[e];
        };
        Felt acc = F.zero();
        for (const auto& [e, c] : terms_) {
            Felt t = c;
            for (std::size_t v = 0; v < nvars_ && t.rep != 0; ++v)
                if (e[v]) t = F.mul(t, power(v, e[v]));
            acc = F.add(acc, t);
        }
        return acc;
    }

    /// Formal partial derivative; the factor e*c is computed in F_q so terms
    /// with p | e vanish.
    MVPoly partial(std::size_t var) const {
        if (var >= nvars_) throw error(errc::index_out_of_range, "variable index");
        MVPoly out(field_, nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            const Felt factor = field_->from_integer(e[var]);
            Exponent ne = e;
            --ne[var];
            out.add_term(ne, field_->mul(factor, c));
        }
        return out;
    }

    MVPoly scale(Felt s) const {
        MVPoly out(field_, nvars_);
        if (s.rep == 0) return out;
        for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e, field_->mul(c, s));
        return out;
    }

    friend MVPoly operator+(const MVPoly& a, const MVPoly& b) {
        a.check_compatible(b);
        MVPoly out = a;
        for (const auto& [e, c] : b.terms_) out.add_term(e, c);
        return out;
    }

    friend MVPoly operator-(const MVPoly& a, const MVPoly& b) {
        a.check_compatible(b);
        MVPoly out = a;
        for (const auto& [e, c] : b.terms_) out.add_term(e, a.field_->neg(c));
        return out;
    }

    friend MVPoly operator*(const MVPoly& a, const MVPoly& b) {
        a.check_compatible(b);
        MVPoly out(a.field_, a.nvars_);
        const Field& F = *a.field_;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e{};
                for (std::size_t v = 0; v < a.nvars_; ++v) {
                    const unsigned s = static_cast<unsigned>(ea[v]) + eb[v];
                    if (s > 255) throw error(errc::cap_exceeded, "exponent exceeds 255");
                    e[v] = static_cast<std::uint8_t>(s);
                }
                out.add_term(e, F.mul(ca, cb));
            }
        }
        return out;
    }

    MVPoly pow(unsigned e) const {
        MVPoly result = constant(field_, nvars_, field_->one());
        MVPoly base = *this;
        while (e) {
            if (e & 1) result = result * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return result;
    }

    friend bool operator==(const MVPoly& a, const MVPoly& b) {
        return a.nvars_ == b.nvars_ && same_field(a.field_, b.field_) && a.terms_ == b.terms_;
    }

private:
    static long degree_of(const Exponent& e) noexcept {
        long s = 0;
        for (auto v : e) s += v;
        return s;
    }

    void check_compatible(const MVPoly& o) const {
        require_same_field(field_, o.field_);
        if (nvars_ != o.nvars_) throw error(errc::arity_mismatch, "variable counts differ");
    }

    FieldPtr field_;
    std::size_t nvars_ = 0;
    Terms terms_;
};

/// Pi_i in X_1..X_nvars; Pi_0 = 1.
inline MVPoly elementary_symmetric(const FieldPtr& field, std::size_t i, std::size_t nvars) {
    if (i > nvars) throw error(errc::index_out_of_range,
        "Pi_" + std::to_string(i) + " needs at least " + std::to_string(i) + " variables");
    MVPoly out(field, nvars);
    // walk all i-subsets of {0..nvars-1} in lexicographic order
    std::vector<std::size_t> idx(i);
    for (std::size_t j = 0; j < i; ++j) idx[j] = j;
    while (true) {
        MVPoly::Exponent e{};
        for (auto v : idx) e[v] = 1;
        out.add_term(e, field->one());
        std::size_t j = i;
        while (j > 0 && idx[j - 1] == nvars - i + j - 1) --j;
        if (j == 0) break;
        ++idx[j - 1];
        for (std::size_t t = j; t < i; ++t) idx[t] = idx[t - 1] + 1;
    }
    return out;
}

using MVMatrix = std::vector<std::vector<MVPoly>>;

inline MVMatrix mv_matmul(const MVMatrix& a, const MVMatrix& b) {
    if (a.empty() || b.empty() || a[0].size() != b.size())
        throw error(errc::invalid_dimensions, "matrix shapes do not match");
    const auto& proto = a[0][0];
    MVMatrix out(a.size(), std::vector<MVPoly>(b[0].size(), MVPoly(proto.field(), proto.nvars())));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b[0].size(); ++j)
            for (std::size_t t = 0; t < b.size(); ++t)
                if (!a[i][t].is_zero() && !b[t][j].is_zero()) out[i][j] = out[i][j] + a[i][t] * b[t][j];
    return out;
}

/// Symbolic determinant by row-by-row Laplace expansion, memoised on the set of
/// used columns. Fine for n <= 8.
inline MVPoly mv_determinant(const MVMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0 || n > 12) throw error(errc::invalid_dimensions, "determinant size");
    for (const auto& row : m)
        if (row.size() != n) throw error(errc::invalid_dimensions, "matrix not square");
    const auto& F = m[0][0].field();
    const std::size_t nv = m[0][0].nvars();
    std::vector<MVPoly> minors(std::size_t{1} << n, MVPoly(F, nv));
    minors[0] = MVPoly::constant(F, nv, F->one());
    for (std::size_t mask = 0; mask + 1 < minors.size(); ++mask) {
        if (minors[mask].is_zero()) continue;
        const auto row = static_cast<std::size_t>(__builtin_popcountll(mask));
        for (std::size_t c = 0; c < n; ++c) {
            if (mask & (std::size_t{1} << c)) continue;
            if (m[row][c].is_zero()) continue;
            // sign from the number of used columns to the right of c
            const auto above = static_cast<unsigned>(__builtin_popcountll(mask >> (c + 1)));
            MVPoly term = minors[mask] * m[row][c];
            if (above & 1) term = term.scale(F->neg(F->one()));
            auto& slot = minors[mask | (std::size_t{1} << c)];
            slot = slot + term;
        }
    }
    return minors.back();
}

}  // namespace deephole
