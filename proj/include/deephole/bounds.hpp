#pragma once

// Exact evaluation of the point-count bounds and nonexistence thresholds.
// Quantities of the form a + b*sqrt(q) are kept symbolically; signs are decided
// by comparing a^2 with b^2 q, so no floating point enters a verdict.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numeric>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "gf.hpp"

namespace deephole {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

/// a + b*sqrt(q) with rational a, b and a positive integer q.
class Surd {
public:
    Surd() = default;
    Surd(bigrat a, bigrat b, bigint q) : a_(std::move(a)), b_(std::move(b)), q_(std::move(q)) {}
    static Surd integer(const bigint& v, const bigint& q) { return Surd(bigrat(v), bigrat(0), q); }

    const bigrat& rational_part() const noexcept { return a_; }
    const bigrat& sqrt_coeff() const noexcept { return b_; }
    const bigint& radicand() const noexcept { return q_; }
    bool is_rational() const noexcept { return b_ == 0; }

    int sign() const {
        const int sa = a_.sign(), sb = b_.sign();
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: compare a^2 with b^2 q
        const bigrat lhs = a_ * a_, rhs = b_ * b_ * bigrat(q_);
        if (lhs == rhs) return 0;
        return lhs > rhs ? sa : sb;
    }

    friend Surd operator+(const Surd& x, const Surd& y) { return Surd(x.a_ + y.a_, x.b_ + y.b_, pick(x, y)); }
    friend Surd operator-(const Surd& x, const Surd& y) { return Surd(x.a_ - y.a_, x.b_ - y.b_, pick(x, y)); }
    friend Surd operator*(const Surd& x, const Surd& y) {
        const bigint q = pick(x, y);
        return Surd(x.a_ * y.a_ + x.b_ * y.b_ * bigrat(q), x.a_ * y.b_ + x.b_ * y.a_, q);
    }
    friend Surd operator*(const bigint& s, const Surd& x) { return Surd(x.a_ * bigrat(s), x.b_ * bigrat(s), x.q_); }

    friend bool operator<(const Surd& x, const Surd& y) { return (x - y).sign() < 0; }
    friend bool operator<=(const Surd& x, const Surd& y) { return (x - y).sign() <= 0; }
    friend bool operator==(const Surd& x, const Surd& y) { return (x - y).sign() == 0; }

    /// For display only.
    double approx() const {
        return a_.convert_to<double>() + b_.convert_to<double>() * std::sqrt(q_.convert_to<double>());
    }

    std::string to_string() const {
        auto rs = [](const bigrat& r) { return r.str(); };
        if (b_ == 0) return rs(a_);
        std::string s = (a_ == 0 ? std::string() : rs(a_) + (b_ > 0 ? "+" : ""));
        return s + rs(b_) + "*sqrt(" + q_.str() + ")";
    }

private:
    static bigint pick(const Surd& x, const Surd& y) {
        if (x.q_ != y.q_ && x.b_ != 0 && y.b_ != 0)
            throw error(errc::invalid_params, "mixing square roots of different integers");
        return x.b_ != 0 ? x.q_ : y.q_;
    }

    bigrat a_{0};
    bigrat b_{0};
    bigint q_{1};
};

inline bigint ipow(bigint base, unsigned e) {
    bigint r = 1;
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

/// q^{e2/2} for e2 >= 0.
inline Surd qpow_half(const bigint& q, long e2) {
    if (e2 < 0) throw error(errc::invalid_params, "negative exponent");
    if (e2 % 2 == 0) return Surd::integer(ipow(q, static_cast<unsigned>(e2 / 2)), q);
    return Surd(bigrat(0), bigrat(ipow(q, static_cast<unsigned>(e2 / 2))), q);
}

enum class Verdict { conditions_met, conditions_not_met, not_applicable };

inline const char* to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::conditions_met: return "conditions_met";
    case Verdict::conditions_not_met: return "conditions_not_met";
    case Verdict::not_applicable: return "not_applicable";
    }
    return "unknown";
}

struct BoundReport {
    std::string name;
    std::map<std::string, std::string> params;
    std::map<std::string, Surd> terms;
    std::map<std::string, bool> conditions;
    Verdict verdict = Verdict::conditions_met;
    std::vector<std::string> reasons;

    /// Sets the verdict from the conditions map.
    void settle() {
        reasons.clear();
        for (const auto& [name_, ok] : conditions)
            if (!ok) reasons.push_back(name_);
        verdict = reasons.empty() ? Verdict::conditions_met : Verdict::conditions_not_met;
    }

    const Surd& value() const { return terms.at("value"); }
};

namespace detail {

inline void need(bool ok, const std::string& what) {
    if (!ok) throw error(errc::invalid_params, what);
}

inline BoundReport base_report(const std::string& name, std::uint64_t q, std::uint64_t k, std::uint64_t d) {
    BoundReport r;
    r.name = name;
    r.params = {{"q", std::to_string(q)}, {"k", std::to_string(k)}, {"d", std::to_string(d)}};
    return r;
}

}  // namespace detail

/// p_m and the two deviation terms (d-1)^{m-s} q^{(m+s+1)/2} and
/// 6 (d+2)^{m+2} q^{(m+s)/2}, plus the primitive Betti number bound.
inline BoundReport gl_estimate_terms(std::uint64_t m, std::uint64_t s, std::uint64_t d, std::uint64_t q) {
    detail::need(d >= 2, "d >= 2 required");
    detail::need(m > s, "m > s required");
    detail::need(q >= 2, "q >= 2 required");
    const bigint Q(q);
    BoundReport r;
    r.name = "gl_estimate";
    r.params = {{"m", std::to_string(m)}, {"s", std::to_string(s)}, {"d", std::to_string(d)}, {"q", std::to_string(q)}};
    bigint pm = 0;
    for (std::uint64_t i = 0; i <= m; ++i) pm += ipow(Q, static_cast<unsigned>(i));
    const auto ms = static_cast<unsigned>(m - s);
    const bigint c1 = ipow(bigint(d - 1), ms);
    const bigint c2 = 6 * ipow(bigint(d + 2), static_cast<unsigned>(m + 2));
    const Surd t1 = c1 * qpow_half(Q, static_cast<long>(m + s + 1));
    const Surd t2 = c2 * qpow_half(Q, static_cast<long>(m + s));
    const bigrat sign_term = (ms % 2 == 0) ? bigrat(1) : bigrat(-1);
    const bigrat betti = bigrat(bigint(d - 1), bigint(d)) * (bigrat(c1) - sign_term);
    r.terms["p_m"] = Surd::integer(pm, Q);
    r.terms["gl_term1"] = t1;
    r.terms["gl_term2"] = t2;
    r.terms["gl_term1_coeff"] = Surd::integer(c1, Q);
    r.terms["gl_term2_coeff"] = Surd::integer(c2, Q);
    r.terms["betti_bound"] = Surd(betti, 0, Q);
    r.terms["lower"] = Surd::integer(pm, Q) - (t1 + t2);
    r.terms["upper"] = Surd::integer(pm, Q) + (t1 + t2);
    r.conditions["betti_bound<=(d-1)^(m-s)"] = betti <= bigrat(c1);
    r.settle();
    return r;
}

struct CsmBound {
    bigint katz;         // 1 + sum_{n=1}^{m+1} (1 + A(n+1, d+1))
    bigint closed_form;  // 6 (d+2)^{m+2}
    bool holds = false;
    std::vector<bigint> E;  // E(n, d+1), n = 1..m+2
    std::vector<bigint> A;  // A(n, d+1), n = 1..m+2
};

inline bigint euler_bound(std::uint64_t n, std::uint64_t d) { return 2 * ipow(bigint(d + 1), static_cast<unsigned>(n)); }

inline bigint a_bound(std::uint64_t n, std::uint64_t d) {
    bigint acc = euler_bound(n, d) + 2;
    for (std::uint64_t j = 1; j < n; ++j) acc += 2 * euler_bound(j, d);
    return acc;
}

inline CsmBound c_sm_bound(std::uint64_t m, std::uint64_t d) {
    detail::need(m >= 1, "m >= 1 required");
    detail::need(d >= 2, "d >= 2 required");
    CsmBound b;
    b.katz = 1;
    for (std::uint64_t n = 1; n <= m + 1; ++n) b.katz += 1 + a_bound(n + 1, d + 1);
    for (std::uint64_t n = 1; n <= m + 2; ++n) {
        b.E.push_back(euler_bound(n, d + 1));
        b.A.push_back(a_bound(n, d + 1));
    }
    b.closed_form = 6 * ipow(bigint(d + 2), static_cast<unsigned>(m + 2));
    b.holds = b.katz <= b.closed_form;
    return b;
}

/// q^k - 2(d-1)^{k-d+1} q^{(k+d)/2} - 7(d+2)^{k+2} q^{(k+d-1)/2}.
inline BoundReport affine_lower_bound(std::uint64_t q, std::uint64_t k, std::uint64_t d) {
    detail::need(k > d && d >= 2, "k > d >= 2 required");
    detail::need(q >= 2 && q - 1 > k + d, "q-1 > k+d required");
    const bigint Q(q);
    BoundReport r = detail::base_report("affine_lower_bound", q, k, d);
    const Surd main = qpow_half(Q, static_cast<long>(2 * k));
    const Surd t1 = (2 * ipow(bigint(d - 1), static_cast<unsigned>(k - d + 1))) * qpow_half(Q, static_cast<long>(k + d));
    const Surd t2 = (7 * ipow(bigint(d + 2), static_cast<unsigned>(k + 2))) * qpow_half(Q, static_cast<long>(k + d - 1));
    r.terms["main_term"] = main;
    r.terms["gl_term1"] = t1;
    r.terms["gl_term2"] = t2;
    r.terms["value"] = main - t1 - t2;
    r.conditions["positive"] = r.terms["value"].sign() > 0;
    r.settle();
    return r;
}

namespace detail {

// q^{k-1} + 2(d-1)^{k-d} q^{(k+d-1)/2} + 7(d+2)^{k+1} q^{(k+d-2)/2}
inline Surd hyperplane_section_bound(const bigint& Q, std::uint64_t k, std::uint64_t d) {
    return qpow_half(Q, static_cast<long>(2 * (k - 1))) +
           (2 * ipow(bigint(d - 1), static_cast<unsigned>(k - d))) * qpow_half(Q, static_cast<long>(k + d - 1)) +
           (7 * ipow(bigint(d + 2), static_cast<unsigned>(k + 1))) * qpow_half(Q, static_cast<long>(k + d - 2));
}

}  // namespace detail

/// Upper bound on the points of V_f with a zero coordinate.
inline BoundReport n1_bound(std::uint64_t q, std::uint64_t k, std::uint64_t d) {
    detail::need(k > d && d >= 2, "k > d >= 2 required");
    const bigint Q(q);
    BoundReport r = detail::base_report("n1_bound", q, k, d);
    const Surd section = detail::hyperplane_section_bound(Q, k, d);
    r.terms["section_bound"] = section;
    r.terms["multiplier"] = Surd::integer(bigint(k + 1), Q);
    r.terms["value"] = bigint(k + 1) * section;
    r.conditions["q-1>k+d"] = q - 1 > k + d;
    r.settle();
    return r;
}

/// Upper bound on the points of V_f with two equal coordinates.
inline BoundReport n2_bound(std::uint64_t q, std::uint64_t k, std::uint64_t d) {
    detail::need(k > d && d >= 2, "k > d >= 2 required");
    const bigint Q(q);
    BoundReport r = detail::base_report("n2_bound", q, k, d);
    const Surd section = detail::hyperplane_section_bound(Q, k, d);
    const bigint mult = bigint(k + 1) * k / 2;
    r.terms["section_bound"] = section;
    r.terms["multiplier"] = Surd::integer(mult, Q);
    r.terms["value"] = mult * section;
    r.conditions["q-1>k+d"] = q - 1 > k + d;
    r.settle();
    return r;
}

/// Lower bound on the points of V_f with nonzero, pairwise-distinct coordinates.
/// large_char selects the variant valid when char F_q > d+1.
inline BoundReport useful_points_lower_bound(std::uint64_t q, std::uint64_t k, std::uint64_t d, bool large_char) {
    detail::need(k > d && d >= 2, "k > d >= 2 required");
    const bigint Q(q);
    BoundReport r = detail::base_report(large_char ? "useful_points_lower_bound_large_char" : "useful_points_lower_bound",
                                        q, k, d);
    const bigint C = bigint(k + 1) * (k + 2) / 2;
    // a shift of one half-power for the large characteristic variant
    const long sh = large_char ? 1 : 0;
    const unsigned e1 = static_cast<unsigned>(large_char ? k - d + 1 : k - d);
    const Surd main = qpow_half(Q, static_cast<long>(2 * k));
    const Surd bad = C * qpow_half(Q, static_cast<long>(2 * (k - 1)));
    const bigint c1 = 2 * ipow(bigint(d - 1), e1);
    const bigint c2 = 7 * ipow(bigint(d + 2), static_cast<unsigned>(k + 1));
    const long base = static_cast<long>(k + d) - sh;
    const Surd t1 = c1 * (bigint(d - 1) * qpow_half(Q, base) + C * qpow_half(Q, base - 1));
    const Surd t2 = c2 * (bigint(d + 2) * qpow_half(Q, base - 1) + C * qpow_half(Q, base - 2));
    r.terms["main_term"] = main;
    r.terms["vandermonde_defect"] = bad;
    r.terms["gl_term1"] = t1;
    r.terms["gl_term2"] = t2;
    r.terms["value"] = main - bad - t1 - t2;
    r.conditions["positive"] = r.terms["value"].sign() > 0;
    r.settle();
    return r;
}

/// Positive rational a/b in lowest terms.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Ratio parse(const std::string& s) {
        Ratio r;
        try {
            const auto slash = s.find('/');
            std::size_t used = 0;
            if (slash == std::string::npos) {
                r.num = std::stoull(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
            } else {
                const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
                r.num = std::stoull(a, &used);
                if (used != a.size()) throw std::invalid_argument(s);
                r.den = std::stoull(b, &used);
                if (used != b.size()) throw std::invalid_argument(s);
            }
        } catch (const std::logic_error&) {
            throw error(errc::invalid_params, "epsilon must be a rational a/b, got '" + s + "'");
        }
        if (r.den == 0) throw error(errc::invalid_params, "zero denominator");
        const std::uint64_t g = std::gcd(r.num, r.den);
        if (g > 1) {
            r.num /= g;
            r.den /= g;
        }
        return r;
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// Hypotheses of the nonexistence theorems for the given (q, k, d, epsilon):
///   q > (k+1)^2,  q > c d^{2+eps},  k >= d'(2/eps + 1)
/// with c = 14, d' = d, or c = 20, d' = d-1 and char > d+1 when large_char.
inline BoundReport theorem_conditions(std::uint64_t q, std::uint64_t k, std::uint64_t d, Ratio eps, bool large_char,
                                      std::optional<std::uint64_t> p = std::nullopt) {
    if (!(eps.num > 0 && eps.num < eps.den)) throw error(errc::invalid_params, "epsilon must satisfy 0<epsilon<1");
    BoundReport r = detail::base_report(large_char ? "theorem_conditions_large_char" : "theorem_conditions", q, k, d);
    r.params["epsilon"] = eps.str();
    r.params["large_char"] = large_char ? "true" : "false";
    if (d < 3) {
        r.verdict = Verdict::not_applicable;
        if (d == 1)
            r.reasons.push_back("d=1 is not covered by the theorem; a separate result shows that for k>2 and q>k+3 "
                                "polynomials of degree k+1 do not generate deep holes");
        else
            r.reasons.push_back("d<3 is not covered by the theorem; for d=2 an analogous statement holds with an "
                                "unspecified constant M_1>14 in place of 14");
        return r;
    }
    detail::need(k > d, "k > d required");
    detail::need(q >= 2 && q - 1 > k + d, "q-1 > k+d required");

    const bigint Q(q);
    const bigint c = large_char ? 20 : 14;
    const std::uint64_t dd = large_char ? d - 1 : d;
    const auto a = eps.num, b = eps.den;
    const bigint kk2 = bigint(k + 1) * (k + 1);
    const bigint lhs = ipow(Q, static_cast<unsigned>(b));
    const bigint rhs = ipow(c, static_cast<unsigned>(b)) * ipow(bigint(d), static_cast<unsigned>(2 * b + a));
    r.terms["(k+1)^2"] = Surd::integer(kk2, Q);
    r.terms["q^b"] = Surd::integer(lhs, Q);
    r.terms["c^b*d^(2b+a)"] = Surd::integer(rhs, Q);
    r.terms["k*a"] = Surd::integer(bigint(k) * a, Q);
    r.terms["d'*(2b+a)"] = Surd::integer(bigint(dd) * (2 * b + a), Q);
    r.conditions["q>(k+1)^2"] = Q > kk2;
    r.conditions[large_char ? "q>20*d^(2+eps)" : "q>14*d^(2+eps)"] = lhs > rhs;
    r.conditions[large_char ? "k>=(d-1)(2/eps+1)" : "k>=d(2/eps+1)"] = bigint(k) * a >= bigint(dd) * (2 * b + a);
    if (large_char) {
        std::uint64_t ch = 0;
        if (p) {
            ch = *p;
        } else {
            const auto f = detail::prime_factors(q);
            detail::need(f.size() == 1, "large_char needs p, or q must be a prime power");
            ch = f[0];
        }
        r.params["p"] = std::to_string(ch);
        r.conditions["char(F_q)>d+1"] = ch > d + 1;
    }
    r.settle();
    return r;
}

}  // namespace deephole
