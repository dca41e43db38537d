#include <gtest/gtest.h>

#include <random>
#include <set>

#include "deephole/gf.hpp"

using namespace deephole;

namespace {

// Independent oracle: a monic polynomial of degree 2 or 3 over F_p is
// irreducible iff it has no root in F_p.
bool rootless(const std::vector<std::uint32_t>& f, std::uint32_t p) {
    for (std::uint32_t x = 0; x < p; ++x) {
        std::uint64_t acc = 0;
        for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % p;
        if (acc == 0) return false;
    }
    return true;
}

}  // namespace

TEST(Field, PrimeFieldBasics) {
    auto F = Field::make(7);
    EXPECT_EQ(F->q(), 7u);
    EXPECT_EQ(F->add(Felt{3}, Felt{5}), Felt{1});
    EXPECT_EQ(F->inv(Felt{2}), Felt{4});
    EXPECT_EQ(F->neg(Felt{3}), Felt{4});
    EXPECT_EQ(F->pow(Felt{3}, 6), F->one());
    EXPECT_EQ(F->trace(Felt{3}), Felt{3});
}

TEST(Field, RejectsBadParameters) {
    EXPECT_THROW(Field::make(4), error);
    try {
        Field::make(4);
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::non_prime);
    }
    try {
        Field::make(2, 21);
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::too_large);
    }
    try {
        Field::make(2, 2, std::vector<std::uint32_t>{1, 0, 1});  // T^2+1 = (T+1)^2
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_irreducible);
    }
    EXPECT_NO_THROW(Field::make(2, 20));
}

TEST(Field, F4Arithmetic) {
    auto F = Field::make(2, 2, std::vector<std::uint32_t>{1, 1, 1});
    const Felt alpha{2};
    // T*T = T^2 = T + 1 mod T^2+T+1, i.e. rep 3
    EXPECT_EQ(F->mul(alpha, alpha), Felt{3});
    EXPECT_EQ(F->trace(F->one()), Felt{0});
    EXPECT_EQ(F->trace(alpha), Felt{1});
    EXPECT_EQ(F->units(), (std::vector<Felt>{Felt{1}, Felt{2}, Felt{3}}));
}

TEST(Field, FindIrreducibleExamples) {
    EXPECT_EQ(find_irreducible(2, 2), (std::vector<std::uint32_t>{1, 1, 1}));
    EXPECT_EQ(find_irreducible(3, 2), (std::vector<std::uint32_t>{1, 0, 1}));
    EXPECT_EQ(find_irreducible(5, 2), (std::vector<std::uint32_t>{2, 0, 1}));
}

TEST(Field, FindIrreducibleIsFirstRootlessCandidate) {
    // for degrees 2 and 3, scan candidates in the documented order and compare
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u}) {
        for (std::uint32_t s : {2u, 3u}) {
            std::vector<std::uint32_t> f(s + 1, 0);
            f[s] = 1;
            std::vector<std::uint32_t> expected;
            while (expected.empty()) {
                if (rootless(f, p)) expected = f;
                std::uint32_t i = 0;
                while (i < s && ++f[i] == p) f[i++] = 0;
            }
            EXPECT_EQ(find_irreducible(p, s), expected) << "p=" << p << " s=" << s;
        }
    }
}

TEST(Field, ExhaustiveAxiomsSmallFields) {
    for (auto [p, s] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {2, 1}, {3, 1}, {5, 1}, {7, 1}, {2, 2}, {2, 3}, {3, 2}, {2, 4}, {5, 2}, {7, 2}, {2, 6}, {3, 3}, {61, 1}}) {
        auto F = Field::make(p, s);
        const auto q = F->q();
        ASSERT_LE(q, 64u);
        std::size_t trace_zero = 0;
        for (Felt a : F->elements()) {
            EXPECT_EQ(F->pow(a, q), a);
            if (a.rep) EXPECT_EQ(F->mul(a, F->inv(a)), F->one());
            EXPECT_EQ(F->add(a, F->neg(a)), F->zero());
            const Felt t = F->trace(a);
            EXPECT_LT(t.rep, p);  // lands in the prime field
            trace_zero += (t.rep == 0);
            for (Felt b : F->elements()) {
                EXPECT_EQ(F->trace(F->add(a, b)), F->add(t, F->trace(b)));
                EXPECT_EQ(F->mul(a, b), F->mul_schoolbook(a, b));
                EXPECT_EQ(F->mul(a, b), F->mul(b, a));
                EXPECT_EQ(F->sub(F->add(a, b), b), a);
            }
        }
        std::uint32_t ps1 = 1;
        for (std::uint32_t i = 1; i < s; ++i) ps1 *= p;
        EXPECT_EQ(trace_zero, ps1) << F->describe();
        const auto u = F->units();
        EXPECT_EQ(u.size(), q - 1);
        EXPECT_EQ(std::set<Felt>(u.begin(), u.end()).size(), q - 1);
        for (Felt x : u) EXPECT_NE(x.rep, 0u);
    }
}

TEST(Field, TablesMatchSchoolbookOnLargerFields) {
    std::mt19937_64 rng(0x5EED);
    for (auto [p, s] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 16}, {3, 10}, {257, 2}, {2, 18}}) {
        auto F = Field::make(p, s);
        EXPECT_EQ(F->uses_tables(), F->q() <= (1u << 16));
        for (int t = 0; t < 2000; ++t) {
            const Felt a{static_cast<std::uint32_t>(rng() % F->q())}, b{static_cast<std::uint32_t>(rng() % F->q())};
            EXPECT_EQ(F->mul(a, b), F->mul_schoolbook(a, b));
            if (a.rep) EXPECT_EQ(F->mul(a, F->inv(a)), F->one());
        }
    }
}

TEST(Field, DigitsRoundTrip) {
    auto F = Field::make(3, 3);
    for (Felt a : F->elements()) EXPECT_EQ(F->from_digits(F->digits(a)), a);
}

TEST(Field, DivisionByZeroAndMismatch) {
    auto F = Field::make(5);
    try {
        F->inv(Felt{0});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::division_by_zero);
    }
    Element a(Field::make(5), Felt{2});
    Element b(Field::make(7), Felt{2});
    try {
        (void)(a + b);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::field_mismatch);
    }
    Element c(Field::make(5), Felt{3});
    EXPECT_EQ((a + c).value(), Felt{0});
}

TEST(Field, OfOrder) {
    EXPECT_EQ(Field::of_order(9)->p(), 3u);
    EXPECT_EQ(Field::of_order(9)->s(), 2u);
    EXPECT_THROW(Field::of_order(12), error);
}
