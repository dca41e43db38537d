#include <gtest/gtest.h>

#include <random>

#include "deephole/rscode.hpp"

using namespace deephole;

namespace {

UPoly up(const FieldPtr& F, std::initializer_list<std::uint32_t> c) {
    std::vector<Felt> v;
    for (auto x : c) v.push_back(Felt{x});
    return UPoly(F, v);
}

// Oracle: walk every message (a_0..a_{k-1}) and count agreements directly.
std::size_t naive_max_agreement(const RSCode& code, const Word& w) {
    const Field& F = *code.field();
    std::vector<Felt> a(code.k(), F.zero());
    std::size_t best = 0;
    while (true) {
        const Word c = word_from_poly(code, UPoly(code.field(), a));
        best = std::max(best, agreements(c, w));
        std::size_t j = 0;
        while (j < a.size() && ++a[j].rep == F.q()) a[j++].rep = 0;
        if (j == a.size()) break;
    }
    return best;
}

}  // namespace

TEST(RSCode, Parameters) {
    auto F = Field::make(7);
    const RSCode c(F, 2);
    EXPECT_EQ(c.n(), 6u);
    EXPECT_EQ(c.min_distance(), 5u);
    EXPECT_EQ(c.covering_radius(), 4u);
    EXPECT_EQ(c.size(), 49u);
    EXPECT_EQ(c.eval_order().front(), Felt{1});
    EXPECT_THROW(RSCode(F, 0), error);
    EXPECT_THROW(RSCode(F, 7), error);
}

TEST(RSCode, WordsAndDegreeGuard) {
    auto F = Field::make(7);
    const RSCode c(F, 2);
    const Word w = word_from_poly(c, up(F, {0, 0, 1}));
    EXPECT_EQ(w.symbols, (std::vector<Felt>{Felt{1}, Felt{4}, Felt{2}, Felt{2}, Felt{4}, Felt{1}}));
    try {
        word_from_poly(c, UPoly::monomial(F, 6, F->one()));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::degree_too_high);
    }
}

TEST(RSCode, DeepHoleExamples) {
    auto F = Field::make(7);
    const RSCode c(F, 2);
    const Word w = word_from_poly(c, up(F, {0, 0, 1}));
    EXPECT_EQ(distance_to_code(c, w), 4u);
    EXPECT_TRUE(is_deep_hole(c, w));
    // a codeword itself
    EXPECT_EQ(distance_to_code(c, word_from_poly(c, up(F, {3, 5}))), 0u);
    EXPECT_FALSE(is_deep_hole(c, word_from_poly(c, up(F, {3, 5}))));
}

TEST(RSCode, MaxAgreementMatchesNaiveOracle) {
    std::mt19937_64 rng(0x5EED);
    for (auto F : {Field::make(5), Field::make(7), Field::make(2, 2), Field::make(3, 2)}) {
        for (std::size_t k = 1; k <= 3 && k < F->q() - 1; ++k) {
            const RSCode c(F, k);
            for (int t = 0; t < 25; ++t) {
                Word w;
                for (std::size_t i = 0; i < c.n(); ++i) w.symbols.push_back(Felt{static_cast<std::uint32_t>(rng() % F->q())});
                const std::size_t oracle = naive_max_agreement(c, w);
                EXPECT_EQ(max_agreement(c, w), oracle);
                EXPECT_EQ(max_agreement(c, w, SIZE_MAX, 3), oracle);
                EXPECT_LE(c.n() - oracle, c.covering_radius());
            }
        }
    }
}

TEST(RSCode, DegreeKWordsAreDeepHoles) {
    for (auto F : {Field::make(7), Field::make(2, 3), Field::make(11)}) {
        for (std::size_t k = 1; k <= 3 && k < F->q() - 1; ++k) {
            const RSCode c(F, k);
            for (std::uint32_t lead = 1; lead < F->q(); ++lead) {
                const Word w = word_from_poly(c, UPoly::monomial(F, k, Felt{lead}));
                EXPECT_EQ(distance_to_code(c, w), c.n() - k);
            }
        }
    }
}

TEST(RSCode, BruteForceGuard) {
    auto F = Field::make(11);
    const RSCode c(F, 7);  // 11^7 > 10^7
    const Word w = word_from_poly(c, UPoly::monomial(F, 7, F->one()));
    try {
        max_agreement(c, w);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::too_large_for_brute_force);
    }
}

TEST(RSCode, CanonicalTop) {
    auto F = Field::make(7);
    const RSCode c(F, 2);
    // 3T^4 + 6T^3 + 2T^2 + T + 5 -> T^4 + 2T^3 + 3T^2 (div by 3)
    const TopPoly t = canonical_top(c, up(F, {5, 1, 2, 6, 3}));
    EXPECT_EQ(t.d, 2u);
    EXPECT_EQ(t.lows, (std::vector<Felt>{Felt{3}, Felt{2}}));
    try {
        canonical_top(c, up(F, {1, 1}));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::degree_out_of_range);
    }
    // the distance of a word depends only on its canonical top part
    const Word w1 = word_from_poly(c, up(F, {5, 1, 2, 6, 3}));
    const Word w2 = word_from_top(c, t);
    EXPECT_EQ(distance_to_code(c, w1), distance_to_code(c, w2));
}
