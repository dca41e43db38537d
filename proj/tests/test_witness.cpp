#include <gtest/gtest.h>

#include <random>

#include "deephole/witness.hpp"

using namespace deephole;

namespace {

std::vector<Felt> felts(std::initializer_list<std::uint32_t> v) {
    std::vector<Felt> out;
    for (auto x : v) out.push_back(Felt{x});
    return out;
}

// Oracle for the search: all (k+1)-subsets of units, lexicographic, first zero.
std::optional<std::vector<Felt>> naive_first_point(const TopPoly& f, const RSCode& code) {
    const auto units = code.field()->units();
    const std::size_t r = f.k + 1, n = units.size();
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        std::vector<Felt> x;
        for (auto i : idx) x.push_back(units[i]);
        if (eval_hf(f, x).rep == 0) return x;
        std::size_t j = r;
        while (j > 0 && idx[j - 1] == n - r + j - 1) --j;
        if (j == 0) return std::nullopt;
        ++idx[j - 1];
        for (std::size_t t = j; t < r; ++t) idx[t] = idx[t - 1] + 1;
    }
}

}  // namespace

TEST(Search, FindsExampleWitness) {
    auto F = Field::make(7);
    const RSCode code(F, 2);
    const TopPoly f(F, 2, 1, felts({0}));  // T^3
    const SearchResult res = search_good_point(f, code);
    ASSERT_EQ(res.status, SearchStatus::found);
    EXPECT_EQ(res.cert->point, felts({1, 2, 4}));
    EXPECT_EQ(res.cert->r, UPoly(F, felts({1})));
    EXPECT_GE(res.cert->agreements, 3u);
    EXPECT_LE(res.cert->distance_bound, 3u);
}

TEST(Search, NoWitnessForDegreeTwoMonomial) {
    // k=2, d=0: T^2 is a deep hole and H_f is the constant 1
    auto F = Field::make(7);
    const RSCode code(F, 2);
    const SearchResult res = search_good_point(TopPoly::monomial(F, 2, 0), code);
    EXPECT_EQ(res.status, SearchStatus::no_witness);
    EXPECT_EQ(res.evaluations, 20u);  // C(6,3)
}

TEST(Search, BudgetAndDimensionGuards) {
    auto F = Field::make(7);
    const RSCode code(F, 2);
    SearchOptions opt;
    opt.budget = 5;
    const SearchResult res = search_good_point(TopPoly::monomial(F, 2, 0), code, opt);
    EXPECT_EQ(res.status, SearchStatus::budget_exhausted);
    EXPECT_EQ(res.evaluations, 5u);

    const RSCode wide(F, 6);
    try {
        search_good_point(TopPoly::monomial(F, 6, 1), wide);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::invalid_dimensions);
    }
}

TEST(Search, MatchesNaiveOracleAndThreadsAgree) {
    std::mt19937_64 rng(0x5EED);
    for (auto F : {Field::make(7), Field::make(11), Field::make(3, 2)}) {
        for (std::size_t k = 2; k <= 4; ++k) {
            const RSCode code(F, k);
            for (int t = 0; t < 10; ++t) {
                const std::size_t d = 1 + rng() % std::min<std::size_t>(3, F->q() - 2 - k);
                std::vector<Felt> lows(d);
                for (auto& v : lows) v = Felt{static_cast<std::uint32_t>(rng() % F->q())};
                const TopPoly f(F, k, d, lows);
                const auto expect = naive_first_point(f, code);
                const SearchResult one = search_good_point(f, code);
                SearchOptions opt;
                opt.threads = 4;
                const SearchResult many = search_good_point(f, code, opt);
                ASSERT_EQ(one.status == SearchStatus::found, expect.has_value());
                EXPECT_EQ(many.status, one.status);
                if (expect) {
                    EXPECT_EQ(one.cert->point, *expect);
                    EXPECT_EQ(many.cert->point, *expect);
                }
            }
        }
    }
}

TEST(Certificate, RejectsBadPoints) {
    auto F = Field::make(7);
    const RSCode code(F, 2);
    const TopPoly f(F, 2, 1, felts({0}));
    auto code_of = [&](std::vector<Felt> x) {
        try {
            certificate_from_point(f, code, x);
        } catch (const error& e) {
            return e.code();
        }
        return errc::invalid_params;
    };
    EXPECT_EQ(code_of(felts({0, 2, 4})), errc::not_a_witness);
    EXPECT_EQ(code_of(felts({2, 2, 4})), errc::not_a_witness);
    EXPECT_EQ(code_of(felts({1, 2, 3})), errc::not_a_witness);
    EXPECT_EQ(code_of(felts({1, 2})), errc::not_a_witness);
    EXPECT_NO_THROW(certificate_from_point(f, code, felts({1, 2, 4})));
}

TEST(ArtinSchreier, F25Example) {
    auto F = Field::make(5, 2);
    const ASWitness as = artin_schreier_witness(F, 7, 3);
    EXPECT_EQ(as.b_list.size(), 2u);
    EXPECT_EQ(as.root_count, 10u);
    for (Felt r : as.roots) EXPECT_NE(r.rep, 0u);
    EXPECT_EQ(as.h.degree(), 6);
    EXPECT_EQ(as.agreements, 10u);
    EXPECT_EQ(as.distance, 14u);
    EXPECT_LT(as.distance, as.n - as.k);
    // independent check: T^{10} and the codeword agree exactly on the roots of g
    const RSCode code(F, 7);
    const Word w = word_from_poly(code, UPoly::monomial(F, 10, F->one()));
    const Word c = word_from_poly(code, as.codeword);
    for (std::size_t i = 0; i < code.n(); ++i) {
        const Felt x = code.eval_order()[i];
        const bool root = as.g.eval(x).rep == 0;
        EXPECT_EQ(w.symbols[i] == c.symbols[i], root);
    }
}

TEST(ArtinSchreier, HypothesisOrder) {
    auto code_msg = [](std::uint32_t p, std::uint32_t s, std::size_t k, std::size_t d) {
        try {
            artin_schreier_witness(Field::make(p, s), k, d);
        } catch (const error& e) {
            EXPECT_EQ(e.code(), errc::hypothesis_violated);
            return std::string(e.what());
        }
        return std::string("ok");
    };
    EXPECT_NE(code_msg(5, 2, 7, 4).find("p>d+1"), std::string::npos);
    EXPECT_NE(code_msg(5, 2, 8, 3).find("p|(k+d)"), std::string::npos);
    EXPECT_NE(code_msg(5, 1, 3, 2).find("q>k+d"), std::string::npos);
    EXPECT_NE(code_msg(5, 2, 2, 3).find("k>d"), std::string::npos);
}

TEST(Scan, SingularPointsHaveFewDistinctCoordinates) {
    for (auto F : {Field::make(5), Field::make(7)}) {
        for (std::size_t d = 2; d <= 3; ++d) {
            for (std::size_t k = d + 1; k <= 3; ++k) {
                const RSCode code(F, k);
                std::vector<Felt> lows(d, F->zero());
                lows[0] = F->one();
                for (const auto& f : {TopPoly::monomial(F, k, d), TopPoly(F, k, d, lows)}) {
                    const ScanResult res = scan_rational_singular_points(f, code);
                    EXPECT_LE(res.max_distinct, d - 1);
                    for (const auto& p : res.points) EXPECT_LE(p.distinct, d - 1);
                    const ScanResult threaded = scan_rational_singular_points(f, code, 3);
                    ASSERT_EQ(threaded.points.size(), res.points.size());
                    for (std::size_t i = 0; i < res.points.size(); ++i)
                        EXPECT_EQ(threaded.points[i].point, res.points[i].point);
                }
            }
        }
    }
}

TEST(Scan, InfinityIsAConeWithOrigin) {
    std::mt19937_64 rng(0x5EED);
    for (auto F : {Field::make(5), Field::make(7)}) {
        for (std::size_t d = 1; d <= 3; ++d) {
            const std::size_t k = d + 1;
            const RSCode code(F, k);
            std::vector<Felt> lows(d);
            for (auto& v : lows) v = Felt{static_cast<std::uint32_t>(rng() % F->q())};
            const ScanResult res = scan_infinity_singular(TopPoly(F, k, d, lows), code);
            std::set<std::vector<Felt>> pts;
            for (const auto& p : res.points) pts.insert(p.point);
            const std::vector<Felt> origin(k + 1, F->zero());
            // for d = 1 the gradient is all ones and nothing is singular
            EXPECT_EQ(pts.count(origin) == 1, d >= 2);
            for (const auto& x : pts)
                for (Felt l : F->units()) {
                    std::vector<Felt> y;
                    for (Felt v : x) y.push_back(F->mul(l, v));
                    EXPECT_TRUE(pts.count(y));
                }
        }
    }
}

TEST(Scan, Examples) {
    auto F = Field::make(5);
    const RSCode code(F, 2);
    const ScanResult res = scan_rational_singular_points(TopPoly::monomial(F, 2, 2), code);
    ASSERT_EQ(res.points.size(), 1u);
    EXPECT_EQ(res.points[0].point, felts({0, 0, 0}));
    EXPECT_EQ(res.max_distinct, 1u);
}

TEST(Scan, ExhaustiveGuard) {
    auto F = Field::make(11);
    const RSCode code(F, 8);
    try {
        scan_rational_singular_points(TopPoly::monomial(F, 8, 2), code);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::too_large_for_exhaustive);
    }
}

TEST(PointCounts, PartsAddUp) {
    auto F = Field::make(7);
    const TopPoly f(F, 3, 2, felts({1, 3}));
    const PointCounts pc = count_points(f);
    EXPECT_GE(pc.total, pc.good);
    EXPECT_LE(pc.good + pc.with_zero, pc.total + pc.with_repeat);
    // oracle: direct count
    std::uint64_t total = 0, good = 0;
    std::vector<Felt> x(4, F->zero());
    while (true) {
        if (eval_hf(f, x).rep == 0) {
            ++total;
            std::set<Felt> s(x.begin(), x.end());
            good += (s.size() == 4 && !s.count(F->zero()));
        }
        std::size_t j = 0;
        while (j < 4 && ++x[j].rep == 7) x[j++].rep = 0;
        if (j == 4) break;
    }
    EXPECT_EQ(pc.total, total);
    EXPECT_EQ(pc.good, good);
}
