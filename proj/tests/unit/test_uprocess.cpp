#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_support.hpp"
#include "ucpd/error.hpp"
#include "ucpd/uprocess.hpp"

using namespace ucpd;
using ucpd::testing::close_rel;
using ucpd::testing::kind_for;
using ucpd::testing::random_series;
using ucpd::testing::SeriesKind;

namespace {

void expect_values(const UProcess& up, const std::vector<double>& expected, double tol = 0.0) {
    ASSERT_EQ(up.values.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_NEAR(up.values[i], expected[i], tol) << "k=" << i + 1;
    }
}

void expect_match_oracle(const UProcess& fast, const UProcess& oracle, double rel_tol) {
    ASSERT_EQ(fast.values.size(), oracle.values.size());
    for (std::size_t i = 0; i < oracle.values.size(); ++i) {
        ASSERT_TRUE(close_rel(fast.values[i], oracle.values[i], rel_tol))
            << to_string(fast.strategy) << " k=" << i + 1 << ": " << fast.values[i] << " vs "
            << oracle.values[i];
    }
}

}  // namespace

TEST(UProcessOracle, Examples) {
    const std::vector<double> step{0, 0, 1, 1};
    expect_values(u_process_oracle(step, Kernel::cusum()), {2, 4, 2});
    const std::vector<double> inc{1, 2, 3, 4};
    expect_values(u_process_oracle(inc, Kernel::wilcoxon()), {1.5, 2, 1.5});
    const std::vector<double> flat(6, -3.0);
    for (const Kernel& k : {Kernel::cusum(), Kernel::wilcoxon(), Kernel::huber(1.0)}) {
        expect_values(u_process_oracle(flat, k), std::vector<double>(5, 0.0));
    }
}

TEST(UProcessOracle, MatchesLiteralDoubleSum) {
    std::mt19937_64 rng(11);
    const auto x = random_series(rng, 40, SeriesKind::student_t3);
    const auto brute = ucpd::testing::brute_u_process(x, [](double a, double b) { return b - a; });
    expect_values(u_process_oracle(x, Kernel::cusum()), brute, 1e-9);
}

TEST(UProcessOracle, TooShortIsSizeError) {
    const std::vector<double> one{1.0};
    EXPECT_THROW(u_process_oracle(one, Kernel::cusum()), SizeError);
    EXPECT_THROW(u_process_incremental(one, Kernel::cusum()), SizeError);
    EXPECT_THROW(u_process_rank_fast(one), SizeError);
    EXPECT_THROW(u_process_linear(one), SizeError);
}

TEST(UProcessIncremental, Examples) {
    const std::vector<double> step{0, 0, 1, 1};
    expect_values(u_process_incremental(step, Kernel::cusum()), {2, 4, 2});
    const std::vector<double> pair{2.5, -1.0};
    expect_values(u_process_incremental(pair, Kernel::cusum()), {-3.5});
    EXPECT_EQ(u_process_incremental(pair, Kernel::cusum()).strategy, Strategy::incremental);
}

TEST(UProcessRankFast, Examples) {
    const std::vector<double> inc{1, 2, 3, 4};
    expect_values(u_process_rank_fast(inc), {1.5, 2, 1.5});
    const std::vector<double> flat(5, 9.0);
    expect_values(u_process_rank_fast(flat), std::vector<double>(4, 0.0));
    const std::vector<double> ties{1, 1, 2};
    expect_values(u_process_rank_fast(ties), u_process_oracle(ties, Kernel::wilcoxon()).values);
}

TEST(UProcessStrategies, AgreeWithOracle) {
    std::mt19937_64 rng(424242);
    const std::size_t sizes[] = {10, 50, 200};
    for (std::size_t rep = 0; rep < 100; ++rep) {
        const auto x = random_series(rng, sizes[rep % 3], kind_for(rep / 3));
        for (const Kernel& k : {Kernel::cusum(), Kernel::wilcoxon(), Kernel::sign(), Kernel::huber(0.8)}) {
            const UProcess oracle = u_process_oracle(x, k);
            expect_match_oracle(u_process_incremental(x, k), oracle, 1e-9);
            expect_match_oracle(u_process(x, k), oracle, 1e-9);
            if (k.has_rank_fastpath()) expect_match_oracle(u_process_rank_fast(x), oracle, 1e-9);
            if (k.id() == KernelId::cusum) expect_match_oracle(u_process_linear(x), oracle, 1e-9);
        }
    }
}

TEST(UProcessStrategies, IncrementalIsBitReproducible) {
    std::mt19937_64 rng(3);
    const auto x = random_series(rng, 120, SeriesKind::normal);
    EXPECT_EQ(u_process_incremental(x, Kernel::huber(1.0)).values,
              u_process_incremental(x, Kernel::huber(1.0)).values);
}

TEST(UProcessProperties, TimeReversalNegatesAndReverses) {
    std::mt19937_64 rng(8);
    for (std::size_t rep = 0; rep < 12; ++rep) {
        const auto x = random_series(rng, 30, kind_for(rep));
        std::vector<double> rev(x.rbegin(), x.rend());
        for (const Kernel& k : {Kernel::cusum(), Kernel::wilcoxon(), Kernel::huber(1.0)}) {
            const UProcess fwd = u_process_oracle(x, k);
            const UProcess bwd = u_process_oracle(rev, k);
            const std::size_t n = x.size();
            for (std::size_t kk = 1; kk < n; ++kk) {
                ASSERT_TRUE(close_rel(bwd.at(kk), -fwd.at(n - kk), 1e-9));
            }
        }
    }
}

TEST(UProcessProperties, ShiftAndMonotoneInvariance) {
    std::mt19937_64 rng(21);
    for (std::size_t rep = 0; rep < 20; ++rep) {
        const auto x = random_series(rng, 60, kind_for(rep));
        std::vector<double> shifted(x);
        for (double& v : shifted) v += 17.25;
        std::vector<double> cubed(x);
        for (double& v : cubed) v = v * v * v + 3.0 * v;  // strictly increasing
        for (const Kernel& k : {Kernel::cusum(), Kernel::wilcoxon()}) {
            const UProcess a = u_process(x, k);
            const UProcess b = u_process(shifted, k);
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                ASSERT_TRUE(close_rel(b.values[i], a.values[i], 1e-9));
            }
        }
        EXPECT_EQ(u_process_rank_fast(cubed).values, u_process_rank_fast(x).values);
    }
}

// U_k = (n-k) sum_{i<=k} h1_i - k sum_{i>k} h1_i + sum_{i<=k} sum_{j>k} psi_ij
TEST(UProcessProperties, HoeffdingSplitIdentity) {
    std::mt19937_64 rng(55);
    for (std::size_t rep = 0; rep < 30; ++rep) {
        const std::size_t n = 5 + rep * 2;
        const auto x = random_series(rng, n, kind_for(rep));
        for (const Kernel& k : {Kernel::cusum(), Kernel::wilcoxon(), Kernel::huber(1.2)}) {
            // empirical projection, and an arbitrary one (the identity is algebraic)
            std::vector<double> arbitrary(n);
            for (std::size_t i = 0; i < n; ++i) arbitrary[i] = std::sin(x[i]);
            for (const auto& parts :
                 {hoeffding_decompose(k, x), HoeffdingParts(k, x, arbitrary)}) {
                const UProcess up = u_process_oracle(x, k);
                const auto h1 = parts.h1();
                for (std::size_t kk = 1; kk < n; ++kk) {
                    double left = 0.0, right = 0.0, deg = 0.0;
                    for (std::size_t i = 0; i < kk; ++i) left += h1[i];
                    for (std::size_t i = kk; i < n; ++i) right += h1[i];
                    for (std::size_t i = 0; i < kk; ++i) {
                        for (std::size_t j = kk; j < n; ++j) deg += parts.psi(i, j);
                    }
                    const double split = static_cast<double>(n - kk) * left -
                                         static_cast<double>(kk) * right + deg;
                    ASSERT_TRUE(close_rel(split, up.at(kk), 1e-9)) << k.name() << " k=" << kk;
                }
            }
        }
    }
}

TEST(WeightedScan, Examples) {
    const UProcess up{{2, 4, 2}, 4, Kernel::cusum(), Strategy::oracle};
    const ScanResult half = weighted_scan(up, 0.5);
    EXPECT_DOUBLE_EQ(half.max_value, 1.0);
    EXPECT_EQ(half.argmax_k, 2u);
    const ScanResult zero = weighted_scan(up, 0.0);
    EXPECT_DOUBLE_EQ(zero.max_value, 0.5);
    EXPECT_EQ(zero.argmax_k, 2u);

    const UProcess flat{{0, 0, 0, 0}, 5, Kernel::cusum(), Strategy::oracle};
    const ScanResult none = weighted_scan(flat, 0.5);
    EXPECT_EQ(none.max_value, 0.0);
    EXPECT_EQ(none.argmax_k, 1u);
}

TEST(WeightedScan, SmallestArgmaxOnTies) {
    const UProcess up{{3, 1, 3}, 4, Kernel::cusum(), Strategy::oracle};
    EXPECT_EQ(weighted_scan(up, 0.5).argmax_k, 1u);
    EXPECT_EQ(weighted_scan(up, 0.0).argmax_k, 1u);
}

TEST(WeightedScan, GeneralGammaFormula) {
    const UProcess up{{2, 4, 2}, 4, Kernel::cusum(), Strategy::oracle};
    const double gamma = 0.25;
    double best = 0.0;
    for (int k = 1; k <= 3; ++k) {
        const double w = std::pow((k / 4.0) * (1.0 - k / 4.0), -gamma) / std::pow(4.0, 1.5);
        best = std::max(best, w * up.at(k));
    }
    EXPECT_NEAR(weighted_scan(up, gamma).max_value, best, 1e-15);
    // continuity into the two calibrated endpoints
    EXPECT_NEAR(weighted_scan(up, 0.5 - 1e-12).max_value, 1.0, 1e-9);
    EXPECT_NEAR(weighted_scan(up, 1e-12).max_value, 0.5, 1e-9);
}

TEST(WeightedScan, GammaOutOfRangeIsDomainError) {
    const UProcess up{{2, 4, 2}, 4, Kernel::cusum(), Strategy::oracle};
    EXPECT_THROW(weighted_scan(up, -0.01), DomainError);
    EXPECT_THROW(weighted_scan(up, 0.51), DomainError);
    EXPECT_THROW(weighted_scan(up, std::nan("")), DomainError);
}

TEST(PartialSums, Examples) {
    EXPECT_EQ(partial_sums(std::vector<double>{1, -1, 2}), (std::vector<double>{1, 0, 2}));
    EXPECT_EQ(partial_sums(std::vector<double>(3, 0.0)), std::vector<double>(3, 0.0));
    EXPECT_EQ(partial_sums(std::vector<double>{4.5}), std::vector<double>{4.5});
    EXPECT_THROW(partial_sums(std::vector<double>{}), SizeError);
}

TEST(TiedDownScan, Examples) {
    const ScanResult r = tied_down_scan(partial_sums(std::vector<double>{-1, -1, 1, 1}));
    EXPECT_DOUBLE_EQ(r.max_value, 2.0);
    EXPECT_EQ(r.argmax_k, 2u);

    const ScanResult flat = tied_down_scan(partial_sums(std::vector<double>(10, 0.75)));
    EXPECT_NEAR(flat.max_value, 0.0, 1e-14);
    EXPECT_EQ(weighted_scan(u_process_linear(std::vector<double>(10, 0.3)), 0.5).max_value, 0.0);

    const std::vector<double> s{1.5, 4.0};
    EXPECT_DOUBLE_EQ(tied_down_scan(s).max_value, std::sqrt(2.0) * std::abs(1.5 - 2.0));
    EXPECT_THROW(tied_down_scan(std::vector<double>{1.0}), SizeError);
}

// ĥ1 for cusum is mean - x, so the weighted CUSUM scan is the tied-down scan.
TEST(TiedDownScan, EqualsWeightedCusumScan) {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const auto x = random_series(rng, 80, SeriesKind::normal);
        const ScanResult a = weighted_scan(u_process_linear(x), 0.5);
        const ScanResult b = tied_down_scan(partial_sums(x));
        EXPECT_NEAR(a.max_value, b.max_value, 1e-12);
        EXPECT_EQ(a.argmax_k, b.argmax_k);
    }
}

TEST(DarlingErdosScan, Examples) {
    // 2/sqrt(3) > 1, so the last index wins
    const ScanResult a = darling_erdos_scan(std::vector<double>{1, 0, 2});
    EXPECT_DOUBLE_EQ(a.max_value, 2.0 / std::sqrt(3.0));
    EXPECT_EQ(a.argmax_k, 3u);
    const ScanResult c = darling_erdos_scan(std::vector<double>{1, 0, 1.5});
    EXPECT_DOUBLE_EQ(c.max_value, 1.0);
    EXPECT_EQ(c.argmax_k, 1u);
    const ScanResult z = darling_erdos_scan(std::vector<double>(4, 0.0));
    EXPECT_EQ(z.max_value, 0.0);
    EXPECT_EQ(z.argmax_k, 1u);
    const ScanResult b = darling_erdos_scan(std::vector<double>{0, 0, 3});
    EXPECT_DOUBLE_EQ(b.max_value, std::sqrt(3.0));
    EXPECT_EQ(b.argmax_k, 3u);
    EXPECT_THROW(darling_erdos_scan(std::vector<double>{}), SizeError);
}

// max_k |sum_{j<=k} a_j sqrt(j)| / sqrt(k) <= 2 max_k |sum_{j<=k} a_j|
TEST(MaximalInequality, HoldsOnRandomVectors) {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> len(1, 100);
    std::normal_distribution<double> normal;
    std::cauchy_distribution<double> heavy;
    for (int rep = 0; rep < 10000; ++rep) {
        const int n = len(rng);
        std::vector<double> a(n);
        for (double& v : a) v = rep % 2 ? normal(rng) : heavy(rng);
        double weighted = 0.0, plain = 0.0, lhs = 0.0, rhs = 0.0;
        for (int k = 1; k <= n; ++k) {
            weighted += a[k - 1] * std::sqrt(static_cast<double>(k));
            plain += a[k - 1];
            lhs = std::max(lhs, std::abs(weighted) / std::sqrt(static_cast<double>(k)));
            rhs = std::max(rhs, std::abs(plain));
        }
        ASSERT_LE(lhs, 2.0 * rhs * (1.0 + 1e-12)) << "rep " << rep;
    }
}
