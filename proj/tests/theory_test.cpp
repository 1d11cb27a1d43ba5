#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hyperconn/sampling.hpp"
#include "hyperconn/structure.hpp"
#include "hyperconn/theory.hpp"
#include "oracles.hpp"

using namespace hyperconn;
using namespace hyperconn::theory;
using oracle::rational;

namespace {

// computed independently at 34 significant digits
constexpr double lambda_100_50_2 = 3.595034820112118947633717858159109;
constexpr double mu_100_50_mixed = 3.105170185988091368035982909368728;
constexpr double disconnect_formula_at_minus_10 = 0.006829054836113873512994466708918;

constexpr double inf = std::numeric_limits<double>::infinity();

SizeProfile random_profile(std::mt19937_64& gen, bool below_n) {
    const auto n = std::uniform_int_distribution<std::uint32_t>(2, 300)(gen);
    const auto m = std::uniform_int_distribution<std::uint32_t>(1, 60)(gen);
    std::uniform_int_distribution<std::uint32_t> size(0, below_n ? n - 1 : n);
    SizeProfile p{n, {}};
    for (std::uint32_t k = 0; k < m; ++k) p.sizes.push_back(size(gen));
    return p;
}

double slack(double v) { return 1e-12 + 1e-12 * std::abs(v); }

}  // namespace

TEST(Lambda, SmallSizesGiveLogN) {
    EXPECT_DOUBLE_EQ(lambda(50, 10, 1), std::log(50.0));
    EXPECT_DOUBLE_EQ(lambda(SizeProfile{50, {0, 1, 1}}), std::log(50.0));
}

TEST(Lambda, FullEdgeGivesMinusInfinity) {
    EXPECT_EQ(lambda(7, 3, 7), -inf);
    auto rep = threshold_report(product_law(7, 3, 7));
    EXPECT_EQ(rep.expected_isolated, 0.0);
    EXPECT_FALSE(rep.gap_bound.has_value());
}

TEST(Lambda, RegularValue) {
    EXPECT_NEAR(lambda(100, 50, 2), lambda_100_50_2, 1e-13);
    EXPECT_NEAR(lambda(SizeProfile::constant(100, 50, 2)), lambda_100_50_2, 1e-13);
}

TEST(Lambda, MatchesMonteCarloIsolatedMean) {
    RngStream rng(31, 0);
    const auto profile = SizeProfile::constant(100, 50, 2);
    const int trials = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double k = static_cast<double>(isolated_count(sample_shotgun(profile, rng)));
        sum += k;
        sum_sq += k * k;
    }
    const double mean = sum / trials;
    const double sd = std::sqrt((sum_sq / trials - mean * mean) / trials);
    EXPECT_NEAR(mean, std::exp(lambda_100_50_2), 3 * sd);
}

TEST(Mu, Examples) {
    EXPECT_DOUBLE_EQ(mu(SizeDistribution::dirac(20, 1), 9), std::log(20.0));
    EXPECT_DOUBLE_EQ(mu(SizeDistribution::dirac(20, 4), 9), std::log(20.0) - 9.0 * 4.0 / 20.0);
    auto f = SizeDistribution::from_pairs(100, {{2, 0.5}, {4, 0.5}});
    EXPECT_NEAR(mu(f, 50), mu_100_50_mixed, 1e-13);
}

TEST(GapBound, Examples) {
    EXPECT_EQ(mu_lambda_gap_bound(SizeProfile{30, {0, 1, 1, 0}}), 0.0);
    const double n = 100, m = 10, d = 5;
    const auto p = SizeProfile::constant(100, 10, 5);
    EXPECT_NEAR(mu_lambda_gap_bound(p), m * d * d / (n * n * (1 - d / n)), 1e-15);
    EXPECT_GE(mu_lambda_gap_bound(p), mu(p) - lambda(p));
    EXPECT_EQ(mu_lambda_gap_bound(SizeProfile{5, {2, 5}}), inf);
}

TEST(ThresholdProperty, LambdaBelowMuAndGapBound) {
    std::mt19937_64 gen(32);
    for (int i = 0; i < 10000; ++i) {
        auto p = random_profile(gen, i % 2 == 0);
        const auto rep = threshold_report(product_law(p));
        ASSERT_LE(rep.lambda, rep.mu + slack(rep.mu));
        if (rep.gap_bound) ASSERT_LE(rep.mu - rep.lambda, *rep.gap_bound + slack(rep.mu));
        const auto iso = isolation_probabilities(p);
        const double via_p1 = std::log(static_cast<double>(p.n)) + iso.log_p1;
        if (std::isfinite(rep.lambda)) {
            ASSERT_NEAR(via_p1, rep.lambda, slack(rep.lambda));
        } else {
            ASSERT_EQ(via_p1, rep.lambda);
        }
    }
}

TEST(ThresholdProperty, MixedLawsLambdaBelowMu) {
    std::mt19937_64 gen(33);
    for (int i = 0; i < 10000; ++i) {
        const auto n = std::uniform_int_distribution<std::uint32_t>(2, 200)(gen);
        const auto m = std::uniform_int_distribution<std::uint64_t>(1, 500)(gen);
        auto f = oracle::random_distribution(gen, n);
        const auto law = product_law(f, m);
        const double lam = lambda(law);
        const double mu_value = mu(law);
        ASSERT_LE(lam, mu_value + slack(mu_value));
        const double gap = mu_lambda_gap_bound(law);
        if (std::isfinite(gap) && std::isfinite(lam)) ASSERT_LE(mu_value - lam, gap + slack(mu_value));
    }
}

TEST(Isolation, Examples) {
    const auto iso = isolation_probabilities(SizeProfile::constant(40, 7, 3));
    EXPECT_NEAR(iso.p1(), std::pow(1 - 3.0 / 40, 7), 1e-15);

    // node 1 avoided by both of two independent 2-subsets of [4]
    std::uint64_t avoid = 0, total = 0;
    const auto subsets = oracle::subsets_of_size(4, 2);
    for (auto a : subsets) {
        for (auto b : subsets) {
            ++total;
            avoid += ((a | b) & 1U) == 0;
        }
    }
    EXPECT_EQ(total, 36U);
    EXPECT_NEAR(isolation_probabilities(SizeProfile::constant(4, 2, 2)).p1(), double(avoid) / total, 1e-15);
    EXPECT_DOUBLE_EQ(isolation_probabilities(SizeProfile::constant(4, 2, 2)).p1(), 0.25);

    std::uint64_t both = 0;
    for (auto a : subsets) both += (a & 3U) == 0;
    EXPECT_EQ(both, 1U);
    EXPECT_NEAR(isolation_probabilities(SizeProfile::constant(4, 1, 2)).p2(), 1.0 / 6.0, 1e-15);
}

TEST(Isolation, MixedLawMatchesExample) {
    const std::uint32_t n = 10000;
    const std::uint64_t m = 1000;
    const double p = 1.0 - std::pow(n, -1.0 / (2.0 * m));
    auto f = SizeDistribution::from_pairs(n, {{2, 1 - p}, {n, p}});
    const auto iso = isolation_probabilities(product_law(f, m));
    EXPECT_NEAR(iso.log_p1, m * (std::log1p(-p) + std::log1p(-2.0 / n)), 1e-10);
    EXPECT_GT(n * iso.p1(), 10.0);
    EXPECT_TRUE(std::isfinite(pair_ratio_bound(product_law(f, m))));
}

TEST(PairRatio, Examples) {
    EXPECT_EQ(pair_ratio_bound(product_law(SizeProfile::constant(30, 9, 4))), 0.0);
    auto f = SizeDistribution::from_pairs(10, {{2, 0.5}, {4, 0.5}});
    const auto law = product_law(f, 3);
    const auto iso = isolation_probabilities(law);
    EXPECT_GE(pair_ratio_bound(law), iso.log_p2 - 2 * iso.log_p1);
    EXPECT_THROW(pair_ratio_bound(product_law(SizeDistribution::dirac(5, 5), 2)), parameter_error);
}

TEST(PairRatio, FuzzedLaws) {
    std::mt19937_64 gen(34);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto n = std::uniform_int_distribution<std::uint32_t>(3, 200)(gen);
        const auto m = std::uniform_int_distribution<std::uint64_t>(1, 100)(gen);
        auto f = oracle::random_distribution(gen, n);
        if (f.weights[n] > 0.999) continue;
        const auto law = product_law(f, m);
        const auto iso = isolation_probabilities(law);
        if (!std::isfinite(iso.log_p2)) continue;
        ASSERT_LE(iso.log_p2 - 2 * iso.log_p1, pair_ratio_bound(law) + slack(iso.log_p1));
        ++checked;
    }
    EXPECT_GT(checked, 5000);
}

TEST(Sandwich, Examples) {
    EXPECT_EQ(isolated_sandwich(product_law(6, 2, 6)).lower, 1.0);
    const auto law = product_law(1000, 2000, 3);
    const auto s = isolated_sandwich(law);
    EXPECT_DOUBLE_EQ(s.upper, std::exp(-lambda(law)));
    EXPECT_DOUBLE_EQ(s.lower, 1 - std::exp(lambda(law)));
}

TEST(QExact, Examples) {
    EXPECT_EQ(q_exact(9, 3, 1), 1.0);
    EXPECT_EQ(q_exact(9, 3, 0), 1.0);
    EXPECT_EQ(q_exact_rational(4, 2, 2), rational(1, 3));
    EXPECT_EQ(q_exact_rational(4, 1, 2), rational(1, 2));
    EXPECT_EQ(q_exact_rational(4, 1, 4), rational(0));
    EXPECT_THROW(q_exact(4, 3, 2), parameter_error);
    EXPECT_THROW(q_exact(4, 0, 2), parameter_error);
}

TEST(QExact, MatchesEnumerationSmallN) {
    for (std::uint32_t n = 2; n <= 10; ++n) {
        for (std::uint32_t r = 1; 2 * r <= n; ++r) {
            for (std::uint32_t x = 0; x <= n; ++x) {
                const auto expected = oracle::cut_probability(n, r, x);
                ASSERT_EQ(q_exact_rational(n, r, x), expected);
                ASSERT_NEAR(q_exact(n, r, x), static_cast<double>(expected), 1e-14);
            }
        }
    }
}

TEST(QExact, LargeNAgreesWithExactBinomials) {
    for (std::uint32_t n : {100U, 257U}) {
        for (std::uint32_t r : {1U, 7U, n / 2}) {
            for (std::uint32_t x : {2U, 3U, 10U, r, n - r, n - r + 1}) {
                const auto total = rational(binomial_big(n, x));
                rational q = rational(binomial_big(n - r, x)) / total;
                if (x <= r) q += rational(binomial_big(r, x)) / total;
                const double expected = static_cast<double>(q);
                ASSERT_NEAR(q_exact(n, r, x), expected, 1e-11 * expected + 1e-300);
            }
        }
    }
}

TEST(QBounds, Examples) {
    const auto b = q_bounds_rational(4, 1, 2);
    EXPECT_EQ(b.shotgun, rational(5, 9));
    EXPECT_GE(b.shotgun, q_exact_rational(4, 1, 2));
    EXPECT_EQ(q_bounds_rational(4, 2, 2).pair, rational(1, 2));
    EXPECT_NEAR(q_bounds(4, 1, 2).shotgun, 5.0 / 9.0, 1e-15);
    EXPECT_EQ(q_exact(8, 3, 8), 0.0);
    EXPECT_GE(q_bounds(8, 3, 8).shotgun, 0.0);
    EXPECT_GE(q_bounds(8, 3, 8).pair, 0.0);
    EXPECT_THROW(q_bounds(8, 3, 1), parameter_error);
}

TEST(QProperty, NonincreasingAndDominatedUpTo30) {
    for (std::uint32_t n = 2; n <= 30; ++n) {
        for (std::uint32_t r = 1; 2 * r <= n; ++r) {
            rational prev = q_exact_rational(n, r, 2);
            for (std::uint32_t x = 2; x <= n; ++x) {
                const auto q = q_exact_rational(n, r, x);
                ASSERT_LE(q, prev) << n << " " << r << " " << x;
                prev = q;
                const auto br = q_bounds_rational(n, r, x);
                ASSERT_LE(q, br.shotgun);
                ASSERT_LE(q, br.pair);
                const auto bd = q_bounds(n, r, x);
                const double qd = q_exact(n, r, x);
                ASSERT_LE(qd, bd.shotgun + 1e-12);
                ASSERT_LE(qd, bd.pair + 1e-12);
            }
        }
    }
}

TEST(ExpectedQ, Examples) {
    auto small = SizeDistribution::from_pairs(10, {{0, 0.3}, {1, 0.7}});
    const auto b = expected_q_bounds(small, 3);
    EXPECT_EQ(expected_q_exact(small, 3), 1.0);
    EXPECT_GE(b.moment_bound, 1.0);
    EXPECT_GE(b.mass_bound, 1.0);

    const auto d2 = expected_q_bounds(SizeDistribution::dirac(4, 2), 1);
    EXPECT_NEAR(d2.mass_bound, std::exp(-3.0 / 8.0), 1e-15);
    EXPECT_GE(d2.mass_bound, expected_q_exact(SizeDistribution::dirac(4, 2), 1));
    EXPECT_DOUBLE_EQ(expected_q_exact(SizeDistribution::dirac(4, 2), 1), 0.5);

    auto mixed = SizeDistribution::from_pairs(10, {{2, 0.5}, {4, 0.5}});
    const auto bm = expected_q_bounds(mixed, 3);
    const double exact = expected_q_exact(mixed, 3);
    EXPECT_GE(bm.moment_bound, exact);
    EXPECT_GE(bm.mass_bound, exact);
}

TEST(ExpectedQ, FuzzedDistributions) {
    std::mt19937_64 gen(35);
    for (int i = 0; i < 10000; ++i) {
        const auto n = std::uniform_int_distribution<std::uint32_t>(2, 30)(gen);
        const auto r = std::uniform_int_distribution<std::uint32_t>(1, n / 2)(gen);
        auto f = oracle::random_distribution(gen, n);
        const double exact = expected_q_exact(f, r);
        const auto b = expected_q_bounds(f, r);
        ASSERT_LE(exact, b.moment_bound + 1e-12);
        ASSERT_LE(exact, b.mass_bound + 1e-12);
    }
}

TEST(DisconnectBound, Examples) {
    // lambda + 5 >= 0
    EXPECT_EQ(disconnect_upper_bound(100, 10, 2), inf);
    EXPECT_THROW(disconnect_upper_bound(100, 10, 1), parameter_error);

    // find m with lambda close to -10 and compare with the closed form at that lambda
    const std::uint32_t n = 100, d = 5;
    std::uint64_t m = 1;
    while (lambda(n, m, d) > -10) ++m;
    const double lam = lambda(n, m, d);
    double series = 0.0;
    for (int r = 1; r < 200; ++r) series += std::exp((lam + 5) * r);
    const double expected = std::exp(lam) + series + std::pow(2.0 / std::exp(1.0), n);
    EXPECT_NEAR(disconnect_upper_bound(n, m, d), expected, 1e-15);

    const double at_minus_10 = std::exp(-10.0) + std::exp(-5.0) / (1 - std::exp(-5.0)) + std::pow(2 / std::exp(1.0), 100);
    EXPECT_NEAR(at_minus_10, disconnect_formula_at_minus_10, 1e-15);
}

TEST(DisconnectBound, MonteCarlo) {
    const std::uint32_t n = 60, d = 6;
    std::uint64_t m = 1;
    while (lambda(n, m, d) > -7) ++m;
    const double bound = disconnect_upper_bound(n, m, d);
    ASSERT_LT(bound, 0.5);
    RngStream rng(36, 0);
    const int trials = 20000;
    int disconnected = 0;
    for (int t = 0; t < trials; ++t) {
        disconnected += !is_connected(sample_shotgun(SizeProfile::constant(n, m, d), rng));
    }
    const double rate = static_cast<double>(disconnected) / trials;
    EXPECT_LE(rate, bound + 3 * std::sqrt(bound * (1 - bound) / trials));
}

TEST(Distinct, Examples) {
    const auto none = distinct_probability(SizeCounts{8, {{2, 1}, {3, 1}, {5, 0}}});
    EXPECT_EQ(none.exact, 1.0);
    EXPECT_EQ(none.c, 0.0);

    const auto two = distinct_probability(SizeCounts{2, {{1, 2}}});
    EXPECT_DOUBLE_EQ(two.exact, 0.5);
    EXPECT_DOUBLE_EQ(two.lower, 0.5);
    EXPECT_DOUBLE_EQ(two.upper, std::exp(-0.5));
    std::uint32_t distinct = 0;
    for (std::uint32_t a = 1; a <= 2; ++a) {
        for (std::uint32_t b = 1; b <= 2; ++b) distinct += a != b;
    }
    EXPECT_EQ(distinct_probability_rational(SizeCounts{2, {{1, 2}}}).exact, rational(distinct, 4));

    EXPECT_EQ(distinct_probability(SizeCounts{4, {{2, 7}}}).exact, 0.0);
    EXPECT_EQ(distinct_probability_rational(SizeCounts{4, {{2, 7}}}).exact, rational(0));
}

TEST(Distinct, SandwichOnFuzzedCounts) {
    std::mt19937_64 gen(37);
    for (int i = 0; i < 1000; ++i) {
        const auto n = std::uniform_int_distribution<std::uint32_t>(1, 10)(gen);
        SizeCounts counts{n, {}};
        const auto classes = std::uniform_int_distribution<int>(1, 3)(gen);
        for (int c = 0; c < classes; ++c) {
            const auto x = std::uniform_int_distribution<std::uint32_t>(0, n)(gen);
            const auto cap = binomial_u64(n, x);
            counts.counts[x] = std::uniform_int_distribution<std::uint64_t>(0, cap)(gen);
        }
        const auto exact = distinct_probability_rational(counts);
        ASSERT_GE(exact.exact, 1 - exact.c);
        const auto p = distinct_probability(counts);
        ASSERT_NEAR(p.exact, static_cast<double>(exact.exact), 1e-12);
        ASSERT_LE(p.exact, p.upper + 1e-12);
        ASSERT_GE(p.exact, p.lower - 1e-12);
    }
}

TEST(Shotgun, Examples) {
    EXPECT_EQ(shotgun_probability(10, 0, 4).exact, 1.0);
    EXPECT_EQ(shotgun_probability(10, 4, 0).exact, 1.0);
    const auto s = shotgun_probability_rational(4, 2, 1);
    EXPECT_EQ(s.exact, rational(1, 2));
    EXPECT_EQ(s.swapped, rational(1, 2));
    EXPECT_EQ(s.bound_r, rational(9, 16));
    EXPECT_EQ(s.bound_d, rational(1, 2));
    EXPECT_TRUE(s.bounds_hold());
    EXPECT_NEAR(shotgun_probability(4, 2, 1).exact, 0.5, 1e-15);
    EXPECT_THROW(shotgun_probability(4, 3, 2), parameter_error);
}

TEST(Shotgun, SwapIdentityUpTo40) {
    for (std::uint32_t n = 0; n <= 40; ++n) {
        for (std::uint32_t d = 0; d <= n; ++d) {
            for (std::uint32_t r = 0; d + r <= n; ++r) {
                const auto s = shotgun_probability_rational(n, d, r);
                ASSERT_TRUE(s.identity_holds()) << n << " " << d << " " << r;
                ASSERT_TRUE(s.bounds_hold()) << n << " " << d << " " << r;
            }
        }
    }
}

TEST(Elementary, Examples) {
    const auto t = log_taylor(0.5);
    EXPECT_DOUBLE_EQ(t.first_lower, -1.0);
    EXPECT_DOUBLE_EQ(t.first_upper, -0.5);
    EXPECT_DOUBLE_EQ(t.second_lower, -1.0);
    EXPECT_DOUBLE_EQ(t.second_upper, -0.625);
    EXPECT_GT(t.margin(), 0.0);

    const auto b = binom_sandwich(9, 9);
    EXPECT_EQ(b.lower, rational(1));
    EXPECT_EQ(b.binom, rational(1));
    EXPECT_TRUE(b.holds());

    const auto ratio = binom_ratio(4, 1, 2);
    EXPECT_EQ(ratio.ratio, rational(2, 3));
    EXPECT_EQ(ratio.bound, rational(2, 3));
    EXPECT_TRUE(ratio.holds());
    EXPECT_LT(e_lower_bound(), rational(27183, 10000));
    EXPECT_GT(e_lower_bound(), rational(27182, 10000));
}

TEST(Elementary, SuitePasses) {
    const auto rep = elementary_bounds_suite();
    EXPECT_TRUE(rep.ok()) << (rep.failures.empty() ? "" : rep.failures.front());
    EXPECT_GT(rep.checks, 10000U);
}
