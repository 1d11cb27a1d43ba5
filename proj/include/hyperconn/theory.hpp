#pragma once

// Closed-form thresholds, isolation and cut probabilities, and the explicit
// finite-n bounds that accompany them. Products of probabilities are carried
// as sums of logs; -inf is a legal value for lambda (a surely-full edge).

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hyperconn/error.hpp"
#include "hyperconn/model.hpp"
#include "hyperconn/numeric.hpp"

namespace hyperconn::theory {

// Mean size counting only sizes >= 2 (the x-tilde of a single edge law).
inline double effective_mean(const EdgeLaw& f) {
    compensated_sum acc;
    for (auto [x, p] : f.support) {
        if (x >= 2) acc.add(static_cast<double>(x) * p);
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// Thresholds

// log of the expected number of isolated nodes in the shotgun model:
// log n + sum_k log(1 - x~_k / n).
inline double lambda(const ProductLaw& law) {
    const double n = law.n;
    compensated_sum acc;
    acc.add(std::log(n));
    for (const auto& f : law.factors) {
        const double term = log1m(effective_mean(f) / n);
        if (term == neg_inf) return neg_inf;
        acc.add(static_cast<double>(f.multiplicity) * term);
    }
    return acc.value();
}

inline double lambda(const SizeProfile& profile) { return lambda(product_law(profile)); }
inline double lambda(std::uint32_t n, std::uint64_t m, std::uint32_t d) {
    return lambda(product_law(n, m, d));
}

// log n - (m / n) (F)_1
inline double mu(const ProductLaw& law) {
    const double n = law.n;
    compensated_sum acc;
    for (const auto& f : law.factors) {
        acc.add(static_cast<double>(f.multiplicity) * effective_mean(f));
    }
    return std::log(n) - acc.value() / n;
}

inline double mu(const SizeProfile& profile) { return mu(product_law(profile)); }
inline double mu(const SizeDistribution& f, std::uint64_t m) { return mu(product_law(f, m)); }

// (1/n^2) sum_k x~_k^2 / (1 - x~_k/n), an upper bound on mu - lambda.
// +inf when some edge is surely full.
inline double mu_lambda_gap_bound(const ProductLaw& law) {
    const double n = law.n;
    compensated_sum acc;
    for (const auto& f : law.factors) {
        const double xt = effective_mean(f);
        if (xt >= n) return pos_inf;
        acc.add(static_cast<double>(f.multiplicity) * xt * xt / (1.0 - xt / n));
    }
    return acc.value() / (n * n);
}

inline double mu_lambda_gap_bound(const SizeProfile& profile) {
    return mu_lambda_gap_bound(product_law(profile));
}

struct ThresholdReport {
    double lambda = 0.0;
    double mu = 0.0;
    double expected_isolated = 0.0;  // exp(lambda)
    std::optional<double> gap_bound;
};

inline ThresholdReport threshold_report(const ProductLaw& law) {
    ThresholdReport rep;
    rep.lambda = lambda(law);
    rep.mu = mu(law);
    rep.expected_isolated = std::exp(rep.lambda);
    const double gap = mu_lambda_gap_bound(law);
    if (std::isfinite(gap)) rep.gap_bound = gap;
    return rep;
}

// ---------------------------------------------------------------------------
// Isolation probabilities

inline double phi1(std::uint32_t n, std::uint32_t x) {
    return x >= 2 ? 1.0 - static_cast<double>(x) / n : 1.0;
}

inline double phi2(std::uint32_t n, std::uint32_t x) {
    if (x < 2) return 1.0;
    const double v = (1.0 - static_cast<double>(x) / n) * (1.0 - static_cast<double>(x) / (n - 1.0));
    return v > 0.0 ? v : 0.0;
}

struct IsolationProbabilities {
    double log_p1 = 0.0;  // log P(a fixed node is isolated)
    double log_p2 = 0.0;  // log P(two fixed nodes are both isolated)

    double p1() const { return std::exp(log_p1); }
    double p2() const { return std::exp(log_p2); }
};

inline IsolationProbabilities isolation_probabilities(const ProductLaw& law) {
    compensated_sum l1;
    compensated_sum l2;
    bool p2_zero = law.n < 2;
    for (const auto& f : law.factors) {
        compensated_sum e1;
        compensated_sum e2;
        for (auto [x, p] : f.support) {
            e1.add(p * phi1(law.n, x));
            if (!p2_zero) e2.add(p * phi2(law.n, x));
        }
        const auto mult = static_cast<double>(f.multiplicity);
        l1.add(e1.value() > 0.0 ? mult * std::log(e1.value()) : neg_inf);
        if (!p2_zero) l2.add(e2.value() > 0.0 ? mult * std::log(e2.value()) : neg_inf);
    }
    return {l1.value(), p2_zero ? neg_inf : l2.value()};
}

inline IsolationProbabilities isolation_probabilities(const SizeProfile& profile) {
    return isolation_probabilities(product_law(profile));
}

// sum_k Var(phi1(X_k)) / (E phi1(X_k))^2, an upper bound on log(P2 / P1^2).
inline double pair_ratio_bound(const ProductLaw& law) {
    compensated_sum acc;
    for (const auto& f : law.factors) {
        compensated_sum mean_acc;
        for (auto [x, p] : f.support) mean_acc.add(p * phi1(law.n, x));
        const double mean = mean_acc.value();
        if (!(mean > 0.0)) {
            throw parameter_error("pair_ratio_bound: an edge law covers every node surely");
        }
        compensated_sum var_acc;
        for (auto [x, p] : f.support) {
            const double dev = phi1(law.n, x) - mean;
            var_acc.add(p * dev * dev);
        }
        acc.add(static_cast<double>(f.multiplicity) * var_acc.value() / (mean * mean));
    }
    return acc.value();
}

struct Sandwich {
    double lower = 0.0;
    double upper = 0.0;
};

// Bounds on P(no isolated nodes): 1 - e^lambda from Markov, and
// e^{-lambda} + exp(pair ratio bound) - 1 from Chebyshev.
inline Sandwich isolated_sandwich(const ProductLaw& law) {
    const double lam = lambda(law);
    Sandwich s;
    s.lower = lam == neg_inf ? 1.0 : -std::expm1(lam);
    if (lam == neg_inf) {
        s.upper = pos_inf;
        return s;
    }
    s.upper = std::exp(-lam) + std::expm1(pair_ratio_bound(law));
    return s;
}

// ---------------------------------------------------------------------------
// Cut probabilities q_r(x): a uniform x-subset of [n] lies inside [r] or
// inside its complement.

namespace detail {

inline void check_cut_args(std::uint32_t n, std::uint32_t r, std::uint32_t x) {
    if (r < 1 || 2ULL * r > n) throw parameter_error("cut size r must satisfy 1 <= r <= n/2");
    if (x > n) throw parameter_error("subset size x exceeds n");
}

}  // namespace detail

inline rational q_exact_rational(std::uint32_t n, std::uint32_t r, std::uint32_t x) {
    detail::check_cut_args(n, r, x);
    if (n > exact_binomial_limit) throw parameter_error("q_exact_rational: n exceeds exact limit");
    if (x <= 1) return 1;
    if (x > n - r) return 0;
    const rational total(binomial_u64(n, x));
    rational q = rational(binomial_u64(n - r, x)) / total;
    if (x <= r) q += rational(binomial_u64(r, x)) / total;
    return q;
}

inline double q_exact(std::uint32_t n, std::uint32_t r, std::uint32_t x) {
    detail::check_cut_args(n, r, x);
    if (n <= exact_binomial_limit) return to_double(q_exact_rational(n, r, x));
    if (x <= 1) return 1.0;
    if (x > n - r) return 0.0;
    double q = std::exp(log_avoid_probability(n, r, x));
    if (x <= r) q += std::exp(log_avoid_probability(n, n - r, x));
    return q;
}

struct QBounds {
    double shotgun = 0.0;  // (1 + (r/(n-r))^x) (1 - x/n)^r
    double pair = 0.0;     // 1 - 2 (r/n)(1 - r/n)
};

struct QBoundsRational {
    rational shotgun;
    rational pair;
};

inline QBoundsRational q_bounds_rational(std::uint32_t n, std::uint32_t r, std::uint32_t x) {
    detail::check_cut_args(n, r, x);
    if (x < 2) throw parameter_error("q_bounds: x must be at least 2");
    const rational ratio(r, n - r);
    const rational keep(n - x, n);
    const rational frac(r, n);
    return {(1 + pow_rational(ratio, x)) * pow_rational(keep, r), 1 - 2 * frac * (1 - frac)};
}

inline QBounds q_bounds(std::uint32_t n, std::uint32_t r, std::uint32_t x) {
    detail::check_cut_args(n, r, x);
    if (x < 2) throw parameter_error("q_bounds: x must be at least 2");
    const double nd = n;
    const double rd = r;
    const double ratio_pow = std::exp(static_cast<double>(x) * std::log(rd / (nd - rd)));
    const double keep_pow = x == n ? 0.0 : std::exp(rd * std::log1p(-static_cast<double>(x) / nd));
    return {(1.0 + ratio_pow) * keep_pow, 1.0 - 2.0 * (rd / nd) * (1.0 - rd / nd)};
}

// E q_r(X) for X ~ f, by exact summation over the support.
inline double expected_q_exact(const SizeDistribution& f, std::uint32_t r) {
    f.ensure_valid();
    compensated_sum acc;
    for (std::uint32_t x = 0; x < f.weights.size(); ++x) {
        if (f.weights[x] > 0.0) acc.add(f.weights[x] * q_exact(f.n, r, x));
    }
    return acc.value();
}

struct ExpectedQBounds {
    // 1 - (r/n) E X1(X>=2) + (r/(n-r))^2 P(X>=2) + (1/2)(r/n)^2 E X^2 1(X>=2)
    double moment_bound = 0.0;
    // P(X<2) + exp(-2 (r/n)(1 - r/n)) P(X>=2)
    double mass_bound = 0.0;
};

inline ExpectedQBounds expected_q_bounds(const SizeDistribution& f, std::uint32_t r) {
    f.ensure_valid();
    detail::check_cut_args(f.n, r, 0);
    const double n = f.n;
    const double rn = r / n;
    compensated_sum small_mass;
    compensated_sum large_mass;
    compensated_sum first;
    compensated_sum second;
    for (std::uint32_t x = 0; x < f.weights.size(); ++x) {
        const double p = f.weights[x];
        if (x < 2) {
            small_mass.add(p);
        } else {
            large_mass.add(p);
            first.add(p * x);
            second.add(p * static_cast<double>(x) * x);
        }
    }
    const double ratio = r / (n - r);
    ExpectedQBounds b;
    b.moment_bound = 1.0 - rn * first.value() + ratio * ratio * large_mass.value() +
                     0.5 * rn * rn * second.value();
    b.mass_bound = small_mass.value() + std::exp(-2.0 * rn * (1.0 - rn)) * large_mass.value();
    return b;
}

// Upper bound on P(H*_{nmd} disconnected):
// e^lambda + sum_{r>=1} e^{(lambda+5) r} + (2/e)^n, the series in closed form.
inline double disconnect_upper_bound(std::uint32_t n, std::uint64_t m, std::uint32_t d) {
    if (d < 2 || d > n || m < 1) throw parameter_error("disconnect_upper_bound needs 2 <= d <= n, m >= 1");
    const double lam = lambda(n, m, d);
    const double a = lam + 5.0;
    if (a >= 0.0) return pos_inf;
    const double series = std::exp(a) / -std::expm1(a);
    return std::exp(lam) + series + std::exp(static_cast<double>(n) * (std::log(2.0) - 1.0));
}

// ---------------------------------------------------------------------------
// Distinctness of independently sampled hyperedges (birthday problem per size)

struct DistinctProbability {
    double exact = 0.0;  // prod_x prod_{k<m_x} (1 - k / C(n,x))
    double lower = 0.0;  // 1 - c
    double upper = 0.0;  // e^{-c}
    double c = 0.0;      // sum_x C(m_x, 2) / C(n, x)
};

inline DistinctProbability distinct_probability(const SizeCounts& counts) {
    if (counts.n == 0) throw validation_error("n must be positive");
    compensated_sum log_p;
    compensated_sum c;
    bool infeasible = false;
    for (const auto& [x, mx] : counts.counts) {
        if (x > counts.n) throw validation_error("size exceeds n");
        if (mx < 2) continue;
        const double log_total = log_binomial(counts.n, x);
        const double total = std::exp(log_total);
        const double pairs = 0.5 * static_cast<double>(mx) * static_cast<double>(mx - 1);
        c.add(std::exp(std::log(pairs) - log_total));
        if (mx > binomial_saturating(counts.n, x)) {
            infeasible = true;
            continue;
        }
        for (std::uint64_t k = 1; k < mx; ++k) log_p.add(std::log1p(-static_cast<double>(k) / total));
    }
    DistinctProbability out;
    out.c = c.value();
    out.exact = infeasible ? 0.0 : std::exp(log_p.value());
    out.lower = 1.0 - out.c;
    out.upper = std::exp(-out.c);
    return out;
}

struct DistinctProbabilityRational {
    rational exact;
    rational c;
};

inline DistinctProbabilityRational distinct_probability_rational(const SizeCounts& counts) {
    DistinctProbabilityRational out{1, 0};
    for (const auto& [x, mx] : counts.counts) {
        if (x > counts.n) throw validation_error("size exceeds n");
        const rational total(binomial_big(counts.n, x));
        out.c += rational(big_int(mx) * (mx == 0 ? 0 : mx - 1), 2) / total;
        for (std::uint64_t k = 1; k < mx; ++k) out.exact *= 1 - rational(k) / total;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shotgun lemma: a uniform d-subset misses a fixed r-set with probability
// C(n-r,d)/C(n,d) = C(n-d,r)/C(n,r) <= min((1-r/n)^d, (1-d/n)^r).

struct ShotgunProbability {
    double exact = 0.0;
    double bound_r = 0.0;  // (1 - r/n)^d
    double bound_d = 0.0;  // (1 - d/n)^r
};

inline ShotgunProbability shotgun_probability(std::uint32_t n, std::uint32_t d, std::uint32_t r) {
    if (std::uint64_t{d} + r > n) throw parameter_error("shotgun_probability needs d + r <= n");
    if (n == 0) return {1.0, 1.0, 1.0};
    const double nd = n;
    return {std::exp(log_avoid_probability(n, r, d)),
            std::exp(static_cast<double>(d) * std::log1p(-r / nd)),
            std::exp(static_cast<double>(r) * std::log1p(-d / nd))};
}

struct ShotgunProbabilityRational {
    rational exact;      // C(n-r,d)/C(n,d)
    rational swapped;    // C(n-d,r)/C(n,r)
    rational bound_r;
    rational bound_d;

    bool identity_holds() const { return exact == swapped; }
    bool bounds_hold() const { return exact <= bound_r && exact <= bound_d; }
};

inline ShotgunProbabilityRational shotgun_probability_rational(std::uint32_t n, std::uint32_t d,
                                                               std::uint32_t r) {
    if (std::uint64_t{d} + r > n) throw parameter_error("shotgun_probability needs d + r <= n");
    if (n == 0) return {1, 1, 1, 1};
    return {binomial_rational(n - r, d) / binomial_rational(n, d),
            binomial_rational(n - d, r) / binomial_rational(n, r),
            pow_rational(rational(n - r, n), d), pow_rational(rational(n - d, n), r)};
}

// ---------------------------------------------------------------------------
// Elementary inequalities reused by the bounds above

// C(n,d1)/C(n,d2) and its bound (d2/(n-d2+1))^{d2-d1}, exact.
struct BinomRatio {
    rational ratio;
    rational bound;
    bool holds() const { return ratio <= bound; }
};

inline BinomRatio binom_ratio(std::uint32_t n, std::uint32_t d1, std::uint32_t d2) {
    if (d1 > d2 || d2 > n) throw parameter_error("binom_ratio needs 0 <= d1 <= d2 <= n");
    return {binomial_rational(n, d1) / binomial_rational(n, d2),
            pow_rational(rational(d2, n - d2 + 1), d2 - d1)};
}

// (n/k)^k <= C(n,k) <= n^k/k! <= (e n/k)^k. The last step is checked against
// a rational lower bound on e, which makes a pass conclusive.
struct BinomSandwich {
    rational lower;       // (n/k)^k
    rational binom;       // C(n,k)
    rational falling;     // n^k / k!
    rational upper_at_e;  // (e_low n / k)^k

    bool holds() const { return lower <= binom && binom <= falling && falling <= upper_at_e; }
};

// 1 + 1 + 1/2! + ... + 1/20!, which is below e.
inline rational e_lower_bound() {
    rational e = 0;
    rational term = 1;
    for (int j = 0; j <= 20; ++j) {
        if (j > 0) term /= j;
        e += term;
    }
    return e;
}

inline BinomSandwich binom_sandwich(std::uint32_t n, std::uint32_t k) {
    if (k < 1 || k > n) throw parameter_error("binom_sandwich needs 1 <= k <= n");
    big_int fact = 1;
    for (std::uint32_t i = 2; i <= k; ++i) fact *= i;
    static const rational e_low = e_lower_bound();
    const rational nk(n, k);
    return {pow_rational(nk, k), binomial_rational(n, k), pow_rational(rational(n), k) / rational(fact),
            pow_rational(e_low * nk, k)};
}

struct LogTaylor {
    double log_value = 0.0;     // log(1 - t)
    double first_lower = 0.0;   // -t / (1 - t)
    double first_upper = 0.0;   // -t
    double second_lower = 0.0;  // -t - t^2 / (1 - t)
    double second_upper = 0.0;  // -t - t^2 / 2

    // Smallest gap between log(1 - t) and any of its four bounds.
    double margin() const {
        return std::min({log_value - first_lower, first_upper - log_value,
                         log_value - second_lower, second_upper - log_value});
    }
};

inline LogTaylor log_taylor(double t) {
    if (!(t > 0.0 && t < 1.0)) throw parameter_error("log_taylor needs t in (0, 1)");
    return {std::log1p(-t), -t / (1.0 - t), -t, -t - t * t / (1.0 - t), -t - 0.5 * t * t};
}

struct SuiteReport {
    std::size_t checks = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

struct SuiteLimits {
    std::uint32_t binom_ratio_max_n = 60;
    std::uint32_t binom_bounds_max_n = 60;
    std::size_t log_taylor_points = 10000;
    // Points with t below this only need the non-strict inequalities.
    double log_taylor_strict_from = 1e-3;
};

// Runs the ratio, binomial-sandwich and log-Taylor inequalities over their
// parameter grids. Binomial checks are exact; the log check uses 50-digit
// arithmetic.
inline SuiteReport elementary_bounds_suite(const SuiteLimits& limits = {}) {
    SuiteReport rep;
    for (std::uint32_t n = 0; n <= limits.binom_ratio_max_n; ++n) {
        for (std::uint32_t d2 = 0; d2 <= n; ++d2) {
            for (std::uint32_t d1 = 0; d1 <= d2; ++d1) {
                ++rep.checks;
                if (!binom_ratio(n, d1, d2).holds()) {
                    rep.failures.push_back("binom_ratio n=" + std::to_string(n) + " d1=" +
                                           std::to_string(d1) + " d2=" + std::to_string(d2));
                }
            }
        }
    }
    for (std::uint32_t n = 1; n <= limits.binom_bounds_max_n; ++n) {
        for (std::uint32_t k = 1; k <= n; ++k) {
            ++rep.checks;
            if (!binom_sandwich(n, k).holds()) {
                rep.failures.push_back("binom_sandwich n=" + std::to_string(n) + " k=" + std::to_string(k));
            }
        }
    }
    using wide = boost::multiprecision::cpp_bin_float_50;
    const std::size_t points = limits.log_taylor_points;
    for (std::size_t i = 1; i <= points; ++i) {
        ++rep.checks;
        const wide t = wide(i) / wide(points + 1);
        const wide v = log1p(-t);
        const wide one_minus = 1 - t;
        const wide gaps[] = {v - (-t / one_minus), -t - v, v - (-t - t * t / one_minus),
                             (-t - t * t / 2) - v};
        const bool strict = t >= wide(limits.log_taylor_strict_from);
        for (const auto& g : gaps) {
            if (g < 0 || (strict && g <= 0)) {
                rep.failures.push_back("log_taylor t=" + t.str(12));
                break;
            }
        }
    }
    return rep;
}

}  // namespace hyperconn::theory
