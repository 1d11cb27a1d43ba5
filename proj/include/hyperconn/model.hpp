#pragma once

// Domain types: hyperedge size laws, hypergraphs and model specifications.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hyperconn/error.hpp"
#include "hyperconn/numeric.hpp"

namespace hyperconn {

using node_id = std::uint32_t;

inline constexpr double mass_tolerance = 1e-9;

namespace detail {

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

inline void throw_if_invalid(const std::vector<std::string>& violations) {
    if (!violations.empty()) throw validation_error(join(violations, "; "));
}

inline double int_pow(double base, unsigned r) {
    double out = 1.0;
    for (unsigned i = 0; i < r; ++i) out *= base;
    return out;
}

}  // namespace detail

// Probability mass function on hyperedge sizes {0, ..., n}.
struct SizeDistribution {
    std::uint32_t n = 0;
    std::vector<double> weights;  // weights[x] = f(x); may be shorter than n + 1

    static SizeDistribution dirac(std::uint32_t n, std::uint32_t x) {
        SizeDistribution f{n, std::vector<double>(std::size_t{x} + 1, 0.0)};
        f.weights[x] = 1.0;
        return f;
    }

    static SizeDistribution from_pairs(std::uint32_t n,
                                       std::initializer_list<std::pair<std::uint32_t, double>> mass) {
        SizeDistribution f{n, {}};
        for (auto [x, w] : mass) {
            if (f.weights.size() <= x) f.weights.resize(std::size_t{x} + 1, 0.0);
            f.weights[x] += w;
        }
        return f;
    }

    double operator[](std::uint32_t x) const {
        return x < weights.size() ? weights[x] : 0.0;
    }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (n == 0) out.emplace_back("n must be positive");
        if (weights.size() > std::size_t{n} + 1) {
            out.push_back("weight index " + std::to_string(weights.size() - 1) + " exceeds n = " +
                          std::to_string(n));
        }
        bool finite = true;
        for (std::size_t x = 0; x < weights.size(); ++x) {
            if (!std::isfinite(weights[x]) || weights[x] < 0.0) {
                out.push_back("weight f(" + std::to_string(x) + ") is negative or not finite");
                finite = false;
            }
        }
        if (finite) {
            compensated_sum mass;
            for (double w : weights) mass.add(w);
            if (std::abs(mass.value() - 1.0) > mass_tolerance) {
                out.push_back("mass ≠ 1 (sum = " + std::to_string(mass.value()) + ")");
            }
        }
        return out;
    }

    void ensure_valid() const { detail::throw_if_invalid(violations()); }
};

// Explicit list (x_1, ..., x_m) of hyperedge sizes.
struct SizeProfile {
    std::uint32_t n = 0;
    std::vector<std::uint32_t> sizes;

    static SizeProfile constant(std::uint32_t n, std::uint64_t m, std::uint32_t d) {
        return SizeProfile{n, std::vector<std::uint32_t>(m, d)};
    }

    std::uint64_t m() const { return sizes.size(); }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (n == 0) out.emplace_back("n must be positive");
        if (sizes.empty()) out.emplace_back("profile must contain at least one size");
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            if (sizes[k] > n) {
                out.push_back("x_" + std::to_string(k + 1) + " = " + std::to_string(sizes[k]) +
                              " > n = " + std::to_string(n));
                break;
            }
        }
        return out;
    }

    void ensure_valid() const { detail::throw_if_invalid(violations()); }
};

// Exact hyperedge size histogram m_x, the given-sizes model's parameter.
struct SizeCounts {
    std::uint32_t n = 0;
    std::map<std::uint32_t, std::uint64_t> counts;

    std::uint64_t m() const {
        std::uint64_t total = 0;
        for (const auto& [x, c] : counts) total += c;
        return total;
    }

    std::uint64_t operator[](std::uint32_t x) const {
        auto it = counts.find(x);
        return it == counts.end() ? 0 : it->second;
    }

    // Converts m * f(x) to integers; each product must be integral.
    static SizeCounts from_distribution(const SizeDistribution& f, std::uint64_t m) {
        f.ensure_valid();
        SizeCounts out{f.n, {}};
        for (std::uint32_t x = 0; x < f.weights.size(); ++x) {
            const double mx = static_cast<double>(m) * f.weights[x];
            const double rounded = std::round(mx);
            if (std::abs(mx - rounded) > mass_tolerance * static_cast<double>(std::max<std::uint64_t>(m, 1))) {
                throw validation_error("m f(" + std::to_string(x) + ") = " + std::to_string(mx) +
                                       " is not an integer");
            }
            if (rounded > 0) out.counts[x] = static_cast<std::uint64_t>(rounded);
        }
        return out;
    }

    // Sizes listed in increasing order, m_x copies of each x.
    SizeProfile to_profile() const {
        SizeProfile p{n, {}};
        p.sizes.reserve(m());
        for (const auto& [x, c] : counts) p.sizes.insert(p.sizes.end(), c, x);
        return p;
    }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (n == 0) out.emplace_back("n must be positive");
        if (m() == 0) out.emplace_back("m must be at least 1");
        for (const auto& [x, c] : counts) {
            if (x > n) {
                out.push_back("size " + std::to_string(x) + " > n = " + std::to_string(n));
                continue;
            }
            const std::uint64_t cap = binomial_saturating(n, x);
            if (c > cap) {
                out.push_back("m_" + std::to_string(x) + " = " + std::to_string(c) + " > C(" +
                              std::to_string(n) + "," + std::to_string(x) + ") = " + std::to_string(cap));
            }
        }
        return out;
    }

    void ensure_valid() const { detail::throw_if_invalid(violations()); }
};

// Node count plus a list of hyperedges. Each hyperedge is stored sorted and
// duplicate-free; the list itself may repeat hyperedges.
class Hypergraph {
public:
    Hypergraph() = default;
    explicit Hypergraph(std::uint32_t n) : n_(n) {}

    static Hypergraph from_edges(std::uint32_t n, const std::vector<std::vector<node_id>>& edges) {
        Hypergraph h(n);
        for (const auto& e : edges) h.add_edge(e);
        return h;
    }

    std::uint32_t n() const { return n_; }
    std::size_t edge_count() const { return offsets_.size() - 1; }
    std::size_t volume() const { return nodes_.size(); }

    std::span<const node_id> edge(std::size_t i) const {
        return {nodes_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    // Node ids must lie in [1, n] and be distinct; order is free.
    void add_edge(std::span<const node_id> nodes) {
        const std::size_t start = nodes_.size();
        nodes_.insert(nodes_.end(), nodes.begin(), nodes.end());
        auto first = nodes_.begin() + static_cast<std::ptrdiff_t>(start);
        if (!std::is_sorted(first, nodes_.end())) std::sort(first, nodes_.end());
        const bool repeated = std::adjacent_find(first, nodes_.end()) != nodes_.end();
        const bool out_of_range = first != nodes_.end() && (*first < 1 || nodes_.back() > n_);
        if (repeated || out_of_range) {
            nodes_.resize(start);
            throw validation_error(repeated ? "hyperedge repeats a node id"
                                            : "node id outside [1, n]");
        }
        offsets_.push_back(nodes_.size());
    }

    void add_edge(std::initializer_list<node_id> nodes) {
        add_edge(std::span<const node_id>(nodes.begin(), nodes.size()));
    }

    // Appends an edge that is already sorted, duplicate-free and in range.
    void add_canonical_edge(std::span<const node_id> nodes) {
        nodes_.insert(nodes_.end(), nodes.begin(), nodes.end());
        offsets_.push_back(nodes_.size());
    }

    void reserve(std::size_t edges, std::size_t volume) {
        offsets_.reserve(edges + 1);
        nodes_.reserve(volume);
    }

    std::vector<std::vector<node_id>> edge_lists() const {
        std::vector<std::vector<node_id>> out;
        out.reserve(edge_count());
        for (std::size_t i = 0; i < edge_count(); ++i) {
            auto e = edge(i);
            out.emplace_back(e.begin(), e.end());
        }
        return out;
    }

    // Edge list sorted by (size, lexicographic); a representative of the multiset.
    Hypergraph canonical() const {
        auto lists = edge_lists();
        std::sort(lists.begin(), lists.end(), edge_less);
        Hypergraph out(n_);
        out.reserve(lists.size(), volume());
        for (const auto& e : lists) out.add_canonical_edge(e);
        return out;
    }

    // The hyperedge set: duplicates and empty edges removed, canonical order.
    Hypergraph dedupe() const {
        auto lists = edge_lists();
        std::erase_if(lists, [](const auto& e) { return e.empty(); });
        std::sort(lists.begin(), lists.end(), edge_less);
        lists.erase(std::unique(lists.begin(), lists.end()), lists.end());
        Hypergraph out(n_);
        for (const auto& e : lists) out.add_canonical_edge(e);
        return out;
    }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (n_ == 0) out.emplace_back("n must be positive");
        for (std::size_t i = 0; i < edge_count(); ++i) {
            auto e = edge(i);
            if (std::adjacent_find(e.begin(), e.end(), std::greater_equal<>()) != e.end()) {
                out.push_back("edge " + std::to_string(i) + " is not strictly increasing");
            }
            if (!e.empty() && (e.front() < 1 || e.back() > n_)) {
                out.push_back("edge " + std::to_string(i) + " has a node outside [1, n]");
            }
        }
        return out;
    }

    friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
        return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.nodes_ == b.nodes_;
    }

private:
    static bool edge_less(const std::vector<node_id>& a, const std::vector<node_id>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }

    std::uint32_t n_ = 0;
    std::vector<node_id> nodes_;
    std::vector<std::size_t> offsets_{0};
};

// ---------------------------------------------------------------------------
// Model specifications

// Uniform hypergraph with m distinct hyperedges and exactly m_x of size x.
struct GivenSizes {
    SizeCounts counts;
};

// m i.i.d. f-distributed sizes, each hyperedge uniform given its size; the
// random intersection graph is the 2-section of the result.
struct IntersectionGraph {
    SizeDistribution dist;
    std::uint64_t m = 0;
};

struct IidSizes {
    SizeDistribution dist;
    std::uint64_t m = 0;
};

// Independent hyperedges with per-edge size laws: fixed sizes or i.i.d. draws.
struct Shotgun {
    std::variant<SizeProfile, IidSizes> sizes;
};

// Uniform hypergraph with m distinct hyperedges of size d.
struct RegularHypergraph {
    std::uint32_t n = 0;
    std::uint64_t m = 0;
    std::uint32_t d = 0;
};

// m independent uniform d-subsets.
struct RegularShotgun {
    std::uint32_t n = 0;
    std::uint64_t m = 0;
    std::uint32_t d = 0;
};

struct ModelSpec {
    std::variant<GivenSizes, IntersectionGraph, Shotgun, RegularHypergraph, RegularShotgun> variant;

    std::uint32_t n() const {
        return std::visit(
            [](const auto& v) -> std::uint32_t {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, GivenSizes>) return v.counts.n;
                else if constexpr (std::is_same_v<T, IntersectionGraph>) return v.dist.n;
                else if constexpr (std::is_same_v<T, Shotgun>) {
                    return std::visit([](const auto& s) -> std::uint32_t {
                        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SizeProfile>) return s.n;
                        else return s.dist.n;
                    }, v.sizes);
                } else return v.n;
            },
            variant);
    }

    std::uint64_t m() const {
        return std::visit(
            [](const auto& v) -> std::uint64_t {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, GivenSizes>) return v.counts.m();
                else if constexpr (std::is_same_v<T, Shotgun>) {
                    return std::visit([](const auto& s) -> std::uint64_t {
                        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SizeProfile>) return s.m();
                        else return s.m;
                    }, v.sizes);
                } else return v.m;
            },
            variant);
    }

    std::string_view variant_name() const {
        static constexpr std::string_view names[] = {"GivenSizes", "IntersectionGraph", "Shotgun",
                                                     "RegularHypergraph", "RegularShotgun"};
        return names[variant.index()];
    }
};

namespace detail {

inline void check_regular(std::uint32_t n, std::uint64_t m, std::uint32_t d,
                          std::vector<std::string>& out) {
    if (n == 0) out.emplace_back("n must be positive");
    if (m < 1) out.emplace_back("m must be at least 1");
    if (d < 2 || d > n) {
        out.push_back("d = " + std::to_string(d) + " outside [2, n = " + std::to_string(n) + "]");
    }
}

inline void append(std::vector<std::string>& out, std::vector<std::string> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

}  // namespace detail

// Empty result means the spec is valid; otherwise one entry per failed rule.
inline std::vector<std::string> validate(const ModelSpec& spec) {
    std::vector<std::string> out;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GivenSizes>) {
                detail::append(out, v.counts.violations());
            } else if constexpr (std::is_same_v<T, IntersectionGraph>) {
                detail::append(out, v.dist.violations());
                if (v.m < 1) out.emplace_back("m must be at least 1");
            } else if constexpr (std::is_same_v<T, Shotgun>) {
                std::visit(
                    [&](const auto& s) {
                        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SizeProfile>) {
                            detail::append(out, s.violations());
                        } else {
                            detail::append(out, s.dist.violations());
                            if (s.m < 1) out.emplace_back("m must be at least 1");
                        }
                    },
                    v.sizes);
            } else if constexpr (std::is_same_v<T, RegularHypergraph>) {
                detail::check_regular(v.n, v.m, v.d, out);
                if (v.d >= 2 && v.d <= v.n && v.m > binomial_saturating(v.n, v.d)) {
                    out.push_back("m = " + std::to_string(v.m) + " > C(" + std::to_string(v.n) + "," +
                                  std::to_string(v.d) + ") = " +
                                  std::to_string(binomial_saturating(v.n, v.d)));
                }
            } else {
                detail::check_regular(v.n, v.m, v.d, out);
            }
        },
        spec.variant);
    return out;
}

inline void ensure_valid(const ModelSpec& spec) { detail::throw_if_invalid(validate(spec)); }

// ---------------------------------------------------------------------------
// Moments: sum over x >= 2 of x^r f(x). Sizes 0 and 1 never contribute.

inline double moment(const SizeDistribution& f, unsigned r) {
    f.ensure_valid();
    compensated_sum acc;
    for (std::uint32_t x = 2; x < f.weights.size(); ++x) {
        acc.add(detail::int_pow(x, r) * f.weights[x]);
    }
    return acc.value();
}

inline double moment(const SizeCounts& counts, unsigned r) {
    counts.ensure_valid();
    compensated_sum acc;
    for (const auto& [x, c] : counts.counts) {
        if (x >= 2) acc.add(detail::int_pow(x, r) * static_cast<double>(c));
    }
    return acc.value() / static_cast<double>(counts.m());
}

inline double moment(const SizeProfile& profile, unsigned r) {
    profile.ensure_valid();
    compensated_sum acc;
    for (std::uint32_t x : profile.sizes) {
        if (x >= 2) acc.add(detail::int_pow(x, r));
    }
    return acc.value() / static_cast<double>(profile.m());
}

// ---------------------------------------------------------------------------
// Product law F = f^(1) x ... x f^(m), grouped into runs of identical factors.

struct EdgeLaw {
    std::vector<std::pair<std::uint32_t, double>> support;  // (size, probability), positive mass only
    std::uint64_t multiplicity = 1;
};

struct ProductLaw {
    std::uint32_t n = 0;
    std::vector<EdgeLaw> factors;

    std::uint64_t m() const {
        std::uint64_t total = 0;
        for (const auto& f : factors) total += f.multiplicity;
        return total;
    }
};

inline ProductLaw product_law(const SizeProfile& profile) {
    profile.ensure_valid();
    std::map<std::uint32_t, std::uint64_t> runs;
    for (auto x : profile.sizes) ++runs[x];
    ProductLaw law{profile.n, {}};
    for (const auto& [x, c] : runs) law.factors.push_back(EdgeLaw{{{x, 1.0}}, c});
    return law;
}

inline ProductLaw product_law(const SizeDistribution& f, std::uint64_t m) {
    f.ensure_valid();
    if (m < 1) throw validation_error("m must be at least 1");
    EdgeLaw e;
    e.multiplicity = m;
    for (std::uint32_t x = 0; x < f.weights.size(); ++x) {
        if (f.weights[x] > 0.0) e.support.emplace_back(x, f.weights[x]);
    }
    return ProductLaw{f.n, {std::move(e)}};
}

inline ProductLaw product_law(std::uint32_t n, std::uint64_t m, std::uint32_t d) {
    if (d > n || m < 1) throw validation_error("constant profile needs d <= n and m >= 1");
    return ProductLaw{n, {EdgeLaw{{{d, 1.0}}, m}}};
}

// Per-edge size law of the shotgun model behind each variant. Given-sizes
// variants map to their proxy with fixed sizes, conditioned on distinctness.
inline ProductLaw product_law(const ModelSpec& spec) {
    ensure_valid(spec);
    return std::visit(
        [](const auto& v) -> ProductLaw {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GivenSizes>) return product_law(v.counts.to_profile());
            else if constexpr (std::is_same_v<T, IntersectionGraph>) return product_law(v.dist, v.m);
            else if constexpr (std::is_same_v<T, Shotgun>) {
                return std::visit([](const auto& s) -> ProductLaw {
                    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SizeProfile>) return product_law(s);
                    else return product_law(s.dist, s.m);
                }, v.sizes);
            } else return product_law(v.n, v.m, v.d);
        },
        spec.variant);
}

// (F)_r over a product law.
inline double moment(const ProductLaw& law, unsigned r) {
    compensated_sum acc;
    for (const auto& f : law.factors) {
        compensated_sum per_edge;
        for (auto [x, p] : f.support) {
            if (x >= 2) per_edge.add(detail::int_pow(x, r) * p);
        }
        acc.add(per_edge.value() * static_cast<double>(f.multiplicity));
    }
    return acc.value() / static_cast<double>(law.m());
}

}  // namespace hyperconn
