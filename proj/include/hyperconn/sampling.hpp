#pragma once

// Uniform subset sampling and samplers for the shotgun, intersection-graph and
// given-sizes models.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperconn/error.hpp"
#include "hyperconn/model.hpp"
#include "hyperconn/rng.hpp"
#include "hyperconn/theory.hpp"

namespace hyperconn {

inline constexpr std::size_t default_max_attempts = 1000;

// Draws uniform x-subsets of {1, ..., n} by partial Fisher-Yates over a
// persistent index array. Only the touched slots are swapped and they are
// restored afterwards, so each draw costs O(min(x, n - x)) plus sorting.
// When x > n/2 the complement is drawn instead.
class SubsetSampler {
public:
    explicit SubsetSampler(std::uint32_t n) : n_(n), slots_(n) {
        for (std::uint32_t i = 0; i < n; ++i) slots_[i] = i + 1;
    }

    std::uint32_t n() const { return n_; }

    // Writes the sorted subset into out (replacing its contents).
    void draw(std::uint32_t x, RngStream& rng, std::vector<node_id>& out) {
        if (x > n_) throw parameter_error("subset size " + std::to_string(x) + " exceeds n");
        out.clear();
        if (x == 0) return;
        if (x == n_) {
            out.resize(n_);
            for (std::uint32_t i = 0; i < n_; ++i) out[i] = i + 1;
            return;
        }
        const bool complement = x > n_ - x;
        const std::uint32_t s = complement ? n_ - x : x;
        swaps_.clear();
        for (std::uint32_t k = 0; k < s; ++k) {
            const auto j = static_cast<std::uint32_t>(k + rng.below(n_ - k));
            std::swap(slots_[k], slots_[j]);
            swaps_.push_back(j);
        }
        picked_.assign(slots_.begin(), slots_.begin() + s);
        for (std::uint32_t k = s; k-- > 0;) std::swap(slots_[k], slots_[swaps_[k]]);
        std::sort(picked_.begin(), picked_.end());
        if (!complement) {
            out.swap(picked_);
            return;
        }
        out.reserve(x);
        auto skip = picked_.begin();
        for (node_id v = 1; v <= n_; ++v) {
            if (skip != picked_.end() && *skip == v) {
                ++skip;
            } else {
                out.push_back(v);
            }
        }
    }

    std::vector<node_id> draw(std::uint32_t x, RngStream& rng) {
        std::vector<node_id> out;
        draw(x, rng, out);
        return out;
    }

private:
    std::uint32_t n_;
    std::vector<node_id> slots_;
    std::vector<std::uint32_t> swaps_;
    std::vector<node_id> picked_;
};

// Inverse-CDF sampling from a size distribution.
class SizeSampler {
public:
    explicit SizeSampler(const SizeDistribution& f) {
        f.ensure_valid();
        double running = 0.0;
        for (std::uint32_t x = 0; x < f.weights.size(); ++x) {
            if (f.weights[x] <= 0.0) continue;
            running += f.weights[x];
            sizes_.push_back(x);
            cdf_.push_back(running);
        }
    }

    std::uint32_t operator()(RngStream& rng) const {
        const double u = rng.uniform01() * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) --it;
        return sizes_[static_cast<std::size_t>(it - cdf_.begin())];
    }

private:
    std::vector<std::uint32_t> sizes_;
    std::vector<double> cdf_;
};

inline std::vector<node_id> sample_subset(std::uint32_t n, std::uint32_t x, RngStream& rng) {
    if (x > n) throw parameter_error("subset size " + std::to_string(x) + " exceeds n");
    SubsetSampler sampler(n);
    return sampler.draw(x, rng);
}

namespace detail {

inline Hypergraph draw_profile(SubsetSampler& subsets, std::span<const std::uint32_t> sizes,
                               RngStream& rng, std::vector<node_id>& buf) {
    Hypergraph h(subsets.n());
    std::size_t volume = 0;
    for (auto x : sizes) volume += x;
    h.reserve(sizes.size(), volume);
    for (auto x : sizes) {
        subsets.draw(x, rng, buf);
        h.add_canonical_edge(buf);
    }
    return h;
}

inline std::uint64_t edge_hash(std::span<const node_id> e) {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ e.size();
    for (node_id v : e) {
        std::uint64_t z = h + v;
        h = splitmix64_next(z);
    }
    return h;
}

// True when edges [first, last) of h are pairwise distinct. Bitmask keys for
// n <= 64, hashed keys with full comparison on collision otherwise.
inline bool edges_distinct(const Hypergraph& h, std::size_t first, std::size_t last,
                           std::vector<std::pair<std::uint64_t, std::size_t>>& keys) {
    keys.clear();
    const bool bitmask = h.n() <= 64;
    for (std::size_t i = first; i < last; ++i) {
        std::uint64_t key = 0;
        if (bitmask) {
            for (node_id v : h.edge(i)) key |= std::uint64_t{1} << (v - 1);
        } else {
            key = edge_hash(h.edge(i));
        }
        keys.emplace_back(key, i);
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 1; i < keys.size(); ++i) {
        if (keys[i].first != keys[i - 1].first) continue;
        if (bitmask) return false;
        // Equal hashes: compare against every earlier edge in the run.
        auto a = h.edge(keys[i].second);
        for (std::size_t j = i; j > 0 && keys[j - 1].first == keys[i].first; --j) {
            auto b = h.edge(keys[j - 1].second);
            if (std::equal(a.begin(), a.end(), b.begin(), b.end())) return false;
        }
    }
    return true;
}

}  // namespace detail

// Independent uniform subsets V_k of sizes x_k; duplicates stay in the list.
inline Hypergraph sample_shotgun(const SizeProfile& profile, RngStream& rng) {
    profile.ensure_valid();
    SubsetSampler subsets(profile.n);
    std::vector<node_id> buf;
    return detail::draw_profile(subsets, profile.sizes, rng, buf);
}

// Sizes drawn i.i.d. from f, then as sample_shotgun.
inline Hypergraph sample_shotgun_iid(const SizeDistribution& f, std::uint64_t m, RngStream& rng) {
    f.ensure_valid();
    if (m < 1) throw validation_error("m must be at least 1");
    SizeSampler sizes(f);
    SubsetSampler subsets(f.n);
    std::vector<std::uint32_t> xs(m);
    for (auto& x : xs) x = sizes(rng);
    std::vector<node_id> buf;
    return detail::draw_profile(subsets, xs, rng, buf);
}

struct GivenSizesSample {
    Hypergraph graph;
    std::size_t attempts = 0;
};

// A warning when the per-attempt acceptance probability is certainly below
// 1% (e^{-c} < 0.01), i.e. rejection sampling is expected to stall.
inline std::optional<std::string> rejection_warning(const SizeCounts& counts) {
    const auto p = theory::distinct_probability(counts);
    if (p.upper < 0.01) {
        return "given-sizes sampler: acceptance probability per attempt <= e^{-c} = " +
               std::to_string(p.upper) + " (c = " + std::to_string(p.c) + ")";
    }
    return std::nullopt;
}

// Uniform sample from the hypergraphs with m distinct hyperedges, m_x of size
// x: draw the shotgun hypergraph with sizes listed per m_x and reject until
// all edges are distinct. The accepted law is exactly uniform.
class GivenSizesSampler {
public:
    explicit GivenSizesSampler(const SizeCounts& counts, std::size_t max_attempts = default_max_attempts)
        : counts_(counts), subsets_(counts.n), max_attempts_(max_attempts) {
        counts_.ensure_valid();
        if (max_attempts_ < 1) throw parameter_error("max_attempts must be at least 1");
        for (const auto& [x, c] : counts_.counts) {
            if (c > 0) classes_.push_back({x, c});
        }
    }

    GivenSizesSample operator()(RngStream& rng) {
        for (std::size_t attempt = 1; attempt <= max_attempts_; ++attempt) {
            Hypergraph h(counts_.n);
            bool ok = true;
            for (const auto& [x, c] : classes_) {
                const std::size_t first = h.edge_count();
                for (std::uint64_t k = 0; k < c; ++k) {
                    subsets_.draw(x, rng, buf_);
                    h.add_canonical_edge(buf_);
                }
                if (c > 1 && !detail::edges_distinct(h, first, h.edge_count(), keys_)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return {std::move(h), attempt};
        }
        const auto p = theory::distinct_probability(counts_);
        throw retry_budget_error("given-sizes sampler: no distinct draw in " +
                                     std::to_string(max_attempts_) +
                                     " attempts; acceptance probability >= 1 - c = " +
                                     std::to_string(p.lower) + ", <= e^{-c} = " + std::to_string(p.upper),
                                 max_attempts_, p.lower, p.upper);
    }

private:
    SizeCounts counts_;
    SubsetSampler subsets_;
    std::size_t max_attempts_;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> classes_;
    std::vector<node_id> buf_;
    std::vector<std::pair<std::uint64_t, std::size_t>> keys_;
};

inline GivenSizesSample sample_given_sizes(const SizeCounts& counts, RngStream& rng,
                                           std::size_t max_attempts = default_max_attempts) {
    GivenSizesSampler sampler(counts, max_attempts);
    return sampler(rng);
}

// Sampler for any ModelSpec; validated and set up once, then reused per trial.
class ModelSampler {
public:
    explicit ModelSampler(const ModelSpec& spec, std::size_t max_attempts = default_max_attempts)
        : spec_(spec), subsets_(spec.n()) {
        ensure_valid(spec_);
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, GivenSizes>) {
                    given_.emplace(v.counts, max_attempts);
                } else if constexpr (std::is_same_v<T, RegularHypergraph>) {
                    given_.emplace(SizeCounts{v.n, {{v.d, v.m}}}, max_attempts);
                } else if constexpr (std::is_same_v<T, IntersectionGraph>) {
                    iid_.emplace(v.dist);
                    iid_m_ = v.m;
                } else if constexpr (std::is_same_v<T, Shotgun>) {
                    if (const auto* p = std::get_if<SizeProfile>(&v.sizes)) {
                        sizes_ = p->sizes;
                    } else {
                        const auto& s = std::get<IidSizes>(v.sizes);
                        iid_.emplace(s.dist);
                        iid_m_ = s.m;
                    }
                } else {
                    sizes_.assign(v.m, v.d);
                }
            },
            spec_.variant);
    }

    const ModelSpec& spec() const { return spec_; }

    // Draws one hypergraph; attempts is 1 except for rejection-based variants.
    GivenSizesSample operator()(RngStream& rng) {
        if (given_) return (*given_)(rng);
        if (iid_) {
            sizes_.resize(iid_m_);
            for (auto& x : sizes_) x = (*iid_)(rng);
        }
        return {detail::draw_profile(subsets_, sizes_, rng, buf_), 1};
    }

private:
    ModelSpec spec_;
    SubsetSampler subsets_;
    std::optional<GivenSizesSampler> given_;
    std::optional<SizeSampler> iid_;
    std::uint64_t iid_m_ = 0;
    std::vector<std::uint32_t> sizes_;
    std::vector<node_id> buf_;
};

inline GivenSizesSample sample(const ModelSpec& spec, RngStream& rng,
                               std::size_t max_attempts = default_max_attempts) {
    ModelSampler sampler(spec, max_attempts);
    return sampler(rng);
}

// Simple graph on the same nodes: {i, j} present iff some hyperedge holds both.
// Pairs are returned with i < j, sorted, without repeats.
inline std::vector<std::pair<node_id, node_id>> two_section(const Hypergraph& h) {
    std::vector<std::pair<node_id, node_id>> pairs;
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        auto nodes = h.edge(e);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < nodes.size(); ++j) pairs.emplace_back(nodes[i], nodes[j]);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

}  // namespace hyperconn
