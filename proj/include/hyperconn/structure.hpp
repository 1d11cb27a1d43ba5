#pragma once

// Connectivity, isolation and components of a hypergraph, plus a literal
// partition-based oracle for small n.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hyperconn/error.hpp"
#include "hyperconn/model.hpp"

namespace hyperconn {

// Disjoint-set forest over nodes 1..n with path halving and union by size.
class DisjointSets {
public:
    explicit DisjointSets(std::uint32_t n) : parent_(std::size_t{n} + 1), size_(std::size_t{n} + 1, 1), classes_(n) {
        std::iota(parent_.begin(), parent_.end(), node_id{0});
    }

    node_id find(node_id v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    bool unite(node_id a, node_id b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --classes_;
        return true;
    }

    std::uint32_t class_count() const { return classes_; }
    std::uint32_t class_size(node_id root) const { return size_[root]; }

private:
    std::vector<node_id> parent_;
    std::vector<std::uint32_t> size_;
    std::uint32_t classes_;
};

// Unions every hyperedge; edges of size 0 or 1 join nothing.
inline DisjointSets hyperedge_classes(const Hypergraph& h) {
    DisjointSets ds(h.n());
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        auto nodes = h.edge(e);
        for (std::size_t i = 1; i < nodes.size(); ++i) ds.unite(nodes[0], nodes[i]);
    }
    return ds;
}

inline bool is_connected(const Hypergraph& h) {
    if (h.n() <= 1) return true;
    DisjointSets ds(h.n());
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        auto nodes = h.edge(e);
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            if (ds.unite(nodes[0], nodes[i]) && ds.class_count() == 1) return true;
        }
    }
    return ds.class_count() == 1;
}

inline constexpr std::uint32_t oracle_max_n = 20;

// Checks every bipartition {V1, V2} of the nodes for a crossing hyperedge.
// Exponential in n; refuses n > 20.
inline bool oracle_is_connected(const Hypergraph& h) {
    const std::uint32_t n = h.n();
    if (n > oracle_max_n) throw parameter_error("oracle_is_connected: n exceeds 20");
    if (n <= 1) return true;
    std::vector<std::uint32_t> masks;
    masks.reserve(h.edge_count());
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        std::uint32_t m = 0;
        for (node_id v : h.edge(e)) m |= 1U << (v - 1);
        masks.push_back(m);
    }
    const std::uint32_t full = (n == 32) ? ~0U : ((1U << n) - 1);
    // Node n is pinned to V2, so each bipartition is visited once.
    for (std::uint32_t part = 1; part < (1U << (n - 1)); ++part) {
        const std::uint32_t other = full & ~part;
        const bool crossed = std::any_of(masks.begin(), masks.end(), [&](std::uint32_t m) {
            return (m & part) != 0 && (m & other) != 0;
        });
        if (!crossed) return false;
    }
    return true;
}

// Nodes in no hyperedge of size >= 2, ascending.
inline std::vector<node_id> isolated_nodes(const Hypergraph& h) {
    std::vector<char> covered(std::size_t{h.n()} + 1, 0);
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        auto nodes = h.edge(e);
        if (nodes.size() < 2) continue;
        for (node_id v : nodes) covered[v] = 1;
    }
    std::vector<node_id> out;
    for (node_id v = 1; v <= h.n(); ++v) {
        if (!covered[v]) out.push_back(v);
    }
    return out;
}

inline std::size_t isolated_count(const Hypergraph& h) {
    std::vector<char> covered(std::size_t{h.n()} + 1, 0);
    std::size_t hit = 0;
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        auto nodes = h.edge(e);
        if (nodes.size() < 2) continue;
        for (node_id v : nodes) {
            hit += covered[v] == 0;
            covered[v] = 1;
        }
    }
    return h.n() - hit;
}

inline std::uint32_t component_count(const Hypergraph& h) {
    return hyperedge_classes(h).class_count();
}

// Component sizes in decreasing order; isolated nodes appear as 1s.
inline std::vector<std::uint32_t> component_sizes(const Hypergraph& h) {
    auto ds = hyperedge_classes(h);
    std::vector<std::uint32_t> sizes;
    sizes.reserve(ds.class_count());
    for (node_id v = 1; v <= h.n(); ++v) {
        if (ds.find(v) == v) sizes.push_back(ds.class_size(v));
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

}  // namespace hyperconn
