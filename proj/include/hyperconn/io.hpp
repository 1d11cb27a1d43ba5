#pragma once

// JSON forms of model specs, hypergraphs and threshold reports.
//
//   {"variant": "GivenSizes",        "n": 4,  "counts": {"2": 7}}
//   {"variant": "IntersectionGraph", "n": 10, "m": 5, "weights": [0, 0, 0.5, 0, 0.5]}
//   {"variant": "Shotgun",           "n": 10, "sizes": [2, 3, 3]}
//   {"variant": "Shotgun",           "n": 10, "m": 5, "weights": [...]}
//   {"variant": "RegularHypergraph", "n": 10, "m": 5, "d": 2}
//   {"variant": "RegularShotgun",    "n": 10, "m": 5, "d": 2}
//
// Hypergraphs: {"n": 5, "edges": [[1, 2], [2, 3, 5]]}

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "hyperconn/error.hpp"
#include "hyperconn/model.hpp"
#include "hyperconn/theory.hpp"

namespace hyperconn::io {

using json = nlohmann::json;

namespace detail {

template <typename T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw validation_error(std::string("model spec: missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw validation_error(std::string("model spec: bad field \"") + key + "\": " + e.what());
    }
}

inline SizeDistribution distribution(const json& j, std::uint32_t n) {
    return SizeDistribution{n, field<std::vector<double>>(j, "weights")};
}

// Non-finite numbers are written as strings so documents stay valid JSON.
inline json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace detail

inline ModelSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw validation_error("model spec must be a JSON object");
    const auto variant = detail::field<std::string>(j, "variant");
    const auto n = detail::field<std::uint32_t>(j, "n");
    if (variant == "GivenSizes") {
        SizeCounts counts{n, {}};
        const auto& c = j.contains("counts") ? j.at("counts") : throw validation_error("model spec: missing field \"counts\"");
        if (!c.is_object()) throw validation_error("model spec: \"counts\" must map size to count");
        for (const auto& [key, value] : c.items()) {
            std::size_t used = 0;
            unsigned long x = 0;
            try {
                x = std::stoul(key, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != key.size() || !value.is_number_unsigned()) {
                throw validation_error("model spec: bad counts entry \"" + key + "\"");
            }
            counts.counts[static_cast<std::uint32_t>(x)] = value.get<std::uint64_t>();
        }
        return ModelSpec{GivenSizes{std::move(counts)}};
    }
    if (variant == "IntersectionGraph") {
        return ModelSpec{IntersectionGraph{detail::distribution(j, n), detail::field<std::uint64_t>(j, "m")}};
    }
    if (variant == "Shotgun") {
        if (j.contains("sizes")) {
            return ModelSpec{Shotgun{SizeProfile{n, detail::field<std::vector<std::uint32_t>>(j, "sizes")}}};
        }
        return ModelSpec{Shotgun{IidSizes{detail::distribution(j, n), detail::field<std::uint64_t>(j, "m")}}};
    }
    if (variant == "RegularHypergraph") {
        return ModelSpec{RegularHypergraph{n, detail::field<std::uint64_t>(j, "m"), detail::field<std::uint32_t>(j, "d")}};
    }
    if (variant == "RegularShotgun") {
        return ModelSpec{RegularShotgun{n, detail::field<std::uint64_t>(j, "m"), detail::field<std::uint32_t>(j, "d")}};
    }
    throw validation_error("model spec: unknown variant \"" + variant + "\"");
}

inline json to_json(const ModelSpec& spec) {
    json j;
    j["variant"] = spec.variant_name();
    j["n"] = spec.n();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GivenSizes>) {
                json c = json::object();
                for (const auto& [x, count] : v.counts.counts) c[std::to_string(x)] = count;
                j["counts"] = c;
            } else if constexpr (std::is_same_v<T, IntersectionGraph>) {
                j["m"] = v.m;
                j["weights"] = v.dist.weights;
            } else if constexpr (std::is_same_v<T, Shotgun>) {
                if (const auto* p = std::get_if<SizeProfile>(&v.sizes)) {
                    j["sizes"] = p->sizes;
                } else {
                    const auto& s = std::get<IidSizes>(v.sizes);
                    j["m"] = s.m;
                    j["weights"] = s.dist.weights;
                }
            } else {
                j["m"] = v.m;
                j["d"] = v.d;
            }
        },
        spec.variant);
    return j;
}

inline json to_json(const Hypergraph& h) {
    return json{{"n", h.n()}, {"edges", h.edge_lists()}};
}

inline Hypergraph hypergraph_from_json(const json& j) {
    try {
        const auto n = j.at("n").get<std::uint32_t>();
        const auto edges = j.at("edges").get<std::vector<std::vector<node_id>>>();
        if (n == 0) throw validation_error("hypergraph: n must be positive");
        return Hypergraph::from_edges(n, edges);
    } catch (const json::exception& e) {
        throw validation_error(std::string("hypergraph JSON: ") + e.what());
    }
}

inline json to_json(const theory::ThresholdReport& rep) {
    json j;
    j["lambda"] = detail::number(rep.lambda);
    j["mu"] = detail::number(rep.mu);
    j["expected_isolated"] = detail::number(rep.expected_isolated);
    j["gap_bound"] = rep.gap_bound ? detail::number(*rep.gap_bound) : json(nullptr);
    return j;
}

}  // namespace hyperconn::io
