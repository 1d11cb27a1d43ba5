#pragma once

// Monte Carlo experiment engine: grid points of model specs, per-trial
// sampling on independent streams, ordered reduction, and CSV/JSON output.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "hyperconn/io.hpp"
#include "hyperconn/model.hpp"
#include "hyperconn/rng.hpp"
#include "hyperconn/sampling.hpp"
#include "hyperconn/structure.hpp"
#include "hyperconn/theory.hpp"

namespace hyperconn::harness {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Statistics

// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_ci(std::uint64_t successes, std::uint64_t trials,
                                           double confidence = 0.95) {
    if (trials == 0 || successes > trials) throw parameter_error("wilson_ci needs 0 <= successes <= trials, trials >= 1");
    if (!(confidence > 0.0 && confidence < 1.0)) throw parameter_error("confidence must lie in (0, 1)");
    const boost::math::normal_distribution<double> normal;
    const double z = boost::math::quantile(normal, 0.5 + 0.5 * confidence);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double center = (p + 0.5 * z2n) / (1.0 + z2n);
    const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n);
    double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
    double high = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

// Streaming mean and variance (Welford), fed in trial order.
class RunningStats {
public:
    void add(double v) {
        ++count_;
        const double delta = v - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (v - mean_);
    }

    std::uint64_t count() const { return count_; }
    double mean() const { return count_ ? mean_ : std::nan(""); }
    // Sample variance (n - 1 denominator).
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// ---------------------------------------------------------------------------
// Configuration

struct GridPoint {
    std::string scenario = "custom";
    ModelSpec spec;
    std::optional<double> c_offset;
};

enum class OutputFormat { csv, json };

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{
        "scenario",  "variant",          "n",      "m",  "d_or_dist",         "c_offset",
        "trials",    "connected_rate",   "ci_low", "ci_high", "isolated_mean", "no_isolated_rate",
        "lambda",    "mu",               "expected_isolated", "disconnect_bound", "seed"};
    return cols;
}

struct ExperimentConfig {
    std::vector<GridPoint> grid;
    std::uint64_t trials = 1000;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
    double confidence = 0.95;
    std::size_t max_attempts = default_max_attempts;
    std::vector<std::string> outputs = csv_columns();  // CSV columns to write, canonical order kept
    std::string output_path;                           // empty: stdout
    OutputFormat format = OutputFormat::csv;
};

inline std::vector<std::string> validate(const ExperimentConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.trials < 1) out.emplace_back("trials must be at least 1");
    if (cfg.grid.empty()) out.emplace_back("grid must contain at least one model spec");
    if (cfg.workers < 1) out.emplace_back("workers must be at least 1");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) out.emplace_back("confidence must lie in (0, 1)");
    if (cfg.max_attempts < 1) out.emplace_back("max_attempts must be at least 1");
    for (const auto& col : cfg.outputs) {
        if (std::find(csv_columns().begin(), csv_columns().end(), col) == csv_columns().end()) {
            out.push_back("unknown output column \"" + col + "\"");
        }
    }
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        for (const auto& v : hyperconn::validate(cfg.grid[i].spec)) {
            out.push_back("grid point " + std::to_string(i) + ": " + v);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Results

struct TheoryColumns {
    theory::ThresholdReport report;
    std::optional<double> disconnect_bound;
    std::optional<theory::Sandwich> sandwich;
    std::optional<double> distinct_probability;  // given-sizes variants only
};

struct TrialSummary {
    GridPoint point;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t connected_count = 0;
    std::uint64_t no_isolated_count = 0;
    double isolated_mean = 0.0;
    double isolated_variance = 0.0;
    double component_count_mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t sampling_attempts = 0;
    TheoryColumns theory;
    std::optional<std::string> error;  // set when the sampler gave up on some trial

    double connected_rate() const { return static_cast<double>(connected_count) / static_cast<double>(trials); }
    double no_isolated_rate() const { return static_cast<double>(no_isolated_count) / static_cast<double>(trials); }
};

inline std::string describe_sizes(const ModelSpec& spec) {
    auto dist_text = [](const SizeDistribution& f) {
        std::string s;
        for (std::uint32_t x = 0; x < f.weights.size(); ++x) {
            if (f.weights[x] <= 0.0) continue;
            if (!s.empty()) s += "+";
            s += fmt::format("{}*d{}", f.weights[x], x);
        }
        return s;
    };
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GivenSizes>) {
                std::string s = "counts{";
                bool first = true;
                for (const auto& [x, c] : v.counts.counts) {
                    s += fmt::format("{}{}:{}", first ? "" : " ", x, c);
                    first = false;
                }
                return s + "}";
            } else if constexpr (std::is_same_v<T, IntersectionGraph>) {
                return dist_text(v.dist);
            } else if constexpr (std::is_same_v<T, Shotgun>) {
                if (const auto* p = std::get_if<SizeProfile>(&v.sizes)) {
                    std::map<std::uint32_t, std::uint64_t> runs;
                    for (auto x : p->sizes) ++runs[x];
                    std::string s = "profile{";
                    bool first = true;
                    for (const auto& [x, c] : runs) {
                        s += fmt::format("{}{}:{}", first ? "" : " ", x, c);
                        first = false;
                    }
                    return s + "}";
                }
                return dist_text(std::get<IidSizes>(v.sizes).dist);
            } else {
                return std::to_string(v.d);
            }
        },
        spec.variant);
}

// Closed-form columns for one grid point. The disconnection bound holds for
// the regular shotgun model; for the uniform regular hypergraph it is divided
// by the distinctness probability (conditioning on distinct edges). The
// isolation sandwich is reported for shotgun-type variants only.
inline TheoryColumns theory_columns(const ModelSpec& spec) {
    TheoryColumns t;
    const auto law = product_law(spec);
    t.report = theory::threshold_report(law);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RegularShotgun>) {
                t.disconnect_bound = theory::disconnect_upper_bound(v.n, v.m, v.d);
            } else if constexpr (std::is_same_v<T, RegularHypergraph>) {
                const double pd = theory::distinct_probability(SizeCounts{v.n, {{v.d, v.m}}}).exact;
                t.distinct_probability = pd;
                t.disconnect_bound = pd > 0.0 ? theory::disconnect_upper_bound(v.n, v.m, v.d) / pd : pos_inf;
            } else if constexpr (std::is_same_v<T, GivenSizes>) {
                t.distinct_probability = theory::distinct_probability(v.counts).exact;
            }
            if constexpr (std::is_same_v<T, RegularShotgun> || std::is_same_v<T, Shotgun> ||
                          std::is_same_v<T, IntersectionGraph>) {
                t.sandwich = theory::isolated_sandwich(law);
            }
        },
        spec.variant);
    return t;
}

// ---------------------------------------------------------------------------
// Execution

struct TrialOutcome {
    bool sampled = false;
    bool connected = false;
    std::uint32_t isolated = 0;
    std::uint32_t components = 0;
    std::uint32_t attempts = 0;
};

using WarningSink = std::function<void(const std::string&)>;

namespace detail {

inline TrialOutcome run_trial(ModelSampler& sampler, std::uint64_t seed, std::uint64_t trial,
                              std::optional<std::string>& error) {
    RngStream rng(seed, trial);
    TrialOutcome out;
    try {
        auto s = sampler(rng);
        out.sampled = true;
        out.attempts = static_cast<std::uint32_t>(s.attempts);
        out.components = component_count(s.graph);
        out.connected = out.components == 1 || s.graph.n() <= 1;
        out.isolated = static_cast<std::uint32_t>(isolated_count(s.graph));
    } catch (const retry_budget_error& e) {
        error = e.what();
    }
    return out;
}

}  // namespace detail

// Runs every grid point. Trial t of each point uses RngStream(master_seed, t);
// outcomes are stored by trial index and reduced in index order, so results
// do not depend on the worker count.
inline std::vector<TrialSummary> run(const ExperimentConfig& cfg, const WarningSink& warn = {}) {
    if (auto v = validate(cfg); !v.empty()) throw validation_error(hyperconn::detail::join(v, "; "));
    std::vector<TrialSummary> results;
    results.reserve(cfg.grid.size());
    std::vector<TrialOutcome> outcomes(cfg.trials);
    for (const auto& point : cfg.grid) {
        TrialSummary summary;
        summary.point = point;
        summary.trials = cfg.trials;
        summary.seed = cfg.master_seed;
        summary.theory = theory_columns(point.spec);

        if (warn) {
            std::optional<std::string> w;
            if (const auto* g = std::get_if<GivenSizes>(&point.spec.variant)) w = rejection_warning(g->counts);
            if (const auto* r = std::get_if<RegularHypergraph>(&point.spec.variant)) {
                w = rejection_warning(SizeCounts{r->n, {{r->d, r->m}}});
            }
            if (w) warn(*w);
        }

        std::atomic<std::uint64_t> next{0};
        std::atomic<bool> failed{false};
        std::mutex error_mutex;
        std::optional<std::string> first_error;
        auto worker = [&] {
            ModelSampler sampler(point.spec, cfg.max_attempts);
            for (std::uint64_t t = next.fetch_add(1); t < cfg.trials && !failed.load(); t = next.fetch_add(1)) {
                std::optional<std::string> err;
                outcomes[t] = detail::run_trial(sampler, cfg.master_seed, t, err);
                if (err) {
                    failed.store(true);
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::move(err);
                }
            }
        };
        const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, cfg.trials));
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        }

        if (failed.load()) {
            summary.error = first_error;
            results.push_back(std::move(summary));
            continue;
        }
        RunningStats isolated;
        RunningStats components;
        for (std::uint64_t t = 0; t < cfg.trials; ++t) {
            const auto& o = outcomes[t];
            summary.connected_count += o.connected;
            summary.no_isolated_count += o.isolated == 0;
            summary.sampling_attempts += o.attempts;
            isolated.add(o.isolated);
            components.add(o.components);
        }
        summary.isolated_mean = isolated.mean();
        summary.isolated_variance = isolated.variance();
        summary.component_count_mean = components.mean();
        std::tie(summary.ci_low, summary.ci_high) = wilson_ci(summary.connected_count, cfg.trials, cfg.confidence);
        results.push_back(std::move(summary));
    }
    return results;
}

// ---------------------------------------------------------------------------
// Scenario presets

struct ScenarioOverrides {
    std::optional<std::vector<std::uint32_t>> n_grid;
    std::optional<std::vector<double>> c_grid;
    std::optional<std::uint32_t> d;
    std::optional<std::uint64_t> m;
    std::optional<std::vector<double>> weights;  // size law for rig-threshold
    bool uniform_hypergraph = false;             // regular variants: sample H_nmd instead of H*_nmd
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"regular-threshold", "rig-threshold", "large-hyperedges",
                                                "small-and-full"};
    return names;
}

inline const std::vector<std::uint32_t> default_n_grid{1U << 10, 1U << 12, 1U << 14};
inline const std::vector<double> default_c_grid{-3.0, -1.0, 0.0, 1.0, 3.0};

// m = ceil(n (log n + c) / mean_size), at least 1.
inline std::uint64_t threshold_m(std::uint32_t n, double c, double mean_size) {
    const double m = std::ceil(static_cast<double>(n) * (std::log(static_cast<double>(n)) + c) / mean_size);
    return m < 1.0 ? 1 : static_cast<std::uint64_t>(m);
}

// Parameters of the large-hyperedge example: m = floor(log^{3/2} n),
// omega = log n / sqrt(m), d = floor((n/m)(log n - omega)).
struct LargeHyperedgeParams {
    std::uint64_t m = 0;
    double omega = 0.0;
    std::uint32_t d = 0;
};

inline LargeHyperedgeParams large_hyperedge_params(std::uint32_t n) {
    const double ln = std::log(static_cast<double>(n));
    LargeHyperedgeParams p;
    p.m = static_cast<std::uint64_t>(std::floor(std::pow(ln, 1.5)));
    p.omega = ln / std::sqrt(static_cast<double>(p.m));
    p.d = static_cast<std::uint32_t>(std::floor(static_cast<double>(n) / static_cast<double>(p.m) * (ln - p.omega)));
    return p;
}

// f = (1 - p) delta_2 + p delta_n with p = 1 - n^{-1/(2m)}.
inline SizeDistribution small_and_full_distribution(std::uint32_t n, std::uint64_t m) {
    if (n < 2) throw parameter_error("small-and-full needs n >= 2");
    const double p = -std::expm1(-std::log(static_cast<double>(n)) / (2.0 * static_cast<double>(m)));
    SizeDistribution f{n, std::vector<double>(std::size_t{n} + 1, 0.0)};
    f.weights[2] += 1.0 - p;
    f.weights[n] += p;
    return f;
}

inline ExperimentConfig scenario(const std::string& name, const ScenarioOverrides& o = {}) {
    ExperimentConfig cfg;
    if (o.trials) cfg.trials = *o.trials;
    if (o.seed) cfg.master_seed = *o.seed;
    const auto n_grid = o.n_grid.value_or(default_n_grid);
    const auto c_grid = o.c_grid.value_or(default_c_grid);
    auto regular = [&](std::uint32_t n, std::uint64_t m, std::uint32_t d) {
        return o.uniform_hypergraph ? ModelSpec{RegularHypergraph{n, m, d}} : ModelSpec{RegularShotgun{n, m, d}};
    };

    if (name == "regular-threshold") {
        const std::uint32_t d = o.d.value_or(3);
        for (auto n : n_grid) {
            for (double c : c_grid) cfg.grid.push_back({name, regular(n, threshold_m(n, c, d), d), c});
        }
    } else if (name == "rig-threshold") {
        const auto weights = o.weights.value_or(std::vector<double>{0.0, 0.0, 0.5, 0.0, 0.5});
        for (auto n : n_grid) {
            SizeDistribution f{n, weights};
            f.ensure_valid();
            const double mean = moment(f, 1);
            if (!(mean > 0.0)) throw validation_error("rig-threshold needs mass on sizes >= 2");
            for (double c : c_grid) {
                cfg.grid.push_back({name, ModelSpec{IntersectionGraph{f, threshold_m(n, c, mean)}}, c});
            }
        }
    } else if (name == "large-hyperedges") {
        const auto grid = o.n_grid.value_or(std::vector<std::uint32_t>{1U << 10, 1U << 12, 1U << 14, 1U << 16});
        for (auto n : grid) {
            const auto p = large_hyperedge_params(n);
            cfg.grid.push_back({name, regular(n, p.m, p.d), std::nullopt});
        }
    } else if (name == "small-and-full") {
        const auto grid = o.n_grid.value_or(std::vector<std::uint32_t>{10000});
        for (auto n : grid) {
            const std::uint64_t m = o.m.value_or(std::max<std::uint64_t>(1, n / 10));
            cfg.grid.push_back({name, ModelSpec{Shotgun{IidSizes{small_and_full_distribution(n, m), m}}}, std::nullopt});
        }
    } else {
        throw validation_error("unknown scenario \"" + name + "\"");
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::map<std::string, std::string> csv_row(const TrialSummary& s) {
    const bool ok = !s.error.has_value();
    auto stat = [&](double v) { return ok ? num(v) : std::string{}; };
    return {
        {"scenario", csv_escape(s.point.scenario)},
        {"variant", std::string(s.point.spec.variant_name())},
        {"n", std::to_string(s.point.spec.n())},
        {"m", std::to_string(s.point.spec.m())},
        {"d_or_dist", csv_escape(describe_sizes(s.point.spec))},
        {"c_offset", s.point.c_offset ? num(*s.point.c_offset) : ""},
        {"trials", std::to_string(s.trials)},
        {"connected_rate", stat(s.connected_rate())},
        {"ci_low", stat(s.ci_low)},
        {"ci_high", stat(s.ci_high)},
        {"isolated_mean", stat(s.isolated_mean)},
        {"no_isolated_rate", stat(s.no_isolated_rate())},
        {"lambda", num(s.theory.report.lambda)},
        {"mu", num(s.theory.report.mu)},
        {"expected_isolated", num(s.theory.report.expected_isolated)},
        {"disconnect_bound", s.theory.disconnect_bound ? num(*s.theory.disconnect_bound) : ""},
        {"seed", std::to_string(s.seed)},
    };
}

}  // namespace detail

inline std::string to_csv(const std::vector<TrialSummary>& results,
                          const std::vector<std::string>& outputs = csv_columns()) {
    std::vector<std::string> cols;
    for (const auto& c : csv_columns()) {
        if (std::find(outputs.begin(), outputs.end(), c) != outputs.end()) cols.push_back(c);
    }
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\n";
    for (const auto& s : results) {
        auto row = detail::csv_row(s);
        for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + row[cols[i]];
        out += "\n";
    }
    return out;
}

inline json metadata(const ExperimentConfig& cfg) {
    return json{{"rng", std::string(RngStream::algorithm)},
                {"master_seed", cfg.master_seed},
                {"trials", cfg.trials},
                {"confidence", cfg.confidence},
                {"max_attempts", cfg.max_attempts},
                {"exact_binomial_limit", exact_binomial_limit},
                {"trial_stream", "trial t of every grid point uses stream index t"}};
}

inline json to_json(const TrialSummary& s) {
    using io::detail::number;
    json j;
    j["scenario"] = s.point.scenario;
    j["spec"] = io::to_json(s.point.spec);
    j["c_offset"] = s.point.c_offset ? json(*s.point.c_offset) : json(nullptr);
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    if (s.error) {
        j["error"] = *s.error;
    } else {
        j["connected_count"] = s.connected_count;
        j["connected_rate"] = s.connected_rate();
        j["wilson_ci_low"] = s.ci_low;
        j["wilson_ci_high"] = s.ci_high;
        j["isolated_node_mean"] = number(s.isolated_mean);
        j["isolated_node_variance"] = number(s.isolated_variance);
        j["no_isolated_count"] = s.no_isolated_count;
        j["component_count_mean"] = number(s.component_count_mean);
        j["sampling_attempts"] = s.sampling_attempts;
    }
    json th = io::to_json(s.theory.report);
    th["disconnect_bound"] = s.theory.disconnect_bound ? number(*s.theory.disconnect_bound) : json(nullptr);
    if (s.theory.sandwich) {
        th["isolated_sandwich"] = {number(s.theory.sandwich->lower), number(s.theory.sandwich->upper)};
    } else {
        th["isolated_sandwich"] = nullptr;
    }
    th["distinct_probability"] =
        s.theory.distinct_probability ? number(*s.theory.distinct_probability) : json(nullptr);
    j["theory"] = th;
    return j;
}

inline std::string to_json_text(const ExperimentConfig& cfg, const std::vector<TrialSummary>& results) {
    json doc;
    doc["metadata"] = metadata(cfg);
    doc["results"] = json::array();
    for (const auto& s : results) doc["results"].push_back(to_json(s));
    return doc.dump(2) + "\n";
}

// Writes results in the configured format; CSV output to a file gets a
// PATH.meta.json sidecar with the run metadata.
inline void write_results(const ExperimentConfig& cfg, const std::vector<TrialSummary>& results,
                          std::ostream& fallback) {
    const std::string text =
        cfg.format == OutputFormat::csv ? to_csv(results, cfg.outputs) : to_json_text(cfg, results);
    if (cfg.output_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + cfg.output_path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + cfg.output_path);
    if (cfg.format == OutputFormat::csv) {
        std::ofstream meta(cfg.output_path + ".meta.json", std::ios::binary);
        if (!meta) throw std::runtime_error("cannot open " + cfg.output_path + ".meta.json");
        meta << metadata(cfg).dump(2) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Config files
//
//   {"trials": 1000, "seed": 7, "workers": 4, "confidence": 0.95,
//    "max_attempts": 1000, "format": "csv", "out": "results.csv",
//    "outputs": ["n", "connected_rate"],
//    "specs": [ <model spec>, ... ]}
//
// or, instead of "specs", labelled grid points:
//   "grid": [{"scenario": "regular-threshold", "c_offset": -1, "spec": <model spec>}, ...]
// or a preset:
//   "scenario": {"name": "regular-threshold", "n": [1024], "c": [-1, 1], "d": 3,
//                "m": 100, "weights": [...], "uniform_hypergraph": false}

inline ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw validation_error("config must be a JSON object");
    ExperimentConfig cfg;
    try {
        if (j.contains("scenario")) {
            const auto& s = j.at("scenario");
            ScenarioOverrides o;
            if (s.contains("n")) o.n_grid = s.at("n").get<std::vector<std::uint32_t>>();
            if (s.contains("c")) o.c_grid = s.at("c").get<std::vector<double>>();
            if (s.contains("d")) o.d = s.at("d").get<std::uint32_t>();
            if (s.contains("m")) o.m = s.at("m").get<std::uint64_t>();
            if (s.contains("weights")) o.weights = s.at("weights").get<std::vector<double>>();
            o.uniform_hypergraph = s.value("uniform_hypergraph", false);
            cfg = scenario(s.at("name").get<std::string>(), o);
        }
        if (j.contains("specs")) {
            for (const auto& spec : j.at("specs")) cfg.grid.push_back({"custom", io::spec_from_json(spec), std::nullopt});
        }
        if (j.contains("grid")) {
            for (const auto& g : j.at("grid")) {
                GridPoint point{g.value("scenario", std::string("custom")), io::spec_from_json(g.at("spec")),
                                std::nullopt};
                if (g.contains("c_offset") && !g.at("c_offset").is_null()) point.c_offset = g.at("c_offset").get<double>();
                cfg.grid.push_back(std::move(point));
            }
        }
        cfg.trials = j.value("trials", cfg.trials);
        cfg.master_seed = j.value("seed", cfg.master_seed);
        cfg.workers = j.value("workers", cfg.workers);
        cfg.confidence = j.value("confidence", cfg.confidence);
        cfg.max_attempts = j.value("max_attempts", cfg.max_attempts);
        if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::vector<std::string>>();
        cfg.output_path = j.value("out", cfg.output_path);
        const auto format = j.value("format", std::string("csv"));
        if (format == "csv") cfg.format = OutputFormat::csv;
        else if (format == "json") cfg.format = OutputFormat::json;
        else throw validation_error("format must be csv or json");
    } catch (const json::exception& e) {
        throw validation_error(std::string("config: ") + e.what());
    }
    if (auto v = validate(cfg); !v.empty()) throw validation_error(hyperconn::detail::join(v, "; "));
    return cfg;
}

// Fully expanded form of a config; config_from_json reads it back unchanged.
inline json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.master_seed;
    j["workers"] = cfg.workers;
    j["confidence"] = cfg.confidence;
    j["max_attempts"] = cfg.max_attempts;
    j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    j["outputs"] = cfg.outputs;
    if (!cfg.output_path.empty()) j["out"] = cfg.output_path;
    j["grid"] = json::array();
    for (const auto& g : cfg.grid) {
        j["grid"].push_back({{"scenario", g.scenario},
                             {"c_offset", g.c_offset ? json(*g.c_offset) : json(nullptr)},
                             {"spec", io::to_json(g.spec)}});
    }
    return j;
}

}  // namespace hyperconn::harness
