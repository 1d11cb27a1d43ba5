// hyperconn: sample, analyze and simulate random hypergraphs.
//
//   hyperconn sample   --spec-json '{"variant":"RegularShotgun","n":10,"m":5,"d":3}' --seed 1
//   hyperconn analyze  graph.json
//   hyperconn theory   --spec spec.json
//   hyperconn run      config.json --workers 4 --out results.csv
//   hyperconn scenario regular-threshold --n 1024 --c -1,1 --run
//
// Exit codes: 0 success, 1 I/O error, 2 config/validation error,
// 3 sampler retry budget exhausted on every grid point.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hyperconn/hyperconn.hpp"

namespace {

using hyperconn::io::json;
namespace harness = hyperconn::harness;

constexpr int exit_ok = 0;
constexpr int exit_io = 1;
constexpr int exit_config = 2;
constexpr int exit_retry = 3;

class io_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_failure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw hyperconn::validation_error(what + ": " + e.what());
    }
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw io_failure("cannot open " + out_path + " for writing");
    out << text;
}

struct SpecInput {
    std::string path;
    std::string inline_json;

    hyperconn::ModelSpec load() const {
        if (path.empty() == inline_json.empty()) {
            throw hyperconn::validation_error("give exactly one of --spec or --spec-json");
        }
        const auto text = path.empty() ? inline_json : read_text(path);
        auto spec = hyperconn::io::spec_from_json(parse_json(text, "model spec"));
        hyperconn::ensure_valid(spec);
        return spec;
    }
};

struct RunFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<unsigned> workers;
    std::optional<std::string> format;
    std::optional<std::string> out;

    void add_to(CLI::App* app) {
        app->add_option("--seed", seed, "Master seed");
        app->add_option("--trials", trials, "Trials per grid point");
        app->add_option("--workers", workers, "Worker threads");
        app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--out", out, "Output path (default stdout)");
    }

    void apply(harness::ExperimentConfig& cfg) const {
        if (seed) cfg.master_seed = *seed;
        if (trials) cfg.trials = *trials;
        if (workers) cfg.workers = *workers;
        if (format) cfg.format = *format == "json" ? harness::OutputFormat::json : harness::OutputFormat::csv;
        if (out) cfg.output_path = *out;
    }
};

int execute(const harness::ExperimentConfig& cfg) {
    if (auto v = harness::validate(cfg); !v.empty()) {
        throw hyperconn::validation_error(hyperconn::detail::join(v, "; "));
    }
    auto results = harness::run(cfg, [](const std::string& w) { std::cerr << "warning: " << w << "\n"; });
    harness::write_results(cfg, results, std::cout);
    std::size_t failed = 0;
    for (const auto& r : results) {
        if (r.error) {
            ++failed;
            std::cerr << "error: " << r.point.spec.variant_name() << " n=" << r.point.spec.n() << ": " << *r.error
                      << "\n";
        }
    }
    return failed == results.size() ? exit_retry : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random hypergraph connectivity laboratory"};
    app.require_subcommand(1);

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Draw one hypergraph and print it as JSON");
    SpecInput sample_spec;
    std::uint64_t sample_seed = 0;
    std::uint64_t sample_stream = 0;
    std::size_t sample_attempts = hyperconn::default_max_attempts;
    std::string sample_out;
    sample_cmd->add_option("--spec", sample_spec.path, "Model spec JSON file");
    sample_cmd->add_option("--spec-json", sample_spec.inline_json, "Model spec as a JSON string");
    sample_cmd->add_option("--seed", sample_seed, "Master seed");
    sample_cmd->add_option("--stream", sample_stream, "Stream index");
    sample_cmd->add_option("--max-attempts", sample_attempts, "Rejection budget for given-sizes models");
    sample_cmd->add_option("--out", sample_out, "Output path (default stdout)");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "Connectivity, isolation and components of a hypergraph");
    std::string analyze_in = "-";
    std::string analyze_out;
    analyze_cmd->add_option("input", analyze_in, "Hypergraph JSON file, - for stdin");
    analyze_cmd->add_option("--out", analyze_out, "Output path (default stdout)");

    // theory
    auto* theory_cmd = app.add_subcommand("theory", "Closed-form thresholds for a model spec");
    SpecInput theory_spec;
    std::string theory_out;
    theory_cmd->add_option("--spec", theory_spec.path, "Model spec JSON file");
    theory_cmd->add_option("--spec-json", theory_spec.inline_json, "Model spec as a JSON string");
    theory_cmd->add_option("--out", theory_out, "Output path (default stdout)");

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute an experiment config");
    std::string run_config;
    RunFlags run_flags;
    run_cmd->add_option("config", run_config, "Experiment config JSON file")->required();
    run_flags.add_to(run_cmd);

    // scenario
    auto* scenario_cmd = app.add_subcommand("scenario", "Expand a preset experiment, optionally run it");
    std::string scenario_name;
    harness::ScenarioOverrides overrides;
    std::vector<std::uint32_t> n_grid;
    std::vector<double> c_grid;
    std::vector<double> weights;
    std::optional<std::uint32_t> d_override;
    std::optional<std::uint64_t> m_override;
    bool scenario_run = false;
    RunFlags scenario_flags;
    scenario_cmd->add_option("name", scenario_name, "Preset name")
        ->required()
        ->check(CLI::IsMember(harness::scenario_names()));
    scenario_cmd->add_option("--n", n_grid, "Node-count grid")->delimiter(',');
    scenario_cmd->add_option("--c", c_grid, "Threshold offsets")->delimiter(',')->allow_extra_args(false);
    scenario_cmd->add_option("--d", d_override, "Hyperedge size (regular presets)");
    scenario_cmd->add_option("--m", m_override, "Hyperedge count (small-and-full)");
    scenario_cmd->add_option("--weights", weights, "Size law f(0..) for rig-threshold")->delimiter(',');
    scenario_cmd->add_flag("--uniform-hypergraph", overrides.uniform_hypergraph,
                           "Sample uniform regular hypergraphs instead of the shotgun model");
    scenario_cmd->add_flag("--run", scenario_run, "Run the expanded experiment");
    scenario_flags.add_to(scenario_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*sample_cmd) {
            const auto spec = sample_spec.load();
            hyperconn::RngStream rng(sample_seed, sample_stream);
            const auto s = hyperconn::sample(spec, rng, sample_attempts);
            emit(hyperconn::io::to_json(s.graph).dump() + "\n", sample_out);
            return exit_ok;
        }
        if (*analyze_cmd) {
            const auto h = hyperconn::io::hypergraph_from_json(parse_json(read_text(analyze_in), "hypergraph"));
            json j;
            j["n"] = h.n();
            j["edge_count"] = h.edge_count();
            j["connected"] = hyperconn::is_connected(h);
            const auto isolated = hyperconn::isolated_nodes(h);
            j["isolated_count"] = isolated.size();
            j["isolated_nodes"] = isolated;
            j["component_count"] = hyperconn::component_count(h);
            j["component_sizes"] = hyperconn::component_sizes(h);
            emit(j.dump(2) + "\n", analyze_out);
            return exit_ok;
        }
        if (*theory_cmd) {
            const auto spec = theory_spec.load();
            const auto cols = harness::theory_columns(spec);
            json j = hyperconn::io::to_json(cols.report);
            j["spec"] = hyperconn::io::to_json(spec);
            using hyperconn::io::detail::number;
            j["disconnect_bound"] = cols.disconnect_bound ? number(*cols.disconnect_bound) : json(nullptr);
            j["isolated_sandwich"] =
                cols.sandwich ? json{number(cols.sandwich->lower), number(cols.sandwich->upper)} : json(nullptr);
            j["distinct_probability"] =
                cols.distinct_probability ? number(*cols.distinct_probability) : json(nullptr);
            emit(j.dump(2) + "\n", theory_out);
            return exit_ok;
        }
        if (*run_cmd) {
            auto cfg = harness::config_from_json(parse_json(read_text(run_config), "config"));
            run_flags.apply(cfg);
            return execute(cfg);
        }
        if (*scenario_cmd) {
            if (!n_grid.empty()) overrides.n_grid = n_grid;
            if (!c_grid.empty()) overrides.c_grid = c_grid;
            if (!weights.empty()) overrides.weights = weights;
            overrides.d = d_override;
            overrides.m = m_override;
            auto cfg = harness::scenario(scenario_name, overrides);
            scenario_flags.apply(cfg);
            if (scenario_run) return execute(cfg);
            emit(harness::config_to_json(cfg).dump(2) + "\n", cfg.output_path);
            return exit_ok;
        }
    } catch (const hyperconn::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const hyperconn::parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const hyperconn::retry_budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_retry;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
    return exit_ok;
}
