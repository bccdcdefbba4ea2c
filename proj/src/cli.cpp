#include "quack/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "quack/experiments.hpp"

namespace quack {

namespace {

namespace fs = std::filesystem;

struct RunArgs {
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    bool traces = false;
    bool bounds = false;
};

int do_run(const RunArgs& args) {
    ExperimentConfig cfg = parse_config_file(args.config_path);
    if (args.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(args.seed);

    fs::path out = args.out_dir.empty() ? fs::path(".") : fs::path(args.out_dir);
    fs::create_directories(out);

    RunOptions options;
    options.keep_traces = args.traces;

    ExperimentResult result;
    try {
        result = run_experiment(cfg, options);
    } catch (const InvariantViolation& e) {
        const fs::path dump = out / "violation_trace.csv";
        write_trace_csv(e.offending_trace, dump.string());
        std::cerr << "error: " << e.what() << "\n"
                  << "offending trace written to " << dump.string() << "\n";
        return 1;
    }

    write_aggregate_csv(result.stats, (out / "aggregate.csv").string());

    std::vector<PlotSeries> series;
    series.push_back({cfg.label(), result.stats.mean, result.stats.q025, result.stats.q975});
    if (args.bounds && cfg.algorithm == AlgorithmKind::quack &&
        cfg.policy.kind == PolicySpec::Kind::ucb) {
        const Graph g = cfg.build_graph();
        PlotSeries upper{"ucb upper bound", {}, {}, {}};
        PlotSeries lower{"minimax lower bound", {}, {}, {}};
        upper.mean.assign(cfg.horizon, quack_ucb_bound(cfg.env, g, result.leader, cfg.horizon,
                                                       cfg.policy.sigma));
        for (int t = 1; t <= cfg.horizon; ++t)
            lower.mean.push_back(minimax_lower_bound(cfg.m, cfg.env.num_arms(), t));
        series.push_back(std::move(upper));
        series.push_back(std::move(lower));
    }
    render_svg(series, (out / "regret.svg").string());

    if (args.traces) {
        for (std::size_t i = 0; i < result.traces.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "trace_%03zu.csv", i);
            write_trace_csv(result.traces[i], (out / name).string());
        }
    }

    std::cout << "algorithm: " << cfg.label() << "\n";
    if (result.leader != 0) std::cout << "leader: " << result.leader << "\n";
    std::cout << "replications: " << cfg.replications << "\n"
              << "final mean group regret: " << result.stats.final_mean() << "\n"
              << "invariant violations: " << result.invariant_violations << "\n"
              << "wrote " << (out / "aggregate.csv").string() << " and "
              << (out / "regret.svg").string() << "\n";
    return 0;
}

int do_plot(const std::vector<std::string>& inputs, const std::vector<std::string>& labels,
            const std::string& out_path) {
    if (!labels.empty() && labels.size() != inputs.size())
        throw ConfigError("plot: --labels must match --in in length");
    std::vector<PlotSeries> series;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const AggregateStats stats = read_aggregate_csv(inputs[i]);
        const std::string label =
            labels.empty() ? fs::path(inputs[i]).stem().string() : labels[i];
        series.push_back({label, stats.mean, stats.q025, stats.q975});
    }
    render_svg(series, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int do_graph(const std::string& topology, int m, const std::string& edges_file, bool info,
             bool want_best_leader) {
    const TopologyKind kind = topology_from_string(topology);
    Graph g = [&] {
        if (kind == TopologyKind::custom) {
            if (edges_file.empty()) throw ConfigError("graph: custom topology requires --edges");
            return Graph::from_edge_list_file(edges_file);
        }
        return make_topology(kind, m);
    }();

    if (want_best_leader) {
        const BestLeader bl = best_leader(g);
        std::cout << "leader " << bl.leader << " sum " << bl.distance_sum << "\n";
    }
    if (info || !want_best_leader) {
        std::cout << "agents " << g.num_agents() << "\n"
                  << "edges " << g.num_edges() << "\n"
                  << "diameter " << diameter(g) << "\n";
        const BestLeader bl = best_leader(g);
        std::cout << "best_leader " << bl.leader << "\n"
                  << "distance_sum " << bl.distance_sum << "\n"
                  << "lambda2 " << second_eigenvalue_magnitude(communication_matrix(g)) << "\n";
    }
    return 0;
}

int do_check(const std::string& config_path, std::int64_t seed) {
    ExperimentConfig cfg = parse_config_file(config_path);
    if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);

    RunOptions options;
    options.abort_on_violation = false;

    const ExperimentResult result = run_experiment(cfg, options);
    std::cout << "algorithm: " << cfg.label() << "\n"
              << "replications: " << cfg.replications << "\n"
              << "invariant violations: " << result.invariant_violations << "\n";
    if (result.invariant_violations > 0) {
        std::cout << "first violation: " << result.first_violation << "\n";
        return 1;
    }
    std::cout << "all invariants hold\n";
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Cooperative multi-agent bandit simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run an experiment config and write CSV/SVG outputs");
    run->add_option("--config", run_args.config_path, "Experiment config file")->required();
    run->add_option("--seed", run_args.seed, "Override the master seed");
    run->add_option("--out", run_args.out_dir, "Output directory (default: current)");
    run->add_flag("--traces", run_args.traces, "Also write one CSV per run trace");
    run->add_flag("--bounds", run_args.bounds, "Add theoretical reference lines to the plot");

    std::vector<std::string> plot_inputs, plot_labels;
    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "Plot one or more aggregate CSVs as an SVG");
    plot->add_option("--in", plot_inputs, "Aggregate CSV files")->required()->expected(-1);
    plot->add_option("--labels", plot_labels, "Series labels (default: file stems)")->expected(-1);
    plot->add_option("--out", plot_out, "Output SVG path")->required();

    std::string graph_topology, graph_edges;
    int graph_m = 1;
    bool graph_info = false, graph_best = false;
    auto* graph = app.add_subcommand("graph", "Inspect a topology");
    graph->add_option("--topology", graph_topology, "cycle|grid|star|complete|custom")->required();
    graph->add_option("--m", graph_m, "Agent count")->required();
    graph->add_option("--edges", graph_edges, "Edge list file for custom topologies");
    graph->add_flag("--info", graph_info, "Print summary statistics");
    graph->add_flag("--best-leader", graph_best, "Print the best leader and its distance sum");

    std::string check_config;
    std::int64_t check_seed = -1;
    auto* check = app.add_subcommand("check", "Run the invariant suite for a config");
    check->add_option("--config", check_config, "Experiment config file")->required();
    check->add_option("--seed", check_seed, "Override the master seed");

    std::vector<const char*> argv;
    argv.push_back("quack");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return do_run(run_args);
        if (plot->parsed()) return do_plot(plot_inputs, plot_labels, plot_out);
        if (graph->parsed())
            return do_graph(graph_topology, graph_m, graph_edges, graph_info, graph_best);
        if (check->parsed()) return do_check(check_config, check_seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace quack
