#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quack/baselines.hpp"
#include "quack/engine.hpp"
#include "quack/envs.hpp"
#include "quack/graph.hpp"
#include "quack/policies.hpp"
#include "quack/trace.hpp"

namespace quack {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::runtime_error {
    InvariantViolation(const std::string& msg, RunTrace trace)
        : std::runtime_error(msg), offending_trace(std::move(trace)) {}
    RunTrace offending_trace;
};

enum class AlgorithmKind { quack, independent, gossip_ucb };

AlgorithmKind algorithm_from_string(const std::string& name);
std::string to_string(AlgorithmKind kind);

enum class LeaderMode { best, fixed };

/// Fully resolved experiment description, parsed from the flat key = value
/// config format documented in the README.
struct ExperimentConfig {
    TopologyKind topology = TopologyKind::star;
    int m = 1;
    std::string edges_file;  // custom topology only

    EnvironmentModel env = EnvironmentModel::bernoulli({0.5});

    AlgorithmKind algorithm = AlgorithmKind::quack;
    PolicySpec policy;            // quack / independent
    double gossip_gamma = 1.01;   // gossip_ucb
    double gossip_sigma = 0.5;    // gossip_ucb

    int horizon = 1;
    int replications = 1;
    std::uint64_t master_seed = 1;
    LeaderMode leader_mode = LeaderMode::best;
    AgentId fixed_leader = 1;

    Graph build_graph() const;
    std::string label() const;  // e.g. "quack-ucb"
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_string(const std::string& text);

/// Per-round mean and nearest-rank 2.5/97.5 quantiles across replications.
struct AggregateStats {
    std::vector<double> mean;
    std::vector<double> q025;
    std::vector<double> q975;
    int replications = 0;
    /// Rounds where the mean escaped the quantile envelope despite R >= 40;
    /// reported, never hidden.
    long long envelope_violations = 0;

    double final_mean() const { return mean.empty() ? 0.0 : mean.back(); }
};

/// Nearest-rank (type-1) quantile of an unsorted sample, p in (0, 1].
double quantile_nearest_rank(std::vector<double> values, double p);

struct ExperimentResult {
    AggregateStats stats;
    std::vector<RunTrace> traces;  // kept only on request
    long long invariant_violations = 0;
    std::string first_violation;
    AgentId leader = 0;  // 0 when the algorithm has no leader
};

struct RunOptions {
    bool keep_traces = false;
    bool check_invariants = true;
    bool abort_on_violation = true;
};

/// Runs `replications` deterministic runs (run i uses seed stream i of the
/// master seed) and aggregates. Throws InvariantViolation if a run trips a
/// runtime check and abort_on_violation is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

// --- theoretical reference values ------------------------------------------

/// Gap-dependent upper bound for the reduction driven by UCB:
/// sum_{a: gap>0} 16 sigma^2 ln(m n) / gap_a + (3 + 3 sum_w d_vw) sum gap_a.
double quack_ucb_bound(const EnvironmentModel& env, const Graph& g, AgentId leader, long long n,
                       double sigma);

/// Composes an arbitrary single-agent bound S(T): S(m n) + 3 sum_w d_vw * sum gaps.
double theorem1_bound(const std::function<double(long long)>& single_agent_bound, const Graph& g,
                      AgentId leader, const std::vector<double>& gaps, long long n);

/// Minimax reference line sqrt(m t (k - 1)) / 27.
double minimax_lower_bound(int m, int k, long long t);

// --- file output ------------------------------------------------------------

/// Aggregate CSV: header `round,mean_regret,q025,q975`, 17-significant-digit
/// doubles so values round-trip exactly.
void write_aggregate_csv(const AggregateStats& stats, const std::string& path);
AggregateStats read_aggregate_csv(const std::string& path);

/// Trace CSV: `round,action_1..action_m,cum_regret,pseudo_rounds,invariants_ok`.
void write_trace_csv(const RunTrace& trace, const std::string& path);

struct PlotSeries {
    std::string label;
    std::vector<double> mean;
    std::vector<double> lo;  // may be empty: no band
    std::vector<double> hi;
};

/// Deterministic multi-series SVG line plot with shaded quantile bands.
std::string render_svg_string(const std::vector<PlotSeries>& series);
void render_svg(const std::vector<PlotSeries>& series, const std::string& path);

}  // namespace quack
