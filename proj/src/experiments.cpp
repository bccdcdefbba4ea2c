#include "quack/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace quack {

AlgorithmKind algorithm_from_string(const std::string& name) {
    if (name == "quack") return AlgorithmKind::quack;
    if (name == "independent") return AlgorithmKind::independent;
    if (name == "gossip_ucb") return AlgorithmKind::gossip_ucb;
    throw ConfigError("unknown algorithm: " + name);
}

std::string to_string(AlgorithmKind kind) {
    switch (kind) {
        case AlgorithmKind::quack: return "quack";
        case AlgorithmKind::independent: return "independent";
        case AlgorithmKind::gossip_ucb: return "gossip_ucb";
    }
    return "?";
}

Graph ExperimentConfig::build_graph() const {
    if (topology == TopologyKind::custom) {
        if (edges_file.empty()) throw ConfigError("custom topology requires topology.edges");
        return Graph::from_edge_list_file(edges_file);
    }
    return make_topology(topology, m);
}

std::string ExperimentConfig::label() const {
    if (algorithm == AlgorithmKind::gossip_ucb) return "gossip-ucb";
    return to_string(algorithm) + "-" + to_string(policy.kind);
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

struct KeyValues {
    std::map<std::string, std::string> values;
    std::set<std::string> consumed;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    std::string get(const std::string& key) {
        auto it = values.find(key);
        if (it == values.end()) throw ConfigError("config: missing required key '" + key + "'");
        consumed.insert(key);
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        return get(key);
    }

    double get_double(const std::string& key) {
        const std::string raw = get(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' is not a number: " + raw);
        }
    }

    double get_double_or(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return get_double(key);
    }

    long long get_int(const std::string& key) {
        const std::string raw = get(key);
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' is not an integer: " + raw);
        }
    }

    long long get_int_or(const std::string& key, long long fallback) {
        if (!has(key)) return fallback;
        return get_int(key);
    }

    std::vector<double> get_list(const std::string& key) {
        const std::string raw = get(key);
        std::vector<double> out;
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
                if (pos != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw ConfigError("config: key '" + key + "' has a malformed list entry: " + item);
            }
        }
        if (out.empty()) throw ConfigError("config: key '" + key + "' has an empty list");
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : values) {
            if (consumed.count(key) == 0) throw ConfigError("config: unknown key '" + key + "'");
        }
    }
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

KeyValues tokenize_config(const std::string& text) {
    KeyValues kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key or value");
        if (kv.values.count(key) != 0)
            throw ConfigError("config: duplicate key '" + key + "'");
        kv.values[key] = value;
    }
    return kv;
}

EnvironmentModel parse_env(KeyValues& kv, const std::string& policy_kind) {
    const std::string kind = kv.get("env.kind");
    EnvironmentModel env = EnvironmentModel::bernoulli({0.5});
    if (kind == "bernoulli") {
        env = EnvironmentModel::bernoulli(kv.get_list("env.means"));
    } else if (kind == "gaussian") {
        env = EnvironmentModel::gaussian(kv.get_list("env.means"), kv.get_double_or("env.sigma", 1.0));
    } else if (kind == "alpha_stable") {
        env = EnvironmentModel::alpha_stable(kv.get_double("env.alpha"), kv.get_list("env.means"));
    } else if (kind == "duelling") {
        const auto flat = kv.get_list("env.preference");
        const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
        if (static_cast<std::size_t>(k) * k != flat.size())
            throw ConfigError("config: env.preference must hold a k*k row-major matrix");
        std::vector<std::vector<double>> pref(k, std::vector<double>(k));
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) pref[a][b] = flat[a * k + b];
        env = EnvironmentModel::duelling(pref);
    } else {
        throw ConfigError("config: unknown env.kind '" + kind + "'");
    }

    const std::string privacy = kv.get_or("env.privacy", "none");
    if (privacy != "none") {
        PrivacyMechanism mech;
        if (privacy == "laplace") {
            mech.kind = PrivacyMechanism::Kind::laplace;
        } else if (privacy == "bernoulli_response") {
            mech.kind = PrivacyMechanism::Kind::bernoulli_response;
        } else {
            throw ConfigError("config: unknown env.privacy '" + privacy + "'");
        }
        mech.epsilon = kv.get_double("env.privacy_epsilon");
        env = env.with_privacy(mech);
    }
    (void)policy_kind;
    return env;
}

}  // namespace

ExperimentConfig parse_config_string(const std::string& text) {
    KeyValues kv = tokenize_config(text);
    ExperimentConfig cfg;

    try {
        cfg.topology = topology_from_string(kv.get("topology.kind"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    cfg.m = static_cast<int>(kv.get_int("topology.m"));
    if (cfg.m < 1) throw ConfigError("config: topology.m must be >= 1");
    if (cfg.topology == TopologyKind::custom) cfg.edges_file = kv.get("topology.edges");

    cfg.algorithm = algorithm_from_string(kv.get("algo.kind"));

    std::string policy_kind = "ucb";
    if (cfg.algorithm != AlgorithmKind::gossip_ucb) {
        policy_kind = kv.get("algo.policy");
        try {
            cfg.policy.kind = policy_kind_from_string(policy_kind);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        cfg.policy.sigma = kv.get_double_or("algo.sigma", 0.5);
        cfg.policy.delta = kv.get_double_or("algo.delta", 0.0);
        cfg.policy.tail_eps = kv.get_double_or("algo.epsilon_tail", 1.0);
        cfg.policy.alpha_explore = kv.get_double_or("algo.alpha_explore", 0.51);
        cfg.policy.privacy_eps = kv.get_double_or("algo.epsilon_privacy", 1.0);
    } else {
        cfg.gossip_gamma = kv.get_double_or("algo.gamma", 1.01);
        cfg.gossip_sigma = kv.get_double_or("algo.sigma", 0.5);
    }

    cfg.env = parse_env(kv, policy_kind);

    cfg.horizon = static_cast<int>(kv.get_int("run.horizon"));
    if (cfg.horizon < 1) throw ConfigError("config: run.horizon must be >= 1");
    cfg.replications = static_cast<int>(kv.get_int("run.replications"));
    if (cfg.replications < 1) throw ConfigError("config: run.replications must be >= 1");
    cfg.master_seed = static_cast<std::uint64_t>(kv.get_int_or("run.seed", 1));

    const std::string leader = kv.get_or("run.leader", "best");
    if (leader == "best") {
        cfg.leader_mode = LeaderMode::best;
    } else if (leader.rfind("fixed:", 0) == 0) {
        cfg.leader_mode = LeaderMode::fixed;
        try {
            cfg.fixed_leader = std::stoi(leader.substr(6));
        } catch (const std::exception&) {
            throw ConfigError("config: run.leader fixed id is malformed: " + leader);
        }
    } else {
        throw ConfigError("config: run.leader must be 'best' or 'fixed:<id>'");
    }

    kv.reject_unknown();

    // cross-field checks
    if (cfg.algorithm != AlgorithmKind::gossip_ucb) {
        if (policy_mode(cfg.policy.kind) != cfg.env.mode())
            throw ConfigError("config: policy feedback mode does not match the environment");
    } else if (cfg.env.mode() != FeedbackMode::reward) {
        throw ConfigError("config: gossip_ucb requires a reward environment");
    }
    if (cfg.leader_mode == LeaderMode::fixed && (cfg.fixed_leader < 1 || cfg.fixed_leader > cfg.m))
        throw ConfigError("config: run.leader fixed id out of range");
    if (cfg.topology == TopologyKind::grid) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cfg.m))));
        if (side * side != cfg.m) throw ConfigError("config: grid topology needs a square m");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_string(buf.str());
}

// ---------------------------------------------------------------------------
// aggregation

double quantile_nearest_rank(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in (0, 1]");
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(values.size())));
    return values[std::max<std::size_t>(rank, 1) - 1];
}

namespace {

AggregateStats aggregate_regret(const std::vector<std::vector<double>>& curves) {
    AggregateStats stats;
    stats.replications = static_cast<int>(curves.size());
    const std::size_t n = curves.front().size();
    stats.mean.resize(n);
    stats.q025.resize(n);
    stats.q975.resize(n);
    std::vector<double> column(curves.size());
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t r = 0; r < curves.size(); ++r) {
            column[r] = curves[r][t];
            acc += column[r];
        }
        stats.mean[t] = acc / static_cast<double>(curves.size());
        stats.q025[t] = quantile_nearest_rank(column, 0.025);
        stats.q975[t] = quantile_nearest_rank(column, 0.975);
        if (stats.replications >= 40 &&
            (stats.mean[t] < stats.q025[t] || stats.mean[t] > stats.q975[t])) {
            stats.envelope_violations += 1;
        }
    }
    return stats;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
    const Graph g = cfg.build_graph();

    ExperimentResult result;
    if (cfg.algorithm == AlgorithmKind::quack) {
        result.leader = cfg.leader_mode == LeaderMode::best ? best_leader(g).leader : cfg.fixed_leader;
    }

    PolicyFactory factory;
    if (cfg.algorithm != AlgorithmKind::gossip_ucb) {
        factory = make_policy_factory(cfg.policy, cfg.env.num_arms(), cfg.m, cfg.horizon);
    }

    std::vector<std::vector<double>> curves;
    curves.reserve(cfg.replications);

    for (int i = 0; i < cfg.replications; ++i) {
        const std::uint64_t run_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
        RunTrace trace;
        switch (cfg.algorithm) {
            case AlgorithmKind::quack: {
                QuackOptions qopt;
                qopt.check_invariants = options.check_invariants;
                trace = run_quack(cfg.env, g, result.leader, factory, cfg.horizon, run_seed, qopt);
                break;
            }
            case AlgorithmKind::independent:
                trace = run_independent(cfg.env, cfg.m, factory, cfg.horizon, run_seed);
                break;
            case AlgorithmKind::gossip_ucb:
                trace = run_gossip_ucb(cfg.env, g, cfg.gossip_gamma, cfg.gossip_sigma, cfg.horizon,
                                       run_seed, options.check_invariants);
                break;
        }

        if (!trace.invariants.ok()) {
            result.invariant_violations += trace.invariants.total();
            if (result.first_violation.empty()) {
                result.first_violation =
                    "run " + std::to_string(i) + ": " + trace.invariants.first_violation;
            }
            if (options.abort_on_violation) {
                throw InvariantViolation("invariant violated in " + cfg.label() + ", " +
                                             result.first_violation,
                                         std::move(trace));
            }
        }

        curves.push_back(trace.cum_regret);
        if (options.keep_traces) result.traces.push_back(std::move(trace));
    }

    result.stats = aggregate_regret(curves);
    return result;
}

// ---------------------------------------------------------------------------
// bounds

double quack_ucb_bound(const EnvironmentModel& env, const Graph& g, AgentId leader, long long n,
                       double sigma) {
    const auto& gaps = env.gaps();
    const double mn = static_cast<double>(g.num_agents()) * static_cast<double>(n);
    long long sum_d = 0;
    for (int d : bfs_distances(g, leader)) sum_d += d;

    double log_term = 0.0;
    double gap_sum = 0.0;
    for (double gap : gaps) {
        if (gap <= 0.0) continue;  // optimal arms contribute nothing
        log_term += 16.0 * sigma * sigma * std::log(mn) / gap;
        gap_sum += gap;
    }
    return log_term + (3.0 + 3.0 * static_cast<double>(sum_d)) * gap_sum;
}

double theorem1_bound(const std::function<double(long long)>& single_agent_bound, const Graph& g,
                      AgentId leader, const std::vector<double>& gaps, long long n) {
    long long sum_d = 0;
    for (int d : bfs_distances(g, leader)) sum_d += d;
    double gap_sum = 0.0;
    for (double gap : gaps) gap_sum += gap;
    const long long mn = static_cast<long long>(g.num_agents()) * n;
    return single_agent_bound(mn) + 3.0 * static_cast<double>(sum_d) * gap_sum;
}

double minimax_lower_bound(int m, int k, long long t) {
    return std::sqrt(static_cast<double>(m) * static_cast<double>(t) * static_cast<double>(k - 1)) /
           27.0;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void open_for_write(std::ofstream& out, const std::string& path) {
    out.open(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
}

}  // namespace

void write_aggregate_csv(const AggregateStats& stats, const std::string& path) {
    std::ofstream out;
    open_for_write(out, path);
    out << "round,mean_regret,q025,q975\n";
    for (std::size_t t = 0; t < stats.mean.size(); ++t) {
        out << (t + 1) << ',' << format_double(stats.mean[t]) << ',' << format_double(stats.q025[t])
            << ',' << format_double(stats.q975[t]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

AggregateStats read_aggregate_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "round,mean_regret,q025,q975")
        throw std::runtime_error("unexpected aggregate CSV header in " + path);
    AggregateStats stats;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) throw std::runtime_error("malformed aggregate CSV row in " + path);
        stats.mean.push_back(std::strtod(cells[1].c_str(), nullptr));
        stats.q025.push_back(std::strtod(cells[2].c_str(), nullptr));
        stats.q975.push_back(std::strtod(cells[3].c_str(), nullptr));
    }
    return stats;
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
    std::ofstream out;
    open_for_write(out, path);
    out << "round";
    for (int w = 1; w <= trace.m; ++w) out << ",action_" << w;
    out << ",cum_regret,pseudo_rounds,invariants_ok\n";
    for (int t = 1; t <= trace.rounds(); ++t) {
        out << t;
        for (int w = 1; w <= trace.m; ++w) out << ',' << trace.action_at(t, w);
        out << ',' << format_double(trace.cum_regret[t - 1]) << ',' << trace.pseudo[t - 1] << ','
            << static_cast<int>(trace.round_ok[t - 1]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kWidth = 840.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 78.0;
constexpr double kRight = 24.0;
constexpr double kTop = 24.0;
constexpr double kBottom = 58.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

/// Round ticks to a 1/2/5 ladder covering [0, hi].
std::vector<double> ticks(double hi, int want) {
    if (hi <= 0.0) return {0.0, 1.0};
    const double raw = hi / want;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> out;
    for (double v = 0.0; v <= hi + step * 0.5; v += step) out.push_back(v);
    return out;
}

}  // namespace

std::string render_svg_string(const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("render_svg: need at least one series");
    const std::size_t n = series.front().mean.size();
    if (n == 0) throw std::invalid_argument("render_svg: empty series");
    for (const auto& s : series) {
        if (s.mean.size() != n) throw std::invalid_argument("render_svg: series lengths differ");
        if (!s.lo.empty() && (s.lo.size() != n || s.hi.size() != n))
            throw std::invalid_argument("render_svg: band lengths differ from the series length");
    }

    double y_max = 0.0;
    for (const auto& s : series) {
        for (double v : s.mean) y_max = std::max(y_max, v);
        for (double v : s.hi) y_max = std::max(y_max, v);
    }
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;

    const double x_max = static_cast<double>(n);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double round) { return kLeft + (round - 1.0) / std::max(x_max - 1.0, 1.0) * plot_w; };
    auto sy = [&](double v) { return kTop + plot_h - v / y_max * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth) << "\" height=\""
        << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth) << ' ' << fmt(kHeight) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\""
        << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(kTop + plot_h)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(kTop + plot_h) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (double v : ticks(x_max, 6)) {
        if (v < 1.0) continue;
        const double x = sx(v);
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << fmt(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTop + plot_h + 20)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << fmt(v)
            << "</text>\n";
    }
    for (double v : ticks(y_max, 6)) {
        const double y = sy(v);
        if (y < kTop - 1e-9) continue;
        svg << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft)
            << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(kLeft - 9) << "\" y=\"" << fmt(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << fmt(v)
            << "</text>\n";
    }
    svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 14)
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">round</text>\n";
    svg << "<text x=\"18\" y=\"" << fmt(kTop + plot_h / 2)
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 "
        << fmt(kTop + plot_h / 2) << ")\">cumulative group regret</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* colour = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];

        if (!s.lo.empty()) {
            svg << "<path d=\"M";
            for (std::size_t t = 0; t < n; ++t) {
                svg << fmt(sx(static_cast<double>(t + 1))) << ' ' << fmt(sy(s.lo[t]));
                if (t + 1 < n) svg << " L";
            }
            for (std::size_t t = n; t-- > 0;) {
                svg << " L" << fmt(sx(static_cast<double>(t + 1))) << ' ' << fmt(sy(s.hi[t]));
            }
            svg << " Z\" fill=\"" << colour << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        }

        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t t = 0; t < n; ++t) {
            svg << fmt(sx(static_cast<double>(t + 1))) << ',' << fmt(sy(s.mean[t]));
            if (t + 1 < n) svg << ' ';
        }
        svg << "\"/>\n";
    }

    // legend
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const double y = kTop + 12 + 18.0 * static_cast<double>(i);
        svg << "<rect x=\"" << fmt(kLeft + 10) << "\" y=\"" << fmt(y - 9)
            << "\" width=\"14\" height=\"10\" fill=\"" << colour << "\"/>\n";
        svg << "<text x=\"" << fmt(kLeft + 30) << "\" y=\"" << fmt(y)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[i].label << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

void render_svg(const std::vector<PlotSeries>& series, const std::string& path) {
    const std::string body = render_svg_string(series);
    std::ofstream out;
    open_for_write(out, path);
    out << body;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace quack
