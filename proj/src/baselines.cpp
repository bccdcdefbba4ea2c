#include "quack/baselines.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace quack {

RunTrace run_independent(const EnvironmentModel& env, int m, const PolicyFactory& factory, int n,
                         std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("run_independent: need at least one agent");
    if (n < 1) throw std::invalid_argument("run_independent: need at least one round");

    std::vector<RunTrace> agents;
    agents.reserve(m);
    for (int w = 1; w <= m; ++w) {
        auto policy = factory(derive_seed(seed, 2 * static_cast<std::uint64_t>(w - 1)));
        agents.push_back(run_standalone_with_streams(
            env, std::move(policy), n, derive_seed(seed, 2 * static_cast<std::uint64_t>(w - 1) + 1)));
    }

    RunTrace trace;
    trace.m = m;
    trace.k = env.num_arms();
    trace.mode = env.mode();
    trace.num_actions = env.num_actions();
    trace.leader = 0;
    trace.actions.reserve(static_cast<std::size_t>(n) * m);
    trace.cum_regret.reserve(n);
    for (int t = 1; t <= n; ++t) {
        double total = 0.0;
        for (int w = 1; w <= m; ++w) {
            trace.actions.push_back(agents[w - 1].action_at(t, 1));
            total += agents[w - 1].cum_regret[t - 1];
        }
        trace.cum_regret.push_back(total);
        trace.pseudo.push_back(static_cast<long long>(m) * t);
        trace.round_ok.push_back(1);
    }
    return trace;
}

RunTrace run_gossip_ucb(const EnvironmentModel& env, const Graph& g, double gamma, double sigma,
                        int n, std::uint64_t seed, bool check_invariants) {
    if (env.mode() != FeedbackMode::reward)
        throw std::invalid_argument("gossip_ucb: reward environments only");
    if (!(gamma > 1.0)) throw std::invalid_argument("gossip_ucb: gamma must exceed 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("gossip_ucb: sigma must be positive");
    if (n < 1) throw std::invalid_argument("gossip_ucb: need at least one round");

    const int m = g.num_agents();
    const int k = env.num_arms();

    std::vector<Rng> rng;
    rng.reserve(m);
    for (int w = 1; w <= m; ++w) rng.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(w)));

    // consensus state: per arm, one reward-sum and one count estimate per agent
    std::vector<std::vector<double>> sum_est(k, std::vector<double>(m, 0.0));
    std::vector<std::vector<double>> count_est(k, std::vector<double>(m, 0.0));
    std::vector<double> true_sum(k, 0.0);     // what the network actually collected
    std::vector<long long> true_count(k, 0);

    // one local pull of every arm per agent before gossip begins
    for (int w = 1; w <= m; ++w) {
        for (int a = 1; a <= k; ++a) {
            const double x = env.sample_reward(a, rng[w - 1]);
            sum_est[a - 1][w - 1] = x;
            count_est[a - 1][w - 1] = 1.0;
            true_sum[a - 1] += x;
            true_count[a - 1] += 1;
        }
    }

    RunTrace trace;
    trace.m = m;
    trace.k = k;
    trace.mode = FeedbackMode::reward;
    trace.num_actions = k;
    trace.leader = 0;
    trace.actions.reserve(static_cast<std::size_t>(n) * m);
    trace.cum_regret.reserve(n);

    const double inf = std::numeric_limits<double>::infinity();

    for (int t = 1; t <= n; ++t) {
        bool round_clean = true;
        std::vector<std::vector<double>> inc_sum(k, std::vector<double>(m, 0.0));
        std::vector<std::vector<double>> inc_count(k, std::vector<double>(m, 0.0));

        double gap_sum = 0.0;
        for (int w = 1; w <= m; ++w) {
            int best = 0;
            double best_idx = -inf;
            for (int a = 0; a < k; ++a) {
                double idx;
                if (count_est[a][w - 1] < 1.0) {
                    idx = inf;  // fractional counts from mixing; treat as untried
                } else {
                    idx = sum_est[a][w - 1] / count_est[a][w - 1] +
                          std::sqrt(2.0 * gamma * sigma * sigma * std::log(static_cast<double>(t)) /
                                    count_est[a][w - 1]);
                }
                if (idx > best_idx) {
                    best_idx = idx;
                    best = a;
                }
            }
            const double x = env.sample_reward(best + 1, rng[w - 1]);
            inc_sum[best][w - 1] += x;
            inc_count[best][w - 1] += 1.0;
            true_sum[best] += x;
            true_count[best] += 1;
            trace.actions.push_back(best);
            gap_sum += env.gaps()[best];
        }

        // one synchronous averaging step: state <- P (state + increments)
        for (int a = 0; a < k; ++a) {
            for (int w = 0; w < m; ++w) {
                sum_est[a][w] += inc_sum[a][w];
                count_est[a][w] += inc_count[a][w];
            }
            consensus_apply(g, sum_est[a]);
            consensus_apply(g, count_est[a]);
        }

        if (check_invariants) {
            for (int a = 0; a < k; ++a) {
                double total_s = 0.0, total_c = 0.0;
                for (int w = 0; w < m; ++w) {
                    total_s += sum_est[a][w];
                    total_c += count_est[a][w];
                }
                const double tol_s = 1e-9 * std::max(1.0, std::abs(true_sum[a]));
                const double tol_c = 1e-9 * std::max(1.0, static_cast<double>(true_count[a]));
                if (std::abs(total_s - true_sum[a]) > tol_s ||
                    std::abs(total_c - static_cast<double>(true_count[a])) > tol_c) {
                    std::ostringstream os;
                    os << "consensus sum not preserved at round " << t << " (arm " << a + 1 << ")";
                    trace.invariants.record(trace.invariants.consensus, os.str());
                    round_clean = false;
                }
            }
        }

        const double prev = trace.cum_regret.empty() ? 0.0 : trace.cum_regret.back();
        trace.cum_regret.push_back(prev + gap_sum);
        trace.pseudo.push_back(static_cast<long long>(m) * t);
        trace.round_ok.push_back(round_clean ? 1 : 0);
    }
    return trace;
}

}  // namespace quack
