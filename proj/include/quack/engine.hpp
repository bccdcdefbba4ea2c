#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "quack/envs.hpp"
#include "quack/graph.hpp"
#include "quack/policies.hpp"
#include "quack/rng.hpp"
#include "quack/trace.hpp"

namespace quack {

/// One FIFO queue per action code, with conservation counters.
class QueueBank {
  public:
    explicit QueueBank(int num_actions) : queues_(num_actions), enqueued_(num_actions, 0), dequeued_(num_actions, 0) {}

    void enqueue(int code, double obs) {
        queues_[code].push_back(obs);
        enqueued_[code] += 1;
    }
    bool empty(int code) const { return queues_[code].empty(); }
    double dequeue(int code) {
        const double x = queues_[code].front();
        queues_[code].pop_front();
        dequeued_[code] += 1;
        return x;
    }
    std::size_t size(int code) const { return queues_[code].size(); }
    std::size_t total_size() const {
        std::size_t n = 0;
        for (const auto& q : queues_) n += q.size();
        return n;
    }
    long long total_enqueued(int code) const { return enqueued_[code]; }
    long long total_dequeued(int code) const { return dequeued_[code]; }
    int num_actions() const { return static_cast<int>(queues_.size()); }

    bool conservation_ok() const {
        for (int a = 0; a < num_actions(); ++a) {
            if (enqueued_[a] != dequeued_[a] + static_cast<long long>(queues_[a].size())) return false;
        }
        return true;
    }

  private:
    std::vector<std::deque<double>> queues_;
    std::vector<long long> enqueued_;
    std::vector<long long> dequeued_;
};

/// Instructions fan out root-to-leaf, one hop per round; each message is the
/// single hop from an agent to one child.
struct InstructionMsg {
    int action_code = 0;
    int issue_round = 0;
    AgentId to = 0;
};

/// Feedback climbs leaf-to-root, one hop per round.
struct FeedbackMsg {
    AgentId origin = 0;
    int origin_round = 0;
    int action_code = 0;
    double observation = 0.0;
    AgentId holder = 0;
};

struct DeliveryRecord {
    AgentId origin = 0;
    int origin_round = 0;
    int delivered_round = 0;
};

struct QuackOptions {
    bool check_invariants = true;
    bool keep_delivery_log = false;
    long long pseudo_snapshot = 0;  // capture per-action pseudo plays when s reaches this
};

/// Synchronous round engine for the queue-based reduction. Each round:
/// deliver messages issued one hop ago, let the leader drain queues and play,
/// let every follower imitate (or explore during warm-up), then buffer all
/// emissions for the next round.
class Simulation {
  public:
    Simulation(const EnvironmentModel& env, const Graph& g, AgentId leader,
               std::unique_ptr<Policy> policy, std::uint64_t seed, QuackOptions options = {});

    void step();
    void run(int n);

    /// Phase drivers, exposed so tests can walk a round by hand. Call in
    /// order within one round: route_messages, leader_step, follower_step for
    /// every follower, finish_round.
    void route_messages();
    int leader_step();
    int follower_step(AgentId w);
    void finish_round();

    int round() const { return t_; }
    long long pseudo_rounds() const { return s_; }
    const QueueBank& queues() const { return queues_; }
    const ShortestPathTree& tree() const { return tree_; }
    const std::vector<long long>& pseudo_play_counts() const { return pseudo_plays_; }
    const std::vector<DeliveryRecord>& delivery_log() const { return deliveries_; }
    const InvariantReport& invariants() const { return report_; }

    RunTrace take_trace();

  private:
    double play_in_env(AgentId agent, int code);
    void feed_policy(const Proposal& p, int code, double obs);
    void log_action(AgentId agent, int code);

    const EnvironmentModel& env_;
    const Graph& graph_;
    AgentId leader_;
    std::unique_ptr<Policy> policy_;
    QuackOptions options_;

    ShortestPathTree tree_;
    long long sum_dist_ = 0;
    int num_actions_ = 0;

    std::vector<Rng> agent_rng_;
    QueueBank queues_;

    std::vector<InstructionMsg> inflight_instructions_;
    std::vector<FeedbackMsg> inflight_feedback_;
    std::vector<InstructionMsg> next_instructions_;
    std::vector<FeedbackMsg> next_feedback_;
    std::vector<FeedbackMsg> leader_inbox_;

    struct Pending {
        int action_code = -1;
        int issue_round = -1;
    };
    std::vector<Pending> pending_;

    int t_ = 0;
    long long s_ = 0;
    std::vector<long long> pseudo_plays_;        // per action code
    std::vector<long long> group_plays_;         // per action code, all agents
    std::vector<long long> delayed_group_plays_; // per action code, agent w counted up to round t - d_w
    std::vector<int> round_actions_;             // this round, per agent
    std::vector<int> expected_origin_round_;     // exactly-once enqueue tracking
    std::vector<DeliveryRecord> deliveries_;

    bool round_clean_ = true;
    RunTrace trace_;
    InvariantReport report_;
};

/// Runs the reduction for n rounds. The policy is built from the factory
/// with the derived stream 0 of `seed`; agent w samples with stream w.
RunTrace run_quack(const EnvironmentModel& env, const Graph& g, AgentId leader,
                   const PolicyFactory& factory, int n, std::uint64_t seed,
                   const QuackOptions& options = {});

/// Plain single-agent interaction loop with the same stream conventions
/// (policy stream 0, environment stream 1), so a one-agent network and a
/// standalone run are bit-identical under a shared seed.
RunTrace run_standalone(const EnvironmentModel& env, const PolicyFactory& factory, int n,
                        std::uint64_t seed, long long pseudo_snapshot = 0);

/// Single-agent loop over explicitly seeded streams; building block for
/// run_standalone and the independent-agents baseline.
RunTrace run_standalone_with_streams(const EnvironmentModel& env, std::unique_ptr<Policy> policy,
                                     int n, std::uint64_t env_stream_seed,
                                     long long pseudo_snapshot = 0);

/// Cumulative gap-weighted play counts, recomputed from the action log.
std::vector<double> group_pseudo_regret(const RunTrace& trace, const EnvironmentModel& env);

}  // namespace quack
