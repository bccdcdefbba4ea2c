#include "quack/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace quack {

namespace {

std::string describe(const char* what, int t, int extra = -1) {
    std::ostringstream os;
    os << what << " at round " << t;
    if (extra >= 0) os << " (action code " << extra << ")";
    return os.str();
}

}  // namespace

Simulation::Simulation(const EnvironmentModel& env, const Graph& g, AgentId leader,
                       std::unique_ptr<Policy> policy, std::uint64_t seed, QuackOptions options)
    : env_(env),
      graph_(g),
      leader_(leader),
      policy_(std::move(policy)),
      options_(options),
      queues_(env.num_actions()) {
    if (leader_ < 1 || leader_ > g.num_agents())
        throw std::invalid_argument("simulation: leader out of range");
    if (!policy_) throw std::invalid_argument("simulation: policy required");
    if (policy_->mode() != env_.mode())
        throw std::invalid_argument("simulation: policy feedback mode does not match the environment");
    if (policy_->num_arms() != env_.num_arms())
        throw std::invalid_argument("simulation: policy arm count does not match the environment");

    tree_ = distributed_bellman_ford(graph_, leader_);
    for (int d : tree_.dist) sum_dist_ += d;
    num_actions_ = env_.num_actions();

    const int m = graph_.num_agents();
    agent_rng_.reserve(m);
    for (int w = 1; w <= m; ++w) agent_rng_.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(w)));

    pending_.resize(m);
    pseudo_plays_.assign(num_actions_, 0);
    group_plays_.assign(num_actions_, 0);
    delayed_group_plays_.assign(num_actions_, 0);
    round_actions_.assign(m, -1);
    expected_origin_round_.assign(m, 1);

    trace_.m = m;
    trace_.k = env_.num_arms();
    trace_.mode = env_.mode();
    trace_.num_actions = num_actions_;
    trace_.leader = leader_;
    trace_.snapshot_at = options_.pseudo_snapshot;
}

double Simulation::play_in_env(AgentId agent, int code) {
    Rng& rng = agent_rng_[agent - 1];
    if (env_.mode() == FeedbackMode::reward) {
        return env_.sample_reward(code + 1, rng);
    }
    const Proposal p = action_from_code(code, env_.num_arms(), FeedbackMode::duelling);
    return static_cast<double>(env_.sample_duel(p.first, p.second, rng));
}

void Simulation::feed_policy(const Proposal& p, int code, double obs) {
    policy_->feed(p, obs);
    s_ += 1;
    pseudo_plays_[code] += 1;
    if (options_.pseudo_snapshot > 0 && s_ == options_.pseudo_snapshot) {
        trace_.snapshot_counts = pseudo_plays_;
    }
}

void Simulation::log_action(AgentId agent, int code) {
    round_actions_[agent - 1] = code;
    group_plays_[code] += 1;
}

void Simulation::route_messages() {
    leader_inbox_.clear();
    for (auto& p : pending_) p = Pending{};

    // instructions were addressed to one child each; they arrive now
    for (const auto& msg : inflight_instructions_) {
        Pending& slot = pending_[msg.to - 1];
        if (slot.action_code >= 0)
            throw std::logic_error("routing: two instructions delivered to one agent in one round");
        slot = Pending{msg.action_code, msg.issue_round};
    }
    inflight_instructions_.clear();

    // feedback climbs one hop; bundles reaching the leader are consumed
    std::vector<FeedbackMsg> still_in_flight;
    still_in_flight.reserve(inflight_feedback_.size());
    for (auto msg : inflight_feedback_) {
        const int parent = tree_.parent[msg.holder - 1];
        if (parent == 0) throw std::logic_error("routing: feedback message stranded at the root");
        msg.holder = parent;
        if (msg.holder == leader_) {
            leader_inbox_.push_back(msg);
        } else {
            still_in_flight.push_back(msg);
        }
    }
    inflight_feedback_ = std::move(still_in_flight);
}

int Simulation::leader_step() {
    // append delivered feedback to the queues, each observation exactly once
    for (const auto& msg : leader_inbox_) {
        if (options_.check_invariants) {
            if (msg.origin_round != expected_origin_round_[msg.origin - 1]) {
                report_.record(report_.queue,
                               describe("duplicate or out-of-order enqueue", t_, msg.action_code));
                round_clean_ = false;
            } else {
                expected_origin_round_[msg.origin - 1] += 1;
            }
            if (options_.keep_delivery_log)
                deliveries_.push_back({msg.origin, msg.origin_round, t_});
        }
        queues_.enqueue(msg.action_code, msg.observation);
    }
    leader_inbox_.clear();

    // drain: keep answering proposals from the queues until one comes up dry
    const std::size_t cap = queues_.total_size() + 1;
    for (std::size_t iter = 0; iter < cap; ++iter) {
        const Proposal p = policy_->propose();
        const int code = action_code(p, env_.num_arms(), env_.mode());
        if (!queues_.empty(code)) {
            feed_policy(p, code, queues_.dequeue(code));
            continue;
        }
        const double obs = play_in_env(leader_, code);
        feed_policy(p, code, obs);
        log_action(leader_, code);
        for (int child : tree_.children[leader_ - 1]) {
            next_instructions_.push_back({code, t_, child});
        }
        return code;
    }
    throw std::logic_error("leader drain loop failed to terminate");
}

int Simulation::follower_step(AgentId w) {
    const int d = tree_.dist[w - 1];
    int code;
    bool instructed = false;
    if (t_ > d) {
        const Pending& slot = pending_[w - 1];
        if (slot.action_code < 0 || slot.issue_round != t_ - d)
            throw std::logic_error(describe("routing bug: follower missing its instruction", t_, w));
        code = slot.action_code;
        instructed = true;
    } else {
        code = agent_rng_[w - 1].uniform_int(num_actions_);  // warm-up
    }

    const double obs = play_in_env(w, code);
    log_action(w, code);

    if (instructed) {
        for (int child : tree_.children[w - 1]) {
            next_instructions_.push_back({code, pending_[w - 1].issue_round, child});
        }
    }
    next_feedback_.push_back({w, t_, code, obs, w});
    return code;
}

void Simulation::finish_round() {
    const int m = graph_.num_agents();

    double gap_sum = 0.0;
    for (int w = 1; w <= m; ++w) {
        const int code = round_actions_[w - 1];
        if (code < 0) throw std::logic_error("finish_round: an agent has not played");
        trace_.actions.push_back(code);
        gap_sum += env_.action_gap(code);
    }
    const double prev = trace_.cum_regret.empty() ? 0.0 : trace_.cum_regret.back();
    trace_.cum_regret.push_back(prev + gap_sum);
    trace_.pseudo.push_back(s_);

    if (options_.check_invariants) {
        if (s_ > static_cast<long long>(m) * t_) {
            report_.record(report_.counter_cap, describe("pseudo-round counter exceeded m*t", t_));
            round_clean_ = false;
        }

        // delayed group plays: agent w counted up to round t - d_w
        for (int w = 1; w <= m; ++w) {
            const int past = t_ - tree_.dist[w - 1];
            if (past >= 1) delayed_group_plays_[trace_.action_at(past, w)] += 1;
        }
        for (int a = 0; a < num_actions_; ++a) {
            if (delayed_group_plays_[a] > pseudo_plays_[a] + 2 * sum_dist_) {
                report_.record(report_.utilisation, describe("utilisation bound violated", t_, a));
                round_clean_ = false;
            }
        }

        for (int w = 1; w <= m; ++w) {
            const int d = tree_.dist[w - 1];
            if (w != leader_ && t_ > d &&
                trace_.action_at(t_, w) != trace_.action_at(t_ - d, leader_)) {
                report_.record(report_.imitation, describe("follower did not imitate", t_, w));
                round_clean_ = false;
            }
        }

        if (!queues_.conservation_ok()) {
            report_.record(report_.queue, describe("queue conservation failed", t_));
            round_clean_ = false;
        }
    }

    trace_.round_ok.push_back(round_clean_ ? 1 : 0);

    inflight_instructions_.insert(inflight_instructions_.end(), next_instructions_.begin(),
                                  next_instructions_.end());
    next_instructions_.clear();
    inflight_feedback_.insert(inflight_feedback_.end(), next_feedback_.begin(), next_feedback_.end());
    next_feedback_.clear();
    round_actions_.assign(m, -1);
    round_clean_ = true;
}

void Simulation::step() {
    t_ += 1;
    route_messages();
    leader_step();
    for (int w = 1; w <= graph_.num_agents(); ++w) {
        if (w != leader_) follower_step(w);
    }
    finish_round();
}

void Simulation::run(int n) {
    if (n < 1) throw std::invalid_argument("simulation: need at least one round");
    const int m = graph_.num_agents();
    trace_.actions.reserve(static_cast<std::size_t>(n) * m);
    trace_.cum_regret.reserve(n);
    for (int i = 0; i < n; ++i) step();

    if (options_.check_invariants) {
        for (int a = 0; a < num_actions_; ++a) {
            if (group_plays_[a] > pseudo_plays_[a] + 3 * sum_dist_) {
                report_.record(report_.final_bookkeeping,
                               describe("final-round bookkeeping violated", t_, a));
            }
        }
        // every deliverable observation must have been enqueued exactly once
        for (int w = 1; w <= m; ++w) {
            if (w == leader_) continue;
            const int deliverable = std::max(0, t_ - tree_.dist[w - 1]);
            if (expected_origin_round_[w - 1] != deliverable + 1) {
                report_.record(report_.queue, describe("missing enqueue for agent", t_, w));
            }
        }
    }
}

RunTrace Simulation::take_trace() {
    trace_.invariants = report_;
    trace_.policy_play_counts = pseudo_plays_;
    return std::move(trace_);
}

RunTrace run_quack(const EnvironmentModel& env, const Graph& g, AgentId leader,
                   const PolicyFactory& factory, int n, std::uint64_t seed,
                   const QuackOptions& options) {
    auto policy = factory(derive_seed(seed, 0));
    Simulation sim(env, g, leader, std::move(policy), seed, options);
    sim.run(n);
    return sim.take_trace();
}

RunTrace run_standalone_with_streams(const EnvironmentModel& env, std::unique_ptr<Policy> policy,
                                     int n, std::uint64_t env_stream_seed,
                                     long long pseudo_snapshot) {
    if (n < 1) throw std::invalid_argument("standalone: need at least one round");
    Rng env_rng(env_stream_seed);
    if (policy->mode() != env.mode())
        throw std::invalid_argument("standalone: policy feedback mode does not match the environment");
    if (policy->num_arms() != env.num_arms())
        throw std::invalid_argument("standalone: policy arm count does not match the environment");

    RunTrace trace;
    trace.m = 1;
    trace.k = env.num_arms();
    trace.mode = env.mode();
    trace.num_actions = env.num_actions();
    trace.leader = 1;
    trace.snapshot_at = pseudo_snapshot;
    trace.actions.reserve(n);
    trace.cum_regret.reserve(n);

    const int k = env.num_arms();
    for (int t = 1; t <= n; ++t) {
        const Proposal p = policy->propose();
        const int code = action_code(p, k, env.mode());
        double obs;
        if (env.mode() == FeedbackMode::reward) {
            obs = env.sample_reward(p.first, env_rng);
        } else {
            obs = static_cast<double>(env.sample_duel(p.first, p.second, env_rng));
        }
        policy->feed(p, obs);
        trace.actions.push_back(code);
        const double prev = trace.cum_regret.empty() ? 0.0 : trace.cum_regret.back();
        trace.cum_regret.push_back(prev + env.action_gap(code));
        trace.pseudo.push_back(t);
        trace.round_ok.push_back(1);
        if (pseudo_snapshot > 0 && t == pseudo_snapshot) trace.snapshot_counts = policy->play_counts();
    }
    trace.policy_play_counts = policy->play_counts();
    return trace;
}

RunTrace run_standalone(const EnvironmentModel& env, const PolicyFactory& factory, int n,
                        std::uint64_t seed, long long pseudo_snapshot) {
    auto policy = factory(derive_seed(seed, 0));
    return run_standalone_with_streams(env, std::move(policy), n, derive_seed(seed, 1),
                                       pseudo_snapshot);
}

std::vector<double> group_pseudo_regret(const RunTrace& trace, const EnvironmentModel& env) {
    std::vector<double> out;
    out.reserve(trace.rounds());
    double acc = 0.0;
    for (int t = 1; t <= trace.rounds(); ++t) {
        for (int w = 1; w <= trace.m; ++w) acc += env.action_gap(trace.action_at(t, w));
        out.push_back(acc);
    }
    return out;
}

}  // namespace quack
