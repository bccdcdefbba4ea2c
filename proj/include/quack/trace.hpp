#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quack/types.hpp"

namespace quack {

/// Tallies of runtime checks carried out during a run. A clean run has
/// every counter at zero.
struct InvariantReport {
    long long counter_cap = 0;      // pseudo-round counter exceeded m*t
    long long utilisation = 0;      // delayed group plays exceeded pseudo plays + 2*sum(d)
    long long imitation = 0;        // follower action differed from the delayed leader action
    long long queue = 0;            // conservation or exactly-once enqueue failure
    long long final_bookkeeping = 0;// final-round group plays exceeded pseudo plays + 3*sum(d)
    long long consensus = 0;        // gossip sum preservation failure
    std::string first_violation;

    long long total() const {
        return counter_cap + utilisation + imitation + queue + final_bookkeeping + consensus;
    }
    bool ok() const { return total() == 0; }

    void record(long long& counter, const std::string& detail) {
        if (first_violation.empty()) first_violation = detail;
        ++counter;
    }
};

/// Full record of one simulated run: per-round action codes for every agent,
/// cumulative group pseudo-regret, the pseudo-round counter and per-round
/// invariant flags. Serialises to the columnar CSV described in the README.
struct RunTrace {
    int m = 1;
    int k = 1;
    FeedbackMode mode = FeedbackMode::reward;
    int num_actions = 1;
    AgentId leader = 0;  // 0 when the run has no leader (baselines)

    std::vector<int> actions;          // n*m, row-major by round
    std::vector<double> cum_regret;    // per round
    std::vector<long long> pseudo;     // s_t per round
    std::vector<std::uint8_t> round_ok;

    InvariantReport invariants;

    /// Final per-action feed counts of the driving policy (pseudo-plays).
    std::vector<long long> policy_play_counts;
    /// Per-action pseudo-play counts captured when the pseudo-round counter
    /// first reached the requested snapshot value (empty if never reached).
    std::vector<long long> snapshot_counts;
    long long snapshot_at = 0;

    int rounds() const { return static_cast<int>(cum_regret.size()); }
    int action_at(int round, AgentId agent) const {
        return actions[static_cast<std::size_t>(round - 1) * m + (agent - 1)];
    }
    double final_regret() const { return cum_regret.empty() ? 0.0 : cum_regret.back(); }
};

}  // namespace quack
