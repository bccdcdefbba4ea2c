#pragma once

#include <stdexcept>
#include <string>

namespace quack {

/// Agents are identified by 1-based ids; arm ids are 1-based as well.
using AgentId = int;

enum class FeedbackMode { reward, duelling };

/// What a policy asks to play next. Reward-mode policies propose a single
/// arm (`second == 0`); duelling policies propose an ordered pair.
struct Proposal {
    int first = 1;
    int second = 0;

    bool is_pair() const { return second != 0; }
    int arm() const { return first; }

    friend bool operator==(const Proposal& a, const Proposal& b) {
        return a.first == b.first && a.second == b.second;
    }
};

/// Compact integer code for an action: arm index for reward mode,
/// row-major ordered-pair index for duelling mode. Codes are 0-based.
inline int action_code(const Proposal& p, int k, FeedbackMode mode) {
    if (mode == FeedbackMode::reward) return p.first - 1;
    return (p.first - 1) * k + (p.second - 1);
}

inline Proposal action_from_code(int code, int k, FeedbackMode mode) {
    if (mode == FeedbackMode::reward) return Proposal{code + 1, 0};
    return Proposal{code / k + 1, code % k + 1};
}

inline int num_action_codes(int k, FeedbackMode mode) {
    return mode == FeedbackMode::reward ? k : k * k;
}

}  // namespace quack
