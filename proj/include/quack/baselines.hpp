#pragma once

#include <cstdint>

#include "quack/engine.hpp"
#include "quack/envs.hpp"
#include "quack/graph.hpp"
#include "quack/policies.hpp"
#include "quack/trace.hpp"

namespace quack {

/// m isolated single-agent runs over the shared environment spec; the group
/// regret is the sum. Agent w uses policy stream 2(w-1) and environment
/// stream 2(w-1)+1, so a one-agent run matches run_standalone exactly.
RunTrace run_independent(const EnvironmentModel& env, int m, const PolicyFactory& factory, int n,
                         std::uint64_t seed);

/// Running-consensus gossip UCB. Every agent keeps per-arm reward-sum and
/// count estimates, plays argmax of estimate + sqrt(2 gamma sigma^2 ln t / n_hat)
/// (arms with n_hat < 1 first), then the whole network applies one averaging
/// step with the Laplacian-based communication matrix. Estimates are seeded
/// with one local pull of every arm per agent before round 1; those pulls are
/// not part of the trace.
RunTrace run_gossip_ucb(const EnvironmentModel& env, const Graph& g, double gamma, double sigma,
                        int n, std::uint64_t seed, bool check_invariants = true);

}  // namespace quack
