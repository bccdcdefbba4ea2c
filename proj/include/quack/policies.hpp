#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quack/rng.hpp"
#include "quack/types.hpp"

namespace quack {

/// Single-agent bandit algorithm behind a uniform propose/feed interface.
/// Proposals and feedback must alternate strictly: propose() is invalid
/// while a proposal is outstanding, feed() is invalid without one.
///
/// Observations are doubles; in duelling mode the value is the id of the
/// winning arm.
class Policy {
  public:
    virtual ~Policy() = default;

    Proposal propose();
    void feed(const Proposal& p, double observation);

    FeedbackMode mode() const { return mode_; }
    int num_arms() const { return k_; }
    int num_actions() const { return num_action_codes(k_, mode_); }

    /// Observations consumed so far.
    long long steps() const { return steps_; }
    /// Per-action-code feed counts; sums to steps().
    const std::vector<long long>& play_counts() const { return counts_; }

    virtual std::string name() const = 0;

  protected:
    Policy(int k, FeedbackMode mode);

    virtual Proposal do_propose() = 0;
    virtual void do_feed(const Proposal& p, double observation) = 0;

    int k_;
    FeedbackMode mode_;

  private:
    long long steps_ = 0;
    std::vector<long long> counts_;
    std::optional<Proposal> outstanding_;
};

/// Builds a fresh policy from a seed; deterministic policies ignore it.
using PolicyFactory = std::function<std::unique_ptr<Policy>(std::uint64_t seed)>;

/// UCB with index mean_a + sqrt(2 sigma^2 ln(1/delta) / T_a). Untried arms
/// first (lowest id), ties to the lowest id.
std::unique_ptr<Policy> make_ucb(int k, double sigma, double delta);

/// Beta-Bernoulli Thompson sampling, Beta(1, 1) priors. Rewards must lie in
/// [0, 1]; non-binary values are converted by a Bernoulli trial with success
/// probability equal to the reward.
std::unique_ptr<Policy> make_thompson(int k, std::uint64_t seed);

/// Robust UCB over the truncated mean: samples with |x_i| above
/// (sigma i / ln(1/delta))^(1/(1+eps)) are zeroed (i = arrival index within
/// the arm), and the index adds 4 sigma^(1/(1+eps)) (ln(1/delta)/T)^(eps/(1+eps)).
std::unique_ptr<Policy> make_robust_ucb(int k, double moment_bound, double tail_eps, double delta);

/// Relative UCB for duelling feedback. Optimistic pairwise bounds
/// u_ab = W_ab/(W_ab+W_ba) + sqrt(alpha ln s / (W_ab+W_ba)) with 0/0 -> 1;
/// champion = lowest-id arm whose bounds all clear 1/2, opponent = its
/// toughest rival by u_bc.
std::unique_ptr<Policy> make_rucb(int k, double alpha_exploration);

/// UCB over Laplace-privatised rewards: the index width uses the variance
/// proxy 1/4 + 2/eps^2 in place of sigma^2.
std::unique_ptr<Policy> make_ldp_ucb(int k, double privacy_eps, double delta);

struct TruncatedMeanResult {
    double value = 0.0;
    bool empty = false;
};

/// Mean of `samples` after zeroing entries with |x_i| above the per-index
/// threshold (moment_bound * i / ln(1/delta))^(1/(1+tail_eps)), i 1-based.
TruncatedMeanResult truncated_mean(std::span<const double> samples, double moment_bound,
                                   double tail_eps, double delta);

/// Inspection hooks used by tests and diagnostics.
struct UcbInspect {
    static std::vector<double> indices(const Policy& p);
};

struct RobustInspect {
    static std::span<const double> samples(const Policy& p, int arm);
    static double truncated_mean_of(const Policy& p, int arm);
};

struct RucbInspect {
    static std::vector<std::vector<double>> optimism(const Policy& p);
    static long long wins(const Policy& p, int a, int b);
};

struct ThompsonInspect {
    static std::pair<double, double> posterior(const Policy& p, int arm);
};

/// Declarative policy description, as it appears in experiment configs.
struct PolicySpec {
    enum class Kind { ucb, thompson, robust_ucb, rucb, ldp_ucb };

    Kind kind = Kind::ucb;
    double sigma = 0.5;          // subgaussian scale / moment bound
    double delta = 0.0;          // 0 -> default 1/(m n)^2
    double tail_eps = 1.0;       // robust_ucb
    double alpha_explore = 0.51; // rucb
    double privacy_eps = 1.0;    // ldp_ucb
};

PolicySpec::Kind policy_kind_from_string(const std::string& name);
std::string to_string(PolicySpec::Kind kind);
FeedbackMode policy_mode(PolicySpec::Kind kind);

/// Resolves defaults (delta = 1/(m n)^2) and returns a factory for the spec.
PolicyFactory make_policy_factory(const PolicySpec& spec, int k, int m, long long n);

}  // namespace quack
