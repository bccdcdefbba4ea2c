#pragma once

#include <optional>
#include <vector>

#include "quack/rng.hpp"
#include "quack/types.hpp"

namespace quack {

/// Reward randomiser applied before any learner sees the value. Defined for
/// inputs in [0, 1] (sensitivity 1).
struct PrivacyMechanism {
    enum class Kind { laplace, bernoulli_response };

    Kind kind = Kind::laplace;
    double epsilon = 1.0;
};

/// laplace: x + Laplace(1/epsilon) noise.
/// bernoulli_response: unbiased two-point output around 1/2 at distance
/// c = (e^eps + 1) / (2 (e^eps - 1)), with P(high side) = 1/2 + (x - 1/2)/(2c);
/// the probability ratio between any two inputs is exactly e^eps.
double privatize(const PrivacyMechanism& mech, double x, Rng& rng);

/// Symmetric alpha-stable draw (Chambers-Mallows-Stuck transform) shifted by
/// `location`. Requires alpha in (1, 2] so the mean exists; alpha = 2 is
/// Gaussian with variance 2.
double sample_alpha_stable(double alpha, double location, Rng& rng);

struct ArmSpec {
    enum class Family { bernoulli, gaussian, alpha_stable };

    static ArmSpec bernoulli(double p);
    static ArmSpec gaussian(double mu, double sigma);
    static ArmSpec alpha_stable(double alpha, double location);

    double true_mean() const;
    double sample(Rng& rng) const;

    Family family = Family::bernoulli;
    double p = 0.0;         // bernoulli
    double mu = 0.0;        // gaussian
    double sigma = 1.0;     // gaussian
    double alpha = 2.0;     // alpha_stable
    double location = 0.0;  // alpha_stable
};

/// Immutable environment spec: per-arm reward laws, or a pairwise preference
/// matrix in duelling mode. Sampling takes a caller-owned generator and
/// depends only on (action, generator state), never on agent or round.
class EnvironmentModel {
  public:
    static EnvironmentModel bernoulli(const std::vector<double>& p);
    static EnvironmentModel gaussian(const std::vector<double>& mu, double sigma);
    static EnvironmentModel alpha_stable(double alpha, const std::vector<double>& locations);

    /// preference[a][b] = P(a beats b); rows/columns must satisfy
    /// preference[a][b] + preference[b][a] = 1 exactly, diagonal = 1/2.
    static EnvironmentModel duelling(const std::vector<std::vector<double>>& preference);

    /// Attach a privacy mechanism; requires Bernoulli arms so rewards stay
    /// in [0, 1] before randomisation.
    EnvironmentModel with_privacy(PrivacyMechanism mech) const;

    FeedbackMode mode() const { return mode_; }
    int num_arms() const { return k_; }
    int num_actions() const { return num_action_codes(k_, mode_); }

    double true_mean(int arm) const;
    double optimal_mean() const;
    /// Reward mode: mu_star - mu_a per arm. Duelling mode: the Condorcet
    /// gaps P(winner beats a) - 1/2 (requires a Condorcet winner).
    const std::vector<double>& gaps() const;
    std::optional<int> condorcet_winner() const { return condorcet_; }
    double preference(int a, int b) const;

    double sample_reward(int arm, Rng& rng) const;
    int sample_duel(int a, int b, Rng& rng) const;  // returns the winner

    /// Regret contribution of one play of the coded action: the arm gap, or
    /// (gap_a + gap_b)/2 for a duel.
    double action_gap(int code) const;

    bool has_privacy() const { return privacy_.has_value(); }
    const PrivacyMechanism& privacy() const { return *privacy_; }

    const std::vector<ArmSpec>& arms() const { return arms_; }

  private:
    EnvironmentModel() = default;
    static EnvironmentModel from_arms(std::vector<ArmSpec> arms);

    FeedbackMode mode_ = FeedbackMode::reward;
    int k_ = 0;
    std::vector<ArmSpec> arms_;
    std::vector<std::vector<double>> preference_;
    std::vector<double> gaps_;
    double optimal_mean_ = 0.0;
    std::optional<int> condorcet_;
    std::optional<PrivacyMechanism> privacy_;
};

}  // namespace quack
