#include "quack/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace quack {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Policy::Policy(int k, FeedbackMode mode) : k_(k), mode_(mode) {
    require(k >= 1, "policy: need at least one arm");
    counts_.assign(num_actions(), 0);
}

Proposal Policy::propose() {
    if (outstanding_)
        throw std::logic_error("policy: propose() called with an unanswered proposal outstanding");
    Proposal p = do_propose();
    const bool valid_first = p.first >= 1 && p.first <= k_;
    const bool valid_second = mode_ == FeedbackMode::reward
                                  ? p.second == 0
                                  : (p.second >= 1 && p.second <= k_);
    if (!valid_first || !valid_second) throw std::logic_error("policy: proposal out of range");
    outstanding_ = p;
    return p;
}

void Policy::feed(const Proposal& p, double observation) {
    if (!outstanding_) throw std::logic_error("policy: feed() called without an outstanding proposal");
    if (!(*outstanding_ == p))
        throw std::logic_error("policy: feed() does not match the outstanding proposal");
    do_feed(p, observation);
    counts_[action_code(p, k_, mode_)] += 1;
    steps_ += 1;
    outstanding_.reset();
}

// ---------------------------------------------------------------------------
// UCB family

namespace {

class UcbBase : public Policy {
  public:
    UcbBase(int k, double width_var, double delta)
        : Policy(k, FeedbackMode::reward), width_var_(width_var), delta_(delta) {
        require(width_var > 0.0, "ucb: variance scale must be positive");
        require(delta > 0.0 && delta < 1.0, "ucb: delta must lie in (0, 1)");
        pulls_.assign(k, 0);
        sums_.assign(k, 0.0);
    }

    std::vector<double> indices() const {
        std::vector<double> idx(k_);
        for (int a = 0; a < k_; ++a) {
            idx[a] = pulls_[a] == 0
                         ? kInf
                         : sums_[a] / static_cast<double>(pulls_[a]) + width(pulls_[a]);
        }
        return idx;
    }

  protected:
    Proposal do_propose() override {
        for (int a = 0; a < k_; ++a) {
            if (pulls_[a] == 0) return Proposal{a + 1, 0};
        }
        int best = 0;
        double best_idx = -kInf;
        for (int a = 0; a < k_; ++a) {
            const double idx = sums_[a] / static_cast<double>(pulls_[a]) + width(pulls_[a]);
            if (idx > best_idx) {
                best_idx = idx;
                best = a;
            }
        }
        return Proposal{best + 1, 0};
    }

    void do_feed(const Proposal& p, double x) override {
        pulls_[p.first - 1] += 1;
        sums_[p.first - 1] += x;
    }

    double width(long long t) const {
        return std::sqrt(2.0 * width_var_ * std::log(1.0 / delta_) / static_cast<double>(t));
    }

    double width_var_;
    double delta_;
    std::vector<long long> pulls_;
    std::vector<double> sums_;
};

class UcbPolicy final : public UcbBase {
  public:
    UcbPolicy(int k, double sigma, double delta) : UcbBase(k, sigma * sigma, delta) {}
    std::string name() const override { return "ucb"; }
};

class LdpUcbPolicy final : public UcbBase {
  public:
    LdpUcbPolicy(int k, double privacy_eps, double delta)
        : UcbBase(k, 0.25 + 2.0 / (privacy_eps * privacy_eps), delta) {
        require(privacy_eps > 0.0, "ldp_ucb: epsilon must be positive");
    }
    std::string name() const override { return "ldp_ucb"; }
};

// ---------------------------------------------------------------------------
// Thompson sampling (Beta-Bernoulli)

class ThompsonPolicy final : public Policy {
  public:
    ThompsonPolicy(int k, std::uint64_t seed) : Policy(k, FeedbackMode::reward), rng_(seed) {
        alpha_.assign(k, 1.0);
        beta_.assign(k, 1.0);
    }

    std::string name() const override { return "thompson"; }

    std::pair<double, double> posterior(int arm) const {
        return {alpha_[arm - 1], beta_[arm - 1]};
    }

  protected:
    Proposal do_propose() override {
        int best = 0;
        double best_draw = -kInf;
        for (int a = 0; a < k_; ++a) {
            const double draw = rng_.beta(alpha_[a], beta_[a]);
            if (draw > best_draw) {
                best_draw = draw;
                best = a;
            }
        }
        return Proposal{best + 1, 0};
    }

    void do_feed(const Proposal& p, double x) override {
        if (!(x >= 0.0 && x <= 1.0))
            throw std::invalid_argument("thompson: rewards must lie in [0, 1]");
        bool success;
        if (x == 0.0 || x == 1.0) {
            success = x == 1.0;
        } else {
            success = rng_.uniform01() < x;  // Bernoulli trial preserves the mean
        }
        if (success) {
            alpha_[p.first - 1] += 1.0;
        } else {
            beta_[p.first - 1] += 1.0;
        }
    }

  private:
    Rng rng_;
    std::vector<double> alpha_;
    std::vector<double> beta_;
};

// ---------------------------------------------------------------------------
// Robust UCB (truncated mean)

class RobustUcbPolicy final : public Policy {
  public:
    RobustUcbPolicy(int k, double moment_bound, double tail_eps, double delta)
        : Policy(k, FeedbackMode::reward),
          moment_bound_(moment_bound),
          tail_eps_(tail_eps),
          delta_(delta) {
        require(moment_bound > 0.0, "robust_ucb: moment bound must be positive");
        require(tail_eps > 0.0 && tail_eps <= 1.0, "robust_ucb: tail exponent must lie in (0, 1]");
        require(delta > 0.0 && delta < 1.0, "robust_ucb: delta must lie in (0, 1)");
        samples_.resize(k);
        kept_sums_.assign(k, 0.0);
    }

    std::string name() const override { return "robust_ucb"; }

    std::span<const double> samples(int arm) const { return samples_[arm - 1]; }

    // Matches truncated_mean() on the stored sample list: the per-index
    // thresholds are fixed at arrival, so the kept sum can be maintained
    // incrementally without changing the result.
    double arm_truncated_mean(int arm) const {
        const auto& s = samples_[arm - 1];
        return s.empty() ? 0.0 : kept_sums_[arm - 1] / static_cast<double>(s.size());
    }

  protected:
    Proposal do_propose() override {
        int best = 0;
        double best_idx = -kInf;
        for (int a = 0; a < k_; ++a) {
            if (samples_[a].empty()) return Proposal{a + 1, 0};
            const double idx = arm_truncated_mean(a + 1) + width(samples_[a].size());
            if (idx > best_idx) {
                best_idx = idx;
                best = a;
            }
        }
        return Proposal{best + 1, 0};
    }

    void do_feed(const Proposal& p, double x) override {
        auto& s = samples_[p.first - 1];
        const double u = threshold(moment_bound_, tail_eps_, delta_, s.size() + 1);
        if (std::abs(x) <= u) kept_sums_[p.first - 1] += x;
        s.push_back(x);
    }

  public:
    static double threshold(double moment_bound, double tail_eps, double delta, std::size_t index) {
        return std::pow(moment_bound * static_cast<double>(index) / std::log(1.0 / delta),
                        1.0 / (1.0 + tail_eps));
    }

  private:
    double width(std::size_t t) const {
        return 4.0 * std::pow(moment_bound_, 1.0 / (1.0 + tail_eps_)) *
               std::pow(std::log(1.0 / delta_) / static_cast<double>(t),
                        tail_eps_ / (1.0 + tail_eps_));
    }

    double moment_bound_;
    double tail_eps_;
    double delta_;
    std::vector<std::vector<double>> samples_;
    std::vector<double> kept_sums_;
};

// ---------------------------------------------------------------------------
// Relative UCB (duelling)

class RucbPolicy final : public Policy {
  public:
    RucbPolicy(int k, double alpha_exploration)
        : Policy(k, FeedbackMode::duelling), alpha_(alpha_exploration) {
        require(alpha_exploration > 0.5, "rucb: exploration parameter must exceed 1/2");
        wins_.assign(static_cast<std::size_t>(k) * k, 0);
    }

    std::string name() const override { return "rucb"; }

    long long win_count(int a, int b) const { return wins_[(a - 1) * static_cast<std::size_t>(k_) + (b - 1)]; }

    std::vector<std::vector<double>> optimism() const {
        std::vector<std::vector<double>> u(k_, std::vector<double>(k_, 0.5));
        for (int a = 1; a <= k_; ++a) {
            for (int b = 1; b <= k_; ++b) {
                if (a != b) u[a - 1][b - 1] = upper(a, b);
            }
        }
        return u;
    }

  protected:
    Proposal do_propose() override {
        if (k_ == 1) return Proposal{1, 1};

        // champion: lowest-id arm whose optimistic bounds all clear 1/2;
        // if none qualifies, the arm with the best worst-case bound
        int champion = 0;
        for (int a = 1; a <= k_ && champion == 0; ++a) {
            bool clears = true;
            for (int b = 1; b <= k_; ++b) {
                if (b != a && upper(a, b) < 0.5) clears = false;
            }
            if (clears) champion = a;
        }
        if (champion == 0) {
            double best_floor = -kInf;
            for (int a = 1; a <= k_; ++a) {
                double floor = kInf;
                for (int b = 1; b <= k_; ++b) {
                    if (b != a) floor = std::min(floor, upper(a, b));
                }
                if (floor > best_floor) {
                    best_floor = floor;
                    champion = a;
                }
            }
        }

        // toughest opponent: the rival with the highest optimistic chance of
        // beating the champion
        int opponent = 0;
        double best_u = -kInf;
        for (int b = 1; b <= k_; ++b) {
            if (b == champion) continue;
            const double u = upper(b, champion);
            if (u > best_u) {
                best_u = u;
                opponent = b;
            }
        }
        return Proposal{champion, opponent};
    }

    void do_feed(const Proposal& p, double observation) override {
        const int winner = static_cast<int>(observation);
        if (winner != p.first && winner != p.second)
            throw std::invalid_argument("rucb: winner must be one of the duelled arms");
        const int loser = winner == p.first ? p.second : p.first;
        wins_[(winner - 1) * static_cast<std::size_t>(k_) + (loser - 1)] += 1;
    }

  private:
    double upper(int a, int b) const {
        const long long w_ab = win_count(a, b);
        const long long n = w_ab + win_count(b, a);
        if (n == 0) return 1.0;
        const double s = static_cast<double>(std::max<long long>(steps(), 1));
        return static_cast<double>(w_ab) / static_cast<double>(n) +
               std::sqrt(alpha_ * std::log(s) / static_cast<double>(n));
    }

    double alpha_;
    std::vector<long long> wins_;
};

}  // namespace

std::unique_ptr<Policy> make_ucb(int k, double sigma, double delta) {
    require(sigma > 0.0, "ucb: sigma must be positive");
    return std::make_unique<UcbPolicy>(k, sigma, delta);
}

std::unique_ptr<Policy> make_thompson(int k, std::uint64_t seed) {
    return std::make_unique<ThompsonPolicy>(k, seed);
}

std::unique_ptr<Policy> make_robust_ucb(int k, double moment_bound, double tail_eps, double delta) {
    return std::make_unique<RobustUcbPolicy>(k, moment_bound, tail_eps, delta);
}

std::unique_ptr<Policy> make_rucb(int k, double alpha_exploration) {
    return std::make_unique<RucbPolicy>(k, alpha_exploration);
}

std::unique_ptr<Policy> make_ldp_ucb(int k, double privacy_eps, double delta) {
    return std::make_unique<LdpUcbPolicy>(k, privacy_eps, delta);
}

TruncatedMeanResult truncated_mean(std::span<const double> samples, double moment_bound,
                                   double tail_eps, double delta) {
    require(moment_bound > 0.0, "truncated_mean: moment bound must be positive");
    require(tail_eps > 0.0 && tail_eps <= 1.0, "truncated_mean: tail exponent must lie in (0, 1]");
    require(delta > 0.0 && delta < 1.0, "truncated_mean: delta must lie in (0, 1)");
    if (samples.empty()) return {0.0, true};
    double kept = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double u = RobustUcbPolicy::threshold(moment_bound, tail_eps, delta, i + 1);
        if (std::abs(samples[i]) <= u) kept += samples[i];
    }
    return {kept / static_cast<double>(samples.size()), false};
}

std::vector<double> UcbInspect::indices(const Policy& p) {
    return dynamic_cast<const UcbBase&>(p).indices();
}

std::span<const double> RobustInspect::samples(const Policy& p, int arm) {
    return dynamic_cast<const RobustUcbPolicy&>(p).samples(arm);
}

double RobustInspect::truncated_mean_of(const Policy& p, int arm) {
    return dynamic_cast<const RobustUcbPolicy&>(p).arm_truncated_mean(arm);
}

std::vector<std::vector<double>> RucbInspect::optimism(const Policy& p) {
    return dynamic_cast<const RucbPolicy&>(p).optimism();
}

long long RucbInspect::wins(const Policy& p, int a, int b) {
    return dynamic_cast<const RucbPolicy&>(p).win_count(a, b);
}

std::pair<double, double> ThompsonInspect::posterior(const Policy& p, int arm) {
    return dynamic_cast<const ThompsonPolicy&>(p).posterior(arm);
}

PolicySpec::Kind policy_kind_from_string(const std::string& name) {
    if (name == "ucb") return PolicySpec::Kind::ucb;
    if (name == "thompson") return PolicySpec::Kind::thompson;
    if (name == "robust_ucb") return PolicySpec::Kind::robust_ucb;
    if (name == "rucb") return PolicySpec::Kind::rucb;
    if (name == "ldp_ucb") return PolicySpec::Kind::ldp_ucb;
    throw std::invalid_argument("unknown policy: " + name);
}

std::string to_string(PolicySpec::Kind kind) {
    switch (kind) {
        case PolicySpec::Kind::ucb: return "ucb";
        case PolicySpec::Kind::thompson: return "thompson";
        case PolicySpec::Kind::robust_ucb: return "robust_ucb";
        case PolicySpec::Kind::rucb: return "rucb";
        case PolicySpec::Kind::ldp_ucb: return "ldp_ucb";
    }
    return "?";
}

FeedbackMode policy_mode(PolicySpec::Kind kind) {
    return kind == PolicySpec::Kind::rucb ? FeedbackMode::duelling : FeedbackMode::reward;
}

PolicyFactory make_policy_factory(const PolicySpec& spec, int k, int m, long long n) {
    PolicySpec resolved = spec;
    if (resolved.delta == 0.0) {
        const double mn = static_cast<double>(m) * static_cast<double>(n);
        resolved.delta = 1.0 / (mn * mn);
    }
    switch (resolved.kind) {
        case PolicySpec::Kind::ucb:
            return [k, resolved](std::uint64_t) { return make_ucb(k, resolved.sigma, resolved.delta); };
        case PolicySpec::Kind::thompson:
            return [k](std::uint64_t seed) { return make_thompson(k, seed); };
        case PolicySpec::Kind::robust_ucb:
            return [k, resolved](std::uint64_t) {
                return make_robust_ucb(k, resolved.sigma, resolved.tail_eps, resolved.delta);
            };
        case PolicySpec::Kind::rucb:
            return [k, resolved](std::uint64_t) { return make_rucb(k, resolved.alpha_explore); };
        case PolicySpec::Kind::ldp_ucb:
            return [k, resolved](std::uint64_t) {
                return make_ldp_ucb(k, resolved.privacy_eps, resolved.delta);
            };
    }
    throw std::invalid_argument("unknown policy kind");
}

}  // namespace quack
