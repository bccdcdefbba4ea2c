#include "quack/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quack {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double privatize(const PrivacyMechanism& mech, double x, Rng& rng) {
    require(mech.epsilon > 0.0, "privatize: epsilon must be positive");
    require(x >= 0.0 && x <= 1.0, "privatize: input must lie in [0, 1]");
    if (mech.kind == PrivacyMechanism::Kind::laplace) {
        return x + rng.laplace(1.0 / mech.epsilon);
    }
    const double e = std::exp(mech.epsilon);
    const double c = (e + 1.0) / (2.0 * (e - 1.0));
    const double p_hi = 0.5 + (x - 0.5) / (2.0 * c);
    return rng.uniform01() < p_hi ? 0.5 + c : 0.5 - c;
}

double sample_alpha_stable(double alpha, double location, Rng& rng) {
    require(alpha > 1.0 && alpha <= 2.0, "alpha_stable: alpha must lie in (1, 2]");
    double u, w;
    do {
        u = (rng.uniform01() - 0.5) * kPi;
    } while (std::cos(u) <= 0.0);
    do {
        w = rng.exponential();
    } while (w <= 0.0);
    const double t = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha);
    const double s = std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
    return location + t * s;
}

ArmSpec ArmSpec::bernoulli(double p) {
    require(p >= 0.0 && p <= 1.0, "bernoulli arm: p must lie in [0, 1]");
    ArmSpec a;
    a.family = Family::bernoulli;
    a.p = p;
    return a;
}

ArmSpec ArmSpec::gaussian(double mu, double sigma) {
    require(sigma > 0.0, "gaussian arm: sigma must be positive");
    require(std::isfinite(mu), "gaussian arm: mean must be finite");
    ArmSpec a;
    a.family = Family::gaussian;
    a.mu = mu;
    a.sigma = sigma;
    return a;
}

ArmSpec ArmSpec::alpha_stable(double alpha, double location) {
    require(alpha > 1.0 && alpha <= 2.0, "alpha_stable arm: alpha must lie in (1, 2]");
    require(std::isfinite(location), "alpha_stable arm: location must be finite");
    ArmSpec a;
    a.family = Family::alpha_stable;
    a.alpha = alpha;
    a.location = location;
    return a;
}

double ArmSpec::true_mean() const {
    switch (family) {
        case Family::bernoulli: return p;
        case Family::gaussian: return mu;
        case Family::alpha_stable: return location;  // symmetric, alpha > 1
    }
    return 0.0;
}

double ArmSpec::sample(Rng& rng) const {
    switch (family) {
        case Family::bernoulli: return rng.uniform01() < p ? 1.0 : 0.0;
        case Family::gaussian: return mu + sigma * rng.normal01();
        case Family::alpha_stable: return sample_alpha_stable(alpha, location, rng);
    }
    return 0.0;
}

EnvironmentModel EnvironmentModel::from_arms(std::vector<ArmSpec> arms) {
    require(!arms.empty(), "environment: need at least one arm");
    EnvironmentModel env;
    env.mode_ = FeedbackMode::reward;
    env.k_ = static_cast<int>(arms.size());
    env.arms_ = std::move(arms);
    env.optimal_mean_ = env.arms_[0].true_mean();
    for (const auto& a : env.arms_) env.optimal_mean_ = std::max(env.optimal_mean_, a.true_mean());
    env.gaps_.resize(env.k_);
    for (int a = 1; a <= env.k_; ++a) env.gaps_[a - 1] = env.optimal_mean_ - env.arms_[a - 1].true_mean();
    return env;
}

EnvironmentModel EnvironmentModel::bernoulli(const std::vector<double>& p) {
    std::vector<ArmSpec> arms;
    arms.reserve(p.size());
    for (double x : p) arms.push_back(ArmSpec::bernoulli(x));
    return from_arms(std::move(arms));
}

EnvironmentModel EnvironmentModel::gaussian(const std::vector<double>& mu, double sigma) {
    std::vector<ArmSpec> arms;
    arms.reserve(mu.size());
    for (double x : mu) arms.push_back(ArmSpec::gaussian(x, sigma));
    return from_arms(std::move(arms));
}

EnvironmentModel EnvironmentModel::alpha_stable(double alpha, const std::vector<double>& locations) {
    std::vector<ArmSpec> arms;
    arms.reserve(locations.size());
    for (double x : locations) arms.push_back(ArmSpec::alpha_stable(alpha, x));
    return from_arms(std::move(arms));
}

EnvironmentModel EnvironmentModel::duelling(const std::vector<std::vector<double>>& preference) {
    const int k = static_cast<int>(preference.size());
    require(k >= 1, "duelling environment: need at least one arm");
    for (int a = 0; a < k; ++a) {
        require(static_cast<int>(preference[a].size()) == k, "duelling environment: preference matrix must be square");
        require(preference[a][a] == 0.5, "duelling environment: diagonal must equal 1/2");
        for (int b = 0; b < k; ++b) {
            require(preference[a][b] >= 0.0 && preference[a][b] <= 1.0,
                    "duelling environment: probabilities must lie in [0, 1]");
            require(preference[a][b] + preference[b][a] == 1.0,
                    "duelling environment: preference[a][b] + preference[b][a] must equal 1 exactly");
        }
    }

    EnvironmentModel env;
    env.mode_ = FeedbackMode::duelling;
    env.k_ = k;
    env.preference_ = preference;

    // Condorcet winner: beats every other arm with probability > 1/2.
    for (int a = 0; a < k; ++a) {
        bool wins_all = true;
        for (int b = 0; b < k; ++b) {
            if (b != a && !(preference[a][b] > 0.5)) wins_all = false;
        }
        if (wins_all) {
            env.condorcet_ = a + 1;
            break;
        }
    }
    if (env.condorcet_) {
        env.gaps_.resize(k);
        for (int a = 1; a <= k; ++a) env.gaps_[a - 1] = preference[*env.condorcet_ - 1][a - 1] - 0.5;
    }
    return env;
}

EnvironmentModel EnvironmentModel::with_privacy(PrivacyMechanism mech) const {
    require(mode_ == FeedbackMode::reward, "privacy applies to reward environments only");
    require(mech.epsilon > 0.0, "privacy: epsilon must be positive");
    for (const auto& a : arms_) {
        require(a.family == ArmSpec::Family::bernoulli,
                "privacy requires rewards in [0, 1]; only Bernoulli arms qualify");
    }
    EnvironmentModel env = *this;
    env.privacy_ = mech;
    return env;
}

double EnvironmentModel::true_mean(int arm) const {
    require(mode_ == FeedbackMode::reward, "true_mean: reward environments only");
    require(arm >= 1 && arm <= k_, "true_mean: arm out of range");
    return arms_[arm - 1].true_mean();
}

double EnvironmentModel::optimal_mean() const {
    require(mode_ == FeedbackMode::reward, "optimal_mean: reward environments only");
    return optimal_mean_;
}

const std::vector<double>& EnvironmentModel::gaps() const {
    if (gaps_.empty())
        throw std::logic_error("gaps: duelling environment has no Condorcet winner");
    return gaps_;
}

double EnvironmentModel::preference(int a, int b) const {
    require(mode_ == FeedbackMode::duelling, "preference: duelling environments only");
    require(a >= 1 && a <= k_ && b >= 1 && b <= k_, "preference: arm out of range");
    return preference_[a - 1][b - 1];
}

double EnvironmentModel::sample_reward(int arm, Rng& rng) const {
    if (mode_ != FeedbackMode::reward)
        throw std::logic_error("sample_reward: duelling environments produce duels, not rewards");
    require(arm >= 1 && arm <= k_, "sample_reward: arm out of range");
    const double x = arms_[arm - 1].sample(rng);
    return privacy_ ? privatize(*privacy_, x, rng) : x;
}

int EnvironmentModel::sample_duel(int a, int b, Rng& rng) const {
    if (mode_ != FeedbackMode::duelling)
        throw std::logic_error("sample_duel: reward environments produce rewards, not duels");
    require(a >= 1 && a <= k_ && b >= 1 && b <= k_, "sample_duel: arm out of range");
    return rng.uniform01() < preference_[a - 1][b - 1] ? a : b;
}

double EnvironmentModel::action_gap(int code) const {
    const auto& g = gaps();
    if (mode_ == FeedbackMode::reward) {
        require(code >= 0 && code < k_, "action_gap: code out of range");
        return g[code];
    }
    require(code >= 0 && code < k_ * k_, "action_gap: code out of range");
    const Proposal p = action_from_code(code, k_, mode_);
    return 0.5 * (g[p.first - 1] + g[p.second - 1]);
}

}  // namespace quack
