#include "strongchain/analytics.hpp"

#include <cmath>

namespace strongchain {
namespace analytics {

Rational scaling_constant(const Rational& ratio, const Rational& gamma) {
    if (ratio < 1) throw std::invalid_argument("ratio must be >= 1");
    return Rational(1) / (Rational(1) + gamma * (ratio - 1) / ratio);
}

double scaling_constant(double ratio, double gamma) {
    if (ratio < 1) throw std::invalid_argument("ratio must be >= 1");
    return 1.0 / (1.0 + gamma * (ratio - 1.0) / ratio);
}

double variance_of_random_sum(double mean_n, double var_n, double mean_x, double var_x) {
    return mean_n * var_x + var_n * mean_x * mean_x;
}

double bitcoin_reward_variance(const RewardModelInputs& in) {
    double a = in.alpha;
    return a * in.fee_var +
           a * (1.0 - a) * (in.fee_mean * in.fee_mean + in.block_reward * in.block_reward);
}

WeakCountMoments weak_count_moments(double alpha, double ratio) {
    // L ~ geometric with mean ratio-1, J ~ Bernoulli(alpha), N = sum of L J's.
    double mean_l = ratio - 1.0;
    double var_l = ratio * ratio - ratio;
    WeakCountMoments m;
    m.mean = alpha * mean_l;
    m.variance = variance_of_random_sum(mean_l, var_l, alpha, alpha * (1.0 - alpha));
    return m;
}

double strongchain_reward_variance(const RewardModelInputs& in) {
    double a = in.alpha;
    double c = scaling_constant(in.ratio, in.gamma);
    double strong_term = c * in.block_reward * c * in.block_reward * a * (1.0 - a);
    double fee_term = a * in.fee_var + a * (1.0 - a) * in.fee_mean * in.fee_mean;
    double weak_unit = c * in.gamma * in.block_reward / in.ratio;
    double weak_term = weak_unit * weak_unit * weak_count_moments(a, in.ratio).variance;
    return strong_term + fee_term + weak_term;
}

double coefficient_of_variation(const RewardModelInputs& in, Protocol protocol) {
    if (in.alpha == 0.0) throw ZeroMean();
    if (protocol == Protocol::Bitcoin) {
        double mean = in.alpha * (in.block_reward + in.fee_mean);
        return std::sqrt(bitcoin_reward_variance(in)) / mean;
    }
    double mean = in.alpha * in.block_reward;  // c-scaling keeps E(total per block) = R
    return std::sqrt(strongchain_reward_variance(in)) / mean;
}

double equivalent_pool_share(double bitcoin_share, double ratio, double gamma) {
    if (!(bitcoin_share > 0.0 && bitcoin_share < 1.0))
        throw std::invalid_argument("bitcoin_share must lie in (0, 1)");
    RewardModelInputs bc;
    bc.alpha = bitcoin_share;
    double target = coefficient_of_variation(bc, Protocol::Bitcoin);

    auto cov_sc = [&](double alpha) {
        RewardModelInputs in;
        in.alpha = alpha;
        in.ratio = ratio;
        in.gamma = gamma;
        return coefficient_of_variation(in, Protocol::StrongChain);
    };

    // CoV is strictly decreasing in alpha; the solution sits at or below
    // bitcoin_share whenever weak rewards help at all.
    if (cov_sc(bitcoin_share) > target * (1.0 + 1e-12)) throw NoSolution();
    double lo = bitcoin_share * 1e-12;
    double hi = bitcoin_share;
    while (cov_sc(lo) < target) lo *= 0.5;  // CoV -> inf as alpha -> 0
    for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        if (cov_sc(mid) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double weak_count_tail(double ratio, uint64_t n) {
    // P(N > n) = (1 - 1/ratio)^(n+1)
    double log_q = std::log1p(-1.0 / ratio);
    return std::exp(static_cast<double>(n + 1) * log_q);
}

}  // namespace analytics
}  // namespace strongchain
