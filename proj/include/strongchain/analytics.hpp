#ifndef STRONGCHAIN_ANALYTICS_HPP
#define STRONGCHAIN_ANALYTICS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "strongchain/params.hpp"

namespace strongchain {
namespace analytics {

struct RewardModelInputs {
    double alpha = 0.0;        // miner's hash share, in (0, 1)
    double ratio = 1.0;        // T_w / T_s
    double gamma = 0.0;
    double block_reward = 12.5;  // currency units
    double fee_mean = 0.0;
    double fee_var = 0.0;
};

enum class Protocol { Bitcoin, StrongChain };

// c = 1 / (1 + gamma * (ratio - 1) / ratio), exact.
Rational scaling_constant(const Rational& ratio, const Rational& gamma);
double scaling_constant(double ratio, double gamma);

// Var(sum_{i=1..N} X_i) = E(N) Var(X) + Var(N) E(X)^2 for iid X independent of N.
double variance_of_random_sum(double mean_n, double var_n, double mean_x, double var_x);

// alpha Var(F) + alpha(1-alpha)(E^2(F) + R^2)
double bitcoin_reward_variance(const RewardModelInputs& in);

// Weak headers credited to an alpha-strong miner per block: binomial thinning
// of a geometric total.
struct WeakCountMoments {
    double mean = 0.0;
    double variance = 0.0;
};
WeakCountMoments weak_count_moments(double alpha, double ratio);

double strongchain_reward_variance(const RewardModelInputs& in);

struct ZeroMean : std::invalid_argument {
    ZeroMean() : std::invalid_argument("coefficient of variation undefined for zero mean") {}
};

double coefficient_of_variation(const RewardModelInputs& in, Protocol protocol);

struct NoSolution : std::runtime_error {
    NoSolution() : std::runtime_error("no equivalent pool share in (0, bitcoin_share]") {}
};

// The alpha at which StrongChain's CoV equals Bitcoin's CoV at bitcoin_share;
// bisection on (0, bitcoin_share], relative tolerance 1e-9.
double equivalent_pool_share(double bitcoin_share, double ratio, double gamma);

// P(number of weak headers per block > n) for the geometric law.
double weak_count_tail(double ratio, uint64_t n);

}  // namespace analytics
}  // namespace strongchain

#endif
