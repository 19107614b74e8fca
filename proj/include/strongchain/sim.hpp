#ifndef STRONGCHAIN_SIM_HPP
#define STRONGCHAIN_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace strongchain {
namespace sim {

enum class StrategyKind { Honest, Selfish, Reclusive, Spiteful, TimestampSlow, TimestampFast };

const char* strategy_name(StrategyKind k);
StrategyKind strategy_from_name(const std::string& name);

struct LatencyModel {
    enum class Family { Constant, Weibull };
    Family family = Family::Constant;
    double shape = 0.6;   // Weibull only
    double mean = 0.0;    // seconds
};

struct MinerSpec {
    double alpha = 0.0;
    StrategyKind strategy = StrategyKind::Honest;
    // Spiteful only: include foreign weak headers once their aggregate PoW
    // exceeds this many strong-block equivalents. 0 means never include.
    double spiteful_threshold = 1.0;
};

struct SimConfig {
    std::string name = "scenario";
    std::vector<MinerSpec> miners;
    double ratio = 1024.0;  // T_w/T_s; 1.0 disables weak headers (Bitcoin mode)
    double gamma = 10.0;
    LatencyModel latency;
    uint64_t horizon_blocks = 20000;
    uint64_t seed = 1;
    uint32_t block_interval = 600;
    uint32_t retarget_window = 2016;
    bool retarget_enabled = true;
    double block_reward = 12.5;  // currency units
    uint32_t max_future_drift = 7200;
    uint32_t median_window = 11;
    // If false, a selfish miner broadcasts weak headers found on her private
    // chain instead of withholding them with the blocks.
    bool selfish_withhold_weak = true;

    void validate() const;  // throws std::invalid_argument with field diagnostics
};

struct MinerMetrics {
    double alpha = 0.0;
    StrategyKind strategy = StrategyKind::Honest;
    uint64_t strong_found = 0;
    uint64_t strong_on_main = 0;
    uint64_t weak_found = 0;
    uint64_t weak_on_main = 0;
    double reward = 0.0;        // main-chain rewards, currency units
    double reward_share = 0.0;  // reward / total rewards
    double fairness = 0.0;      // reward_share / alpha
    double reward_mean = 0.0;   // per main-chain block
    double reward_cov = 0.0;    // sqrt(var)/mean of per-block reward
};

struct RunMetrics {
    std::vector<MinerMetrics> miners;
    uint64_t strong_found_total = 0;
    uint64_t main_chain_length = 0;  // blocks above genesis
    uint64_t weak_found_total = 0;
    uint64_t weak_included_main = 0;
    uint64_t weak_pending_at_horizon = 0;
    double strong_stale_rate = 0.0;
    double weak_stale_rate = 0.0;
    uint64_t dropped_messages = 0;
    bool converged = false;  // all miners agree on the main tip after draining
    double duration_seconds = 0.0;  // simulated time

    // Timestamp deviation introduced by dishonest stamping, averaged over
    // main-chain blocks: honest-counterfactual interpretation (every header
    // stamped at its find time) minus the actual interpretation. Positive
    // means timestamps were slowed, negative means accelerated.
    double ts_dev_strong_all = 0.0;     // strong-header-only interpretation
    double ts_dev_effective_all = 0.0;  // PoW-weighted interpretation
    // Same, restricted to blocks found by non-honest miners.
    double ts_dev_strong_adv = 0.0;
    double ts_dev_effective_adv = 0.0;
    uint64_t adv_main_blocks = 0;
};

RunMetrics run_scenario(const SimConfig& config);

}  // namespace sim
}  // namespace strongchain

#endif
