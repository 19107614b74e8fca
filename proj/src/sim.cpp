#include "strongchain/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <queue>
#include <stdexcept>

#include "strongchain/rng.hpp"

namespace strongchain {
namespace sim {

const char* strategy_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::Honest: return "honest";
        case StrategyKind::Selfish: return "selfish";
        case StrategyKind::Reclusive: return "reclusive";
        case StrategyKind::Spiteful: return "spiteful";
        case StrategyKind::TimestampSlow: return "timestamp-slow";
        case StrategyKind::TimestampFast: return "timestamp-fast";
    }
    return "?";
}

StrategyKind strategy_from_name(const std::string& name) {
    for (StrategyKind k :
         {StrategyKind::Honest, StrategyKind::Selfish, StrategyKind::Reclusive,
          StrategyKind::Spiteful, StrategyKind::TimestampSlow, StrategyKind::TimestampFast}) {
        if (name == strategy_name(k)) return k;
    }
    throw std::invalid_argument("unknown strategy: " + name);
}

void SimConfig::validate() const {
    if (miners.empty()) throw std::invalid_argument("miners: at least one required");
    double total = 0;
    for (size_t i = 0; i < miners.size(); ++i) {
        if (miners[i].alpha < 0)
            throw std::invalid_argument("miners[" + std::to_string(i) + "].alpha: negative");
        total += miners[i].alpha;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("miner alphas must sum to 1");
    if (ratio < 1.0) throw std::invalid_argument("ratio: must be >= 1");
    if (gamma < 0.0) throw std::invalid_argument("gamma: must be >= 0");
    if (horizon_blocks == 0) throw std::invalid_argument("horizon_blocks: must be positive");
    if (block_interval == 0) throw std::invalid_argument("block_interval: must be positive");
    if (retarget_window == 0) throw std::invalid_argument("retarget_window: must be positive");
    if (block_reward <= 0) throw std::invalid_argument("block_reward: must be positive");
    if (latency.mean < 0) throw std::invalid_argument("latency.mean: negative");
    if (latency.family == LatencyModel::Family::Weibull && latency.shape <= 0)
        throw std::invalid_argument("latency.shape: must be positive");
    if (median_window == 0 || median_window % 2 == 0)
        throw std::invalid_argument("median_window: must be odd");
}

namespace {

constexpr uint32_t kGenesisTs = 1000000000;
constexpr uint32_t kNone = 0xffffffffu;

struct Window {
    double weak_unit;    // PoW of one weak header; genesis window = 1
    double strong_unit;  // ratio * weak_unit
    uint32_t first_ts;
};

struct SBlock {
    uint32_t parent;
    uint32_t height;
    uint32_t window;
    int32_t finder;  // -1 for genesis
    uint32_t stamped_ts;
    double true_time;
    uint32_t n_weak;
    double weak_ts_sum;
    double weak_true_sum;  // find times of included weak, kGenesisTs scale
    double cum_pow;  // weak units from genesis, own PoW included
    bool broadcast;
    std::vector<uint32_t> weak_by_miner;
};

struct Pending {
    uint32_t count = 0;
    std::vector<uint32_t> cnt;  // per finder, lazily sized
    std::vector<double> ts;     // per finder, stamped-ts sums
    std::vector<double> tt;     // per finder, true find-time sums
};

struct Miner {
    MinerSpec spec;
    Xoshiro256 rng{0, 0};
    uint32_t tip = 0;       // best tip of the public view
    double tip_score = 0;   // cum_pow(tip) + pending bonus
    uint32_t epoch = 0;
    std::vector<uint8_t> known;      // by block id
    std::vector<uint8_t> has_child;  // by block id, in local view
    std::vector<Pending> pending;    // by block id
    std::vector<uint32_t> orphans;   // delivered blocks whose parent is unknown
    // Selfish state; the private chain lives in the arena but is not broadcast.
    bool withholding = false;
    uint32_t priv_tip = kNone;
    uint32_t priv_len = 0;
    std::vector<uint32_t> priv_blocks;
    // Bookkeeping
    uint64_t strong_found = 0;
    uint64_t weak_found = 0;
};

enum class EvKind : uint8_t { Hit, DeliverBlock, DeliverWeak };

struct Ev {
    double time;
    uint64_t seq;
    EvKind kind;
    uint8_t who;  // mining miner, or delivery recipient
    uint32_t a;   // Hit: epoch; DeliverBlock: block id; DeliverWeak: parent id
    uint32_t b;   // DeliverWeak: finder
    uint32_t c;   // DeliverWeak: stamped ts
    double found; // DeliverWeak: true find time
};

struct EvLater {
    bool operator()(const Ev& x, const Ev& y) const {
        if (x.time != y.time) return x.time > y.time;
        return x.seq > y.seq;
    }
};

class Engine {
  public:
    explicit Engine(const SimConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        n_ = cfg_.miners.size();
        base_rate_ = cfg_.ratio / cfg_.block_interval;
        p_strong_ = 1.0 / cfg_.ratio;
        latency_scale_ = cfg_.latency.family == LatencyModel::Family::Weibull
                             ? weibull_scale_from_mean(cfg_.latency.mean, cfg_.latency.shape)
                             : cfg_.latency.mean;

        windows_.push_back({1.0, cfg_.ratio, kGenesisTs});
        SBlock genesis{};
        genesis.parent = kNone;
        genesis.finder = -1;
        genesis.stamped_ts = kGenesisTs;
        genesis.broadcast = true;
        genesis.weak_by_miner.resize(n_, 0);
        blocks_.push_back(std::move(genesis));
        weak_toward_.push_back(0);

        miners_.resize(n_);
        for (size_t i = 0; i < n_; ++i) {
            Miner& m = miners_[i];
            m.spec = cfg_.miners[i];
            m.rng = Xoshiro256(cfg_.seed, i);
            m.known.push_back(1);
            m.has_child.push_back(0);
            m.pending.emplace_back();
        }
        latency_rng_.reserve(n_ * n_);
        for (size_t s = 0; s < n_; ++s)
            for (size_t r = 0; r < n_; ++r)
                latency_rng_.emplace_back(cfg_.seed, 1000 + s * n_ + r);

        for (size_t i = 0; i < n_; ++i)
            if (cfg_.miners[i].alpha > 0) schedule_hit(i, 0.0);
    }

    RunMetrics run() {
        while (!queue_.empty()) {
            Ev ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            switch (ev.kind) {
                case EvKind::Hit: on_hit(ev); break;
                case EvKind::DeliverBlock: on_block(ev.who, ev.a); break;
                case EvKind::DeliverWeak: on_weak_msg(ev.who, ev.a, ev.b, ev.c, ev.found); break;
            }
        }
        return finalize();
    }

  private:
    SimConfig cfg_;
    size_t n_;
    double base_rate_;
    double p_strong_;
    double latency_scale_;
    std::vector<Window> windows_;
    std::vector<SBlock> blocks_;
    std::vector<uint32_t> weak_toward_;  // weak headers created per referenced block
    std::vector<Miner> miners_;
    std::vector<Xoshiro256> latency_rng_;
    std::priority_queue<Ev, std::vector<Ev>, EvLater> queue_;
    uint64_t seq_ = 0;
    double now_ = 0;
    uint64_t strong_total_ = 0;
    uint64_t weak_total_ = 0;
    uint64_t dropped_ = 0;
    bool stopped_ = false;

    double weak_unit(uint32_t id) const { return windows_[blocks_[id].window].weak_unit; }

    uint32_t mining_parent(const Miner& m) const {
        return m.withholding ? m.priv_tip : m.tip;
    }

    void schedule_hit(size_t i, double from) {
        Miner& m = miners_[i];
        double rate = m.spec.alpha * base_rate_ / weak_unit(mining_parent(m));
        queue_.push({from + m.rng.exponential(rate), seq_++, EvKind::Hit,
                     static_cast<uint8_t>(i), m.epoch, 0, 0, 0.0});
    }

    double sample_delay(size_t sender, size_t recipient) {
        if (cfg_.latency.family == LatencyModel::Family::Constant) return latency_scale_;
        return latency_rng_[sender * n_ + recipient].weibull(cfg_.latency.shape, latency_scale_);
    }

    void send_block(size_t sender, uint32_t id) {
        blocks_[id].broadcast = true;
        for (size_t r = 0; r < n_; ++r) {
            if (r == sender) continue;
            queue_.push({now_ + sample_delay(sender, r), seq_++, EvKind::DeliverBlock,
                         static_cast<uint8_t>(r), id, 0, 0, 0.0});
        }
    }

    void send_weak(size_t sender, uint32_t parent, uint32_t ts) {
        for (size_t r = 0; r < n_; ++r) {
            if (r == sender) continue;
            queue_.push({now_ + sample_delay(sender, r), seq_++, EvKind::DeliverWeak,
                         static_cast<uint8_t>(r), parent, static_cast<uint32_t>(sender), ts,
                         now_});
        }
    }

    void grow_views(uint32_t id) {
        weak_toward_.resize(id + 1, 0);
        for (Miner& m : miners_) {
            m.known.resize(id + 1, 0);
            m.has_child.resize(id + 1, 0);
            m.pending.resize(id + 1);
        }
    }

    uint32_t median_ts(uint32_t from) const {
        std::vector<uint32_t> ts;
        uint32_t cur = from;
        while (ts.size() < cfg_.median_window && cur != kNone) {
            ts.push_back(blocks_[cur].stamped_ts);
            cur = blocks_[cur].parent;
        }
        std::sort(ts.begin(), ts.end());
        return ts[ts.size() / 2];
    }

    uint32_t stamp(const Miner& m, uint32_t parent) const {
        switch (m.spec.strategy) {
            case StrategyKind::TimestampSlow:
                return median_ts(parent) + 1;
            case StrategyKind::TimestampFast:
                return kGenesisTs + static_cast<uint32_t>(now_) + cfg_.max_future_drift;
            default:
                return kGenesisTs + static_cast<uint32_t>(now_);
        }
    }

    // Score of a block as a chain tip in miner i's view: cumulative PoW plus
    // the bonus for weak headers pending on it.
    double score_of(const Miner& m, uint32_t id) const {
        return blocks_[id].cum_pow + m.pending[id].count * weak_unit(id);
    }

    void add_pending(Miner& m, uint32_t parent, size_t finder, uint32_t ts, double found) {
        Pending& p = m.pending[parent];
        if (p.cnt.empty()) {
            p.cnt.resize(n_, 0);
            p.ts.resize(n_, 0.0);
            p.tt.resize(n_, 0.0);
        }
        p.count++;
        p.cnt[finder]++;
        p.ts[finder] += ts;
        p.tt[finder] += std::floor(kGenesisTs + found);
    }

    uint32_t make_window(uint32_t parent, uint32_t first_ts) {
        const SBlock& pb = blocks_[parent];
        const Window& pw = windows_[pb.window];
        int64_t elapsed = static_cast<int64_t>(pb.stamped_ts) -
                          static_cast<int64_t>(pw.first_ts);
        int64_t expected =
            static_cast<int64_t>(cfg_.retarget_window) * cfg_.block_interval;
        elapsed = std::clamp(elapsed, expected / 4, expected * 4);
        double scale = static_cast<double>(expected) / static_cast<double>(elapsed);
        windows_.push_back({pw.weak_unit * scale, pw.strong_unit * scale, first_ts});
        return static_cast<uint32_t>(windows_.size() - 1);
    }

    // Creates a block in the arena mining on `parent`, consuming miner i's
    // pending weak headers for it per strategy, and returns its id.
    uint32_t create_block(size_t i, uint32_t parent) {
        Miner& m = miners_[i];
        uint32_t ts = stamp(m, parent);
        SBlock b{};
        b.parent = parent;
        b.height = blocks_[parent].height + 1;
        b.finder = static_cast<int32_t>(i);
        b.stamped_ts = ts;
        b.true_time = now_;
        b.weak_by_miner.resize(n_, 0);
        b.window = (cfg_.retarget_enabled && b.height % cfg_.retarget_window == 0)
                       ? make_window(parent, ts)
                       : blocks_[parent].window;

        Pending& p = m.pending[parent];
        if (p.count > 0) {
            bool include_foreign = true;
            if (m.spec.strategy == StrategyKind::Spiteful) {
                uint32_t own = p.cnt.empty() ? 0 : p.cnt[i];
                uint32_t foreign = p.count - own;
                include_foreign =
                    m.spec.spiteful_threshold > 0 &&
                    foreign > m.spec.spiteful_threshold * cfg_.ratio;
            }
            for (size_t f = 0; f < p.cnt.size(); ++f) {
                if (!include_foreign && f != i) continue;
                b.n_weak += p.cnt[f];
                b.weak_by_miner[f] = p.cnt[f];
                b.weak_ts_sum += p.ts[f];
                b.weak_true_sum += p.tt[f];
            }
        }
        m.pending[parent] = Pending{};

        const Window& w = windows_[b.window];
        b.cum_pow = blocks_[parent].cum_pow + w.strong_unit + b.n_weak * w.weak_unit;

        uint32_t id = static_cast<uint32_t>(blocks_.size());
        blocks_.push_back(std::move(b));
        grow_views(id);
        m.known[id] = 1;
        m.has_child[parent] = 1;
        return id;
    }

    void selfish_check(Miner& m) {
        if (!m.withholding) return;
        double priv = score_of(m, m.priv_tip);
        double pub = m.tip_score;
        double r_unit = windows_[blocks_[m.tip].window].strong_unit;
        const double eps = 1e-6 * r_unit;
        if (pub - priv >= r_unit - eps) {
            // Too far behind; abandon the private chain.
            m.withholding = false;
            m.priv_blocks.clear();
            m.priv_len = 0;
            m.priv_tip = kNone;
            m.epoch++;
            schedule_hit(static_cast<size_t>(&m - miners_.data()), now_);
        } else if (m.priv_len >= 2 && priv > pub + eps && priv - pub <= r_unit + eps) {
            size_t i = &m - miners_.data();
            for (uint32_t id : m.priv_blocks) send_block(i, id);
            m.tip = m.priv_tip;
            m.tip_score = priv;
            m.withholding = false;
            m.priv_blocks.clear();
            m.priv_len = 0;
            m.priv_tip = kNone;
            // Mining parent is unchanged (it was the private tip).
        }
    }

    void on_hit(const Ev& ev) {
        size_t i = ev.who;
        Miner& m = miners_[i];
        if (ev.a != m.epoch || stopped_) return;

        bool strong = cfg_.ratio == 1.0 || m.rng.bernoulli(p_strong_);
        uint32_t parent = mining_parent(m);
        if (strong) {
            uint32_t id = create_block(i, parent);
            m.strong_found++;
            strong_total_++;
            if (strong_total_ >= cfg_.horizon_blocks) stopped_ = true;
            if (m.spec.strategy == StrategyKind::Selfish) {
                m.priv_tip = id;
                m.priv_len++;
                m.priv_blocks.push_back(id);
                m.withholding = true;
                selfish_check(m);
            } else {
                m.tip = id;
                m.tip_score = blocks_[id].cum_pow;
                send_block(i, id);
            }
            if (!stopped_) {
                m.epoch++;
                schedule_hit(i, now_);
            }
        } else {
            uint32_t ts = stamp(m, parent);
            m.weak_found++;
            weak_total_++;
            weak_toward_[parent]++;
            add_pending(m, parent, i, ts, now_);
            if (parent == m.tip && !m.withholding) m.tip_score += weak_unit(parent);
            bool withheld = m.spec.strategy == StrategyKind::Reclusive ||
                            (m.withholding && cfg_.selfish_withhold_weak);
            if (!withheld) send_weak(i, parent, ts);
            if (m.spec.strategy == StrategyKind::Selfish) selfish_check(m);
            if (!stopped_) schedule_hit(i, now_);
        }
    }

    void attach_block(size_t i, uint32_t id) {
        Miner& m = miners_[i];
        m.known[id] = 1;
        m.has_child[blocks_[id].parent] = 1;
        double score = score_of(m, id);
        if (score > m.tip_score) {
            m.tip = id;
            m.tip_score = score;
            if (!m.withholding && !stopped_) {
                m.epoch++;
                schedule_hit(i, now_);
            }
        }
        if (m.spec.strategy == StrategyKind::Selfish) selfish_check(m);
    }

    void on_block(size_t i, uint32_t id) {
        Miner& m = miners_[i];
        if (m.known[id]) {
            dropped_++;
            return;
        }
        if (!m.known[blocks_[id].parent]) {
            m.orphans.push_back(id);
            return;
        }
        attach_block(i, id);
        // Orphans may now connect; repeat until no progress.
        bool progress = true;
        while (progress && !m.orphans.empty()) {
            progress = false;
            for (size_t k = 0; k < m.orphans.size(); ++k) {
                uint32_t o = m.orphans[k];
                if (m.known[blocks_[o].parent]) {
                    m.orphans.erase(m.orphans.begin() + k);
                    attach_block(i, o);
                    progress = true;
                    break;
                }
            }
        }
    }

    void on_weak_msg(size_t i, uint32_t parent, uint32_t finder, uint32_t ts,
                     double found) {
        Miner& m = miners_[i];
        if (parent >= blocks_.size()) {
            dropped_++;
            return;
        }
        add_pending(m, parent, finder, ts, found);
        if (parent == m.tip) {
            m.tip_score += weak_unit(parent);
        } else if (m.known[parent] && !m.has_child[parent]) {
            double score = score_of(m, parent);
            if (score > m.tip_score) {
                m.tip = parent;
                m.tip_score = score;
                if (!m.withholding && !stopped_) {
                    m.epoch++;
                    schedule_hit(i, now_);
                }
            }
        }
        if (m.spec.strategy == StrategyKind::Selfish) selfish_check(m);
    }

    RunMetrics finalize() {
        RunMetrics out;
        out.strong_found_total = strong_total_;
        out.weak_found_total = weak_total_;
        out.dropped_messages = dropped_;
        out.duration_seconds = now_;

        uint32_t best = 0;
        for (uint32_t id = 1; id < blocks_.size(); ++id)
            if (blocks_[id].broadcast && blocks_[id].cum_pow > blocks_[best].cum_pow)
                best = id;

        out.converged = true;
        for (const Miner& m : miners_)
            if (m.tip != miners_[0].tip) out.converged = false;

        out.main_chain_length = blocks_[best].height;
        out.weak_pending_at_horizon = weak_toward_[best];

        double c = 1.0 / (1.0 + cfg_.gamma * (cfg_.ratio - 1.0) / cfg_.ratio);
        double strong_reward = c * cfg_.block_reward;
        double weak_reward = c * cfg_.gamma * cfg_.block_reward / cfg_.ratio;

        out.miners.resize(n_);
        std::vector<double> sum(n_, 0), sumsq(n_, 0);
        double dev_s_all = 0, dev_e_all = 0, dev_s_adv = 0, dev_e_adv = 0;

        for (uint32_t cur = best; cur != 0; cur = blocks_[cur].parent) {
            const SBlock& b = blocks_[cur];
            out.weak_included_main += b.n_weak;
            out.miners[b.finder].strong_on_main++;
            for (size_t f = 0; f < n_; ++f) {
                out.miners[f].weak_on_main += b.weak_by_miner[f];
                double x = weak_reward * b.weak_by_miner[f] +
                           (static_cast<int32_t>(f) == b.finder ? strong_reward : 0.0);
                sum[f] += x;
                sumsq[f] += x * x;
            }
            double truth = std::floor(kGenesisTs + b.true_time);
            double denom = 1.0 + b.n_weak / cfg_.ratio;
            double eff = (b.stamped_ts + b.weak_ts_sum / cfg_.ratio) / denom;
            double eff_honest = (truth + b.weak_true_sum / cfg_.ratio) / denom;
            dev_s_all += truth - b.stamped_ts;
            dev_e_all += eff_honest - eff;
            if (miners_[b.finder].spec.strategy != StrategyKind::Honest) {
                dev_s_adv += truth - b.stamped_ts;
                dev_e_adv += eff_honest - eff;
                out.adv_main_blocks++;
            }
        }

        uint64_t len = out.main_chain_length;
        if (len > 0) {
            out.ts_dev_strong_all = dev_s_all / len;
            out.ts_dev_effective_all = dev_e_all / len;
        }
        if (out.adv_main_blocks > 0) {
            out.ts_dev_strong_adv = dev_s_adv / out.adv_main_blocks;
            out.ts_dev_effective_adv = dev_e_adv / out.adv_main_blocks;
        }

        double total_reward = 0;
        for (size_t f = 0; f < n_; ++f) total_reward += sum[f];
        for (size_t f = 0; f < n_; ++f) {
            MinerMetrics& mm = out.miners[f];
            mm.alpha = cfg_.miners[f].alpha;
            mm.strategy = cfg_.miners[f].strategy;
            mm.strong_found = miners_[f].strong_found;
            mm.weak_found = miners_[f].weak_found;
            mm.reward = sum[f];
            mm.reward_share = total_reward > 0 ? sum[f] / total_reward : 0;
            mm.fairness = mm.alpha > 0 ? mm.reward_share / mm.alpha : 0;
            if (len > 0) {
                mm.reward_mean = sum[f] / len;
                double var = sumsq[f] / len - mm.reward_mean * mm.reward_mean;
                if (var < 0) var = 0;
                mm.reward_cov = mm.reward_mean > 0 ? std::sqrt(var) / mm.reward_mean : 0;
            }
        }

        if (strong_total_ > 0)
            out.strong_stale_rate =
                static_cast<double>(strong_total_ - out.main_chain_length) / strong_total_;
        if (weak_total_ > 0)
            out.weak_stale_rate =
                static_cast<double>(weak_total_ - out.weak_included_main -
                                    out.weak_pending_at_horizon) /
                weak_total_;
        return out;
    }
};

}  // namespace

RunMetrics run_scenario(const SimConfig& config) {
    Engine engine(config);
    return engine.run();
}

}  // namespace sim
}  // namespace strongchain
