#ifndef STRONGCHAIN_CHAIN_HPP
#define STRONGCHAIN_CHAIN_HPP

#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "strongchain/validation.hpp"

namespace strongchain {

struct Hash256Hasher {
    size_t operator()(const Hash256& h) const {
        size_t out;
        std::memcpy(&out, h.data(), sizeof(out));
        return out;
    }
};

// A genesis block for the configured parameters: all-zeros prev_hash,
// initial targets, caller-supplied timestamp. Exempt from PoW checks.
Block make_genesis(const ProtocolParams& params, uint32_t timestamp);

// Block tree with per-block aggregated PoW and per-tip pending weak headers.
// Single-writer; all mutation goes through add_block / add_weak_header.
class ChainState {
public:
    struct Entry {
        Block block;
        Hash256 hash;
        Hash256 parent;
        uint32_t height = 0;
        Rational cumulative_pow;
        uint64_t arrival_seq = 0;
        // Targets in force for this block's difficulty window.
        U256 strong_target;
        U256 weak_target;
        uint32_t window_first_ts = 0;
        std::vector<Hash256> children;
    };

    ChainState(ProtocolParams params, Block genesis);

    // Validates against the parent's window and, if accepted, inserts the
    // block and re-evaluates the best tip.
    Verdict add_block(const Block& b, uint32_t now);

    // Adds a full (decompressed) weak header to the pending set of the block
    // it points to. Duplicates are ignored.
    Verdict add_weak_header(const BlockHeader& weak, uint32_t now);

    const Hash256& best_tip() const { return best_tip_; }
    const Entry* find(const Hash256& h) const;
    const Entry& genesis() const { return *find(genesis_hash_); }
    size_t size() const { return entries_.size(); }

    std::vector<Hash256> tips() const;
    // cumulative_pow(tip) + |pending_weak(tip)| * T_max/T_w of the child window
    Rational tip_score(const Hash256& tip) const;
    const std::vector<BlockHeader>* pending_weak(const Hash256& tip) const;

    // Parameters with the window targets a child of `parent` must use.
    ProtocolParams params_for_child(const Hash256& parent) const;
    // Timestamps of up to median_window ancestors ending at `parent`.
    std::vector<uint32_t> recent_timestamps(const Hash256& parent) const;

    std::vector<Hash256> main_chain() const;  // genesis..best_tip
    const ProtocolParams& base_params() const { return params_; }

private:
    void refresh_best_tip();

    ProtocolParams params_;
    Hash256 genesis_hash_;
    Hash256 best_tip_;
    uint64_t next_seq_ = 0;
    std::unordered_map<Hash256, Entry, Hash256Hasher> entries_;
    std::unordered_map<Hash256, std::vector<BlockHeader>, Hash256Hasher> pending_;
    // Hashes of pending_ entries, so duplicate detection need not rehash them.
    std::unordered_map<Hash256, std::unordered_set<Hash256, Hash256Hasher>, Hash256Hasher>
        pending_hashes_;
};

// Best tip under aggregated PoW plus the pending-weak bonus; ties keep the
// first-seen tip.
Hash256 fork_choice(const ChainState& state);

}  // namespace strongchain

#endif
