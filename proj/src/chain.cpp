#include "strongchain/chain.hpp"

#include <algorithm>

namespace strongchain {

Block make_genesis(const ProtocolParams& params, uint32_t timestamp) {
    Block b;
    b.header.version = params.version;
    b.header.prev_hash = Hash256{};
    b.header.timestamp = timestamp;
    b.header.target_bits = compact_from_target(params.strong_target);
    b.header.nonce = 0;
    rebind_block(b);
    return b;
}

ChainState::ChainState(ProtocolParams params, Block genesis) : params_(std::move(params)) {
    params_.validate();
    Entry e;
    e.block = std::move(genesis);
    e.hash = e.block.header.hash();
    e.parent = Hash256{};
    e.height = 0;
    e.strong_target = params_.strong_target;
    e.weak_target = params_.weak_target;
    e.window_first_ts = e.block.header.timestamp;
    e.cumulative_pow = block_pow(e.block.weak_headers.size(), e.strong_target, e.weak_target,
                                 params_.max_target);
    e.arrival_seq = next_seq_++;
    genesis_hash_ = e.hash;
    best_tip_ = e.hash;
    entries_.emplace(e.hash, std::move(e));
}

const ChainState::Entry* ChainState::find(const Hash256& h) const {
    auto it = entries_.find(h);
    return it == entries_.end() ? nullptr : &it->second;
}

ProtocolParams ChainState::params_for_child(const Hash256& parent) const {
    const Entry* p = find(parent);
    if (!p) throw std::invalid_argument("params_for_child: unknown parent");
    ProtocolParams params = params_;
    uint32_t child_height = p->height + 1;
    if (child_height % params_.retarget_window == 0) {
        RetargetResult r = retarget(p->window_first_ts, p->block.header.timestamp,
                                    p->strong_target, p->weak_target, params_);
        params.strong_target = r.strong_target;
        params.weak_target = r.weak_target;
    } else {
        params.strong_target = p->strong_target;
        params.weak_target = p->weak_target;
    }
    return params;
}

std::vector<uint32_t> ChainState::recent_timestamps(const Hash256& parent) const {
    std::vector<uint32_t> out;
    const Entry* e = find(parent);
    while (e && out.size() < params_.median_window) {
        out.push_back(e->block.header.timestamp);
        e = e->height == 0 ? nullptr : find(e->parent);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

Verdict ChainState::add_block(const Block& b, uint32_t now) {
    Hash256 h = b.header.hash();
    if (entries_.count(h)) return Verdict::Ok;  // already known
    const Entry* parent = find(b.header.prev_hash);
    if (!parent) return Verdict::BadLinkage;

    ProtocolParams window = params_for_child(parent->hash);
    Verdict v = validate_block(b, parent->block, window, now, recent_timestamps(parent->hash));
    if (v != Verdict::Ok) return v;

    Entry e;
    e.block = b;
    e.hash = h;
    e.parent = parent->hash;
    e.height = parent->height + 1;
    e.strong_target = window.strong_target;
    e.weak_target = window.weak_target;
    e.window_first_ts = (e.height % params_.retarget_window == 0)
                            ? b.header.timestamp
                            : parent->window_first_ts;
    e.cumulative_pow = parent->cumulative_pow +
                       block_pow(b.weak_headers.size(), e.strong_target, e.weak_target,
                                 params_.max_target);
    e.arrival_seq = next_seq_++;
    entries_.emplace(h, std::move(e));
    entries_[parent->hash].children.push_back(h);
    pending_.erase(b.header.prev_hash);  // superseded: new mining targets the child now
    pending_hashes_.erase(b.header.prev_hash);
    refresh_best_tip();
    return Verdict::Ok;
}

Verdict ChainState::add_weak_header(const BlockHeader& weak, uint32_t now) {
    const Entry* parent = find(weak.prev_hash);
    if (!parent) return Verdict::BadLinkage;
    ProtocolParams window = params_for_child(parent->hash);
    Verdict v = validate_weak_header(weak, parent->block.header, window, now,
                                     recent_timestamps(parent->hash));
    if (v != Verdict::Ok) return v;
    Hash256 h = weak.hash();
    if (!pending_hashes_[parent->hash].insert(h).second)
        return Verdict::Ok;  // duplicate, keyed by header hash
    pending_[parent->hash].push_back(weak);
    refresh_best_tip();
    return Verdict::Ok;
}

std::vector<Hash256> ChainState::tips() const {
    std::vector<Hash256> out;
    for (const auto& [h, e] : entries_)
        if (e.children.empty()) out.push_back(h);
    return out;
}

const std::vector<BlockHeader>* ChainState::pending_weak(const Hash256& tip) const {
    auto it = pending_.find(tip);
    return it == pending_.end() ? nullptr : &it->second;
}

Rational ChainState::tip_score(const Hash256& tip) const {
    const Entry* e = find(tip);
    if (!e) throw std::invalid_argument("tip_score: unknown tip");
    Rational score = e->cumulative_pow;
    if (auto it = pending_.find(tip); it != pending_.end() && !it->second.empty()) {
        ProtocolParams child = params_for_child(tip);
        score += Rational(it->second.size()) * Rational(params_.max_target, child.weak_target);
    }
    return score;
}

void ChainState::refresh_best_tip() {
    Hash256 best = best_tip_;
    // The current best tip may have gained a child; fall through to the scan.
    Rational best_score(-1);
    uint64_t best_seq = 0;
    bool have = false;
    for (const auto& [h, e] : entries_) {
        if (!e.children.empty()) continue;
        Rational score = tip_score(h);
        if (!have || score > best_score ||
            (score == best_score && e.arrival_seq < best_seq)) {
            have = true;
            best_score = score;
            best_seq = e.arrival_seq;
            best = h;
        }
    }
    best_tip_ = best;
}

Hash256 fork_choice(const ChainState& state) { return state.best_tip(); }

std::vector<Hash256> ChainState::main_chain() const {
    std::vector<Hash256> out;
    const Entry* e = find(best_tip_);
    while (e) {
        out.push_back(e->hash);
        e = e->height == 0 ? nullptr : find(e->parent);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace strongchain
