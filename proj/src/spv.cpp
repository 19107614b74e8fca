#include "strongchain/spv.hpp"

#include <unordered_set>

namespace strongchain {

SpvClient::SpvClient(ProtocolParams params, const BlockHeader& genesis)
    : params_(std::move(params)) {
    params_.validate();
    tip_hash_ = genesis.hash();
    tip_timestamp_ = genesis.timestamp;
    window_first_ts_ = genesis.timestamp;
    cumulative_pow_ = Rational(params_.max_target, params_.strong_target);
    recent_timestamps_.push_back(genesis.timestamp);
}

SpvClient::UpdateResult SpvClient::verify_update(
    const BlockHeader& strong, const std::vector<CompressedWeakHeader>& weak_headers,
    const MerkleProof& bt_proof, uint32_t now) {
    uint32_t child_height = height_ + 1;
    ProtocolParams window = params_;
    uint32_t new_window_first_ts = window_first_ts_;
    if (child_height % params_.retarget_window == 0) {
        RetargetResult r = retarget(window_first_ts_, tip_timestamp_, params_.strong_target,
                                    params_.weak_target, params_);
        window.strong_target = r.strong_target;
        window.weak_target = r.weak_target;
        new_window_first_ts = strong.timestamp;
    }

    std::vector<uint32_t> recent(recent_timestamps_.begin(), recent_timestamps_.end());

    if (classify_hash(strong.hash(), window) != HashClass::Strong) return {Verdict::PowFail, 0};
    if (strong.prev_hash != tip_hash_) return {Verdict::BadLinkage, 0};
    if (Verdict v = check_header_fields(strong, window, now, recent); v != Verdict::Ok)
        return {v, 0};

    std::unordered_set<std::string> seen;
    for (const auto& w : weak_headers) {
        BlockHeader full = w.decompress(strong);
        Hash256 h = full.hash();
        if (classify_hash(h, window) != HashClass::Weak)
            return {Verdict::WeakHeaderViolation, 0};
        if (full.prev_hash != strong.prev_hash) return {Verdict::WeakHeaderViolation, 0};
        if (check_header_fields(full, window, now, recent) != Verdict::Ok)
            return {Verdict::WeakHeaderViolation, 0};
        if (!seen.insert(std::string(h.begin(), h.end())).second)
            return {Verdict::DuplicateWeakHeader, 0};
    }

    // The binding transaction must sit at the first leaf position.
    if (bt_proof.leaf_index != 0) return {Verdict::ProofPathInvalid, 0};
    Bytes binding = make_binding_transaction(binding_commitment_unchecked(weak_headers, strong));
    Hash256 leaf = dsha256(std::span<const uint8_t>(binding.data(), binding.size()));
    if (merkle_proof_root(leaf, bt_proof) != strong.tx_root)
        return {Verdict::BindingMismatch, 0};

    Rational pow = block_pow(weak_headers.size(), window.strong_target, window.weak_target,
                             params_.max_target);

    // Accept: keep only the strong header and its PoW.
    params_.strong_target = window.strong_target;
    params_.weak_target = window.weak_target;
    window_first_ts_ = new_window_first_ts;
    tip_hash_ = strong.hash();
    tip_timestamp_ = strong.timestamp;
    height_ = child_height;
    cumulative_pow_ += pow;
    recent_timestamps_.push_back(strong.timestamp);
    while (recent_timestamps_.size() > params_.median_window) recent_timestamps_.pop_front();
    return {Verdict::Ok, pow};
}

}  // namespace strongchain
