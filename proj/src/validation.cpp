#include "strongchain/validation.hpp"

#include <algorithm>
#include <unordered_set>

namespace strongchain {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Ok: return "ok";
        case Verdict::PowFail: return "pow-fail";
        case Verdict::BadLinkage: return "bad-linkage";
        case Verdict::BadTarget: return "bad-target";
        case Verdict::BadTimestamp: return "bad-timestamp";
        case Verdict::BadVersion: return "bad-version";
        case Verdict::BindingMismatch: return "binding-mismatch";
        case Verdict::MerkleMismatch: return "merkle-mismatch";
        case Verdict::WeakHeaderViolation: return "weak-header-violation";
        case Verdict::DuplicateWeakHeader: return "duplicate-weak-header";
        case Verdict::ProofPathInvalid: return "proof-path-invalid";
    }
    return "unknown";
}

uint32_t median_timestamp(std::vector<uint32_t> timestamps) {
    if (timestamps.empty()) return 0;
    std::sort(timestamps.begin(), timestamps.end());
    return timestamps[timestamps.size() / 2];
}

Verdict check_header_fields(const BlockHeader& h, const ProtocolParams& params,
                            uint32_t now, const std::vector<uint32_t>& recent_timestamps) {
    if (h.target_bits != compact_from_target(params.strong_target)) return Verdict::BadTarget;
    if (!recent_timestamps.empty() && h.timestamp <= median_timestamp(recent_timestamps))
        return Verdict::BadTimestamp;
    if (static_cast<uint64_t>(h.timestamp) >
        static_cast<uint64_t>(now) + params.max_future_drift)
        return Verdict::BadTimestamp;
    if (h.version != params.version) return Verdict::BadVersion;
    return Verdict::Ok;
}

Verdict validate_block(const Block& b, const Block& parent, const ProtocolParams& params,
                       uint32_t now, const std::vector<uint32_t>& recent_timestamps) {
    // 1. PoW
    if (classify_hash(b.header.hash(), params) != HashClass::Strong) return Verdict::PowFail;
    // 2. linkage
    if (b.header.prev_hash != parent.header.hash()) return Verdict::BadLinkage;
    // 3. header fields
    if (Verdict v = check_header_fields(b.header, params, now, recent_timestamps);
        v != Verdict::Ok)
        return v;
    // 4. binding transaction and Merkle root
    if (b.transactions.empty()) return Verdict::BindingMismatch;
    auto commitment = parse_binding_transaction(b.transactions[0]);
    if (!commitment ||
        *commitment != binding_commitment_unchecked(b.weak_headers, b.header))
        return Verdict::BindingMismatch;
    if (b.header.tx_root != transactions_root(b.transactions)) return Verdict::MerkleMismatch;
    // 5. weak headers
    std::unordered_set<std::string> seen;
    for (const auto& w : b.weak_headers) {
        BlockHeader full = w.decompress(b.header);
        Hash256 h = full.hash();
        if (classify_hash(h, params) != HashClass::Weak) return Verdict::WeakHeaderViolation;
        if (full.prev_hash != b.header.prev_hash) return Verdict::WeakHeaderViolation;
        if (check_header_fields(full, params, now, recent_timestamps) != Verdict::Ok)
            return Verdict::WeakHeaderViolation;
        if (!seen.insert(std::string(h.begin(), h.end())).second)
            return Verdict::DuplicateWeakHeader;
    }
    return Verdict::Ok;
}

Verdict validate_weak_header(const BlockHeader& weak, const BlockHeader& tip,
                             const ProtocolParams& params, uint32_t now,
                             const std::vector<uint32_t>& recent_timestamps) {
    if (classify_hash(weak.hash(), params) != HashClass::Weak) return Verdict::WeakHeaderViolation;
    if (weak.prev_hash != tip.hash()) return Verdict::BadLinkage;
    return check_header_fields(weak, params, now, recent_timestamps);
}

RetargetResult retarget(uint32_t window_first_ts, uint32_t window_last_ts,
                        const U256& old_strong, const U256& old_weak,
                        const ProtocolParams& params) {
    if (window_last_ts <= window_first_ts) throw NonPositiveElapsed();
    uint64_t elapsed = window_last_ts - window_first_ts;
    uint64_t expected = static_cast<uint64_t>(params.retarget_window) * params.target_block_interval;
    elapsed = std::clamp(elapsed, expected / 4, expected * 4);

    U256 new_strong = old_strong * elapsed / expected;
    if (new_strong > params.max_target) new_strong = params.max_target;
    if (new_strong == 0) new_strong = 1;
    new_strong = target_from_compact(compact_from_target(new_strong));

    // The weak target keeps the configured ratio exactly.
    U256 new_weak = new_strong * old_weak / old_strong;
    if (new_weak > params.max_target) new_weak = params.max_target;
    return {new_strong, new_weak};
}

}  // namespace strongchain
