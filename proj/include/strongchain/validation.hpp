#ifndef STRONGCHAIN_VALIDATION_HPP
#define STRONGCHAIN_VALIDATION_HPP

#include <string>
#include <vector>

#include "strongchain/block.hpp"

namespace strongchain {

enum class Verdict {
    Ok,
    PowFail,            // H(header) >= T_s
    BadLinkage,         // prev_hash does not match the parent
    BadTarget,          // target_bits does not match the window target
    BadTimestamp,       // <= median of recent timestamps, or too far in the future
    BadVersion,
    BindingMismatch,    // transactions[0] missing or committing to a different weak set
    MerkleMismatch,     // tx_root does not authenticate the transaction list
    WeakHeaderViolation,  // a weak header outside the weak band or mislinked
    DuplicateWeakHeader,
    ProofPathInvalid,   // SPV only: binding-transaction proof not for the first leaf
};

const char* verdict_name(Verdict v);

// Checks shared by strong and weak headers other than PoW and linkage:
// target, timestamp bounds, version.
Verdict check_header_fields(const BlockHeader& h, const ProtocolParams& params,
                            uint32_t now, const std::vector<uint32_t>& recent_timestamps);

// Full block validation against its parent. recent_timestamps are the
// timestamps of up to median_window ancestors (parent last).
Verdict validate_block(const Block& b, const Block& parent, const ProtocolParams& params,
                       uint32_t now, const std::vector<uint32_t>& recent_timestamps);

// Validation for a weak header received from the network: weak band, linkage
// to the given tip header, field checks.
Verdict validate_weak_header(const BlockHeader& weak, const BlockHeader& tip,
                             const ProtocolParams& params, uint32_t now,
                             const std::vector<uint32_t>& recent_timestamps);

uint32_t median_timestamp(std::vector<uint32_t> timestamps);

struct RetargetResult {
    U256 strong_target;
    U256 weak_target;
};

// Eq.-1 style retarget with Bitcoin's x4 clamp; the weak target keeps the
// configured ratio exactly and both targets are capped at T_max. The new
// strong target is truncated to compact-bits precision.
struct NonPositiveElapsed : std::invalid_argument {
    NonPositiveElapsed() : std::invalid_argument("retarget window elapsed time must be positive") {}
};

RetargetResult retarget(uint32_t window_first_ts, uint32_t window_last_ts,
                        const U256& old_strong, const U256& old_weak,
                        const ProtocolParams& params);

}  // namespace strongchain

#endif
