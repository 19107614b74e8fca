#include <doctest.h>

#include <cmath>
#include <vector>

#include "strongchain/chain.hpp"
#include "strongchain/mining.hpp"

using namespace strongchain;

namespace {

// Every hash is strong: T_s above the whole 256-bit hash space.
ProtocolParams everything_strong() {
    ProtocolParams p;
    p.max_target = U256(1) << 256;
    p.strong_target = U256(1) << 256;
    p.weak_target = p.strong_target;  // band empty anyway
    return p;
}

}  // namespace

TEST_CASE("grind: degenerate target returns at nonce 0 with no weak headers") {
    BlockTemplate tmpl;
    tmpl.timestamp = 1000;
    GrindResult r = grind_block(tmpl, everything_strong(), 10);
    REQUIRE(r.status == GrindStatus::Strong);
    CHECK(r.block->header.nonce == 0);
    CHECK(r.hashes_tried == 1);
    CHECK(r.block->weak_headers.empty());
}

TEST_CASE("grind: empty weak band never collects weak headers") {
    // T_w == T_s: the band [T_s, T_w) is empty.
    ProtocolParams p;
    p.max_target = U256(1) << 255;
    p.strong_target = p.max_target >> 4;
    p.weak_target = p.strong_target;
    BlockTemplate tmpl;
    tmpl.timestamp = 1000;
    GrindResult r = grind_block(tmpl, p, 1u << 16);
    REQUIRE(r.status == GrindStatus::Strong);
    CHECK(r.block->weak_headers.empty());
}

TEST_CASE("grind: toy-difficulty block passes full validation") {
    ProtocolParams params = ProtocolParams::toy(8, 2);  // ~2^9 expected trials, ratio 4
    Block genesis = make_genesis(params, 1000);
    BlockTemplate tmpl;
    tmpl.prev_hash = genesis.header.hash();
    tmpl.coinbase[0] = 1;
    tmpl.timestamp = 1600;
    GrindResult r = grind_block(tmpl, params, 1u << 20);
    REQUIRE(r.status == GrindStatus::Strong);
    CHECK(validate_block(*r.block, genesis, params, 10000, {1000}) == Verdict::Ok);
    // Weak hits collected along the way match the block's weak set.
    CHECK(r.weak_headers == r.block->weak_headers);
}

TEST_CASE("grind: deterministic and budget-limited") {
    ProtocolParams params = ProtocolParams::toy(8, 2);
    BlockTemplate tmpl;
    tmpl.timestamp = 1600;
    GrindResult a = grind_block(tmpl, params, 1u << 20);
    GrindResult b = grind_block(tmpl, params, 1u << 20);
    REQUIRE(a.status == GrindStatus::Strong);
    CHECK(*a.block == *b.block);
    CHECK(a.hashes_tried == b.hashes_tried);

    GrindResult tiny = grind_block(tmpl, params, a.hashes_tried - 1);
    CHECK(tiny.status == GrindStatus::Exhausted);
    CHECK(tiny.hashes_tried == a.hashes_tried - 1);
}

TEST_CASE("oracle: mean weak headers per block tracks ratio - 1") {
    const double ratio = 64.0;
    std::vector<MinerIdentity> miners(1);
    miners[0].hash_share = 1.0;
    MiningOracle oracle(miners, 1.0 / ratio, ratio / 600.0, 42);

    uint64_t strong = 0, weak = 0;
    const uint64_t kStrong = 20000;
    while (strong < kStrong) {
        MiningEvent e = oracle.next_event();
        if (e.kind == MiningEventKind::StrongFound)
            ++strong;
        else
            ++weak;
    }
    double mean = static_cast<double>(weak) / strong;
    CHECK(mean == doctest::Approx(ratio - 1).epsilon(0.02));
    // Strong blocks arrive every 600 s on average.
    CHECK(oracle.now() / strong == doctest::Approx(600.0).epsilon(0.02));
}

TEST_CASE("oracle: finder frequencies follow hash shares") {
    std::vector<MinerIdentity> miners(2);
    miners[0].hash_share = 0.1;
    miners[1].hash_share = 0.9;
    MiningOracle oracle(miners, 0.1, 1.0, 7);
    uint64_t found[2] = {0, 0};
    const int kEvents = 1'000'000;
    for (int i = 0; i < kEvents; ++i) ++found[oracle.next_event().finder];
    CHECK(static_cast<double>(found[0]) / kEvents == doctest::Approx(0.1).epsilon(0.01));
    CHECK(static_cast<double>(found[1]) / kEvents == doctest::Approx(0.9).epsilon(0.01));
}

TEST_CASE("oracle: identical seeds give identical event streams") {
    std::vector<MinerIdentity> miners(2);
    miners[0].hash_share = 0.3;
    miners[1].hash_share = 0.7;
    MiningOracle a(miners, 0.01, 1.0, 99);
    MiningOracle b(miners, 0.01, 1.0, 99);
    for (int i = 0; i < 10000; ++i) {
        MiningEvent ea = a.next_event();
        MiningEvent eb = b.next_event();
        CHECK(ea.time == eb.time);
        CHECK(ea.finder == eb.finder);
        CHECK(ea.kind == eb.kind);
    }
}

TEST_CASE("oracle: weak counts per block pass a chi-squared geometric fit") {
    const double ratio = 8.0;
    std::vector<MinerIdentity> miners(1);
    miners[0].hash_share = 1.0;
    MiningOracle oracle(miners, 1.0 / ratio, ratio / 600.0, 1234);

    const int kBlocks = 100000;
    const int kBuckets = 20;  // counts 0..18 plus a tail bucket
    std::vector<uint64_t> observed(kBuckets, 0);
    int blocks = 0, run = 0;
    while (blocks < kBlocks) {
        MiningEvent e = oracle.next_event();
        if (e.kind == MiningEventKind::WeakFound) {
            ++run;
            continue;
        }
        ++observed[std::min(run, kBuckets - 1)];
        run = 0;
        ++blocks;
    }
    const double p = 1.0 / ratio;
    double chi2 = 0.0;
    double tail = 1.0;
    for (int n = 0; n < kBuckets; ++n) {
        double expect = (n < kBuckets - 1) ? kBlocks * tail * p : kBlocks * tail;
        tail *= (n < kBuckets - 1) ? (1.0 - p) : 1.0;
        double d = observed[n] - expect;
        chi2 += d * d / expect;
    }
    // 19 degrees of freedom, significance 0.01.
    CHECK(chi2 < 36.19);
}

TEST_CASE("grinding weak counts follow the same geometric law as the oracle") {
    ProtocolParams params = ProtocolParams::toy(9, 3);  // ratio 8, ~2^10 trials per block
    const double p = 1.0 / 8.0;
    const int kBlocks = 400;
    uint64_t total_weak = 0;
    for (int i = 0; i < kBlocks; ++i) {
        BlockTemplate tmpl;
        tmpl.timestamp = 1000 + i;
        GrindResult r = grind_block(tmpl, params, 1u << 22);
        REQUIRE(r.status == GrindStatus::Strong);
        total_weak += r.block->weak_headers.size();
    }
    // Mean weak per block is (1-p)/p = 7; SE over 400 blocks ~0.37.
    double mean = static_cast<double>(total_weak) / kBlocks;
    CHECK(mean == doctest::Approx((1.0 - p) / p).epsilon(0.25));
}
