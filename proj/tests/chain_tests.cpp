#include <doctest.h>
#include <json.hpp>

#include <fstream>

#include "strongchain/chain.hpp"
#include "strongchain/mining.hpp"
#include "strongchain/spv.hpp"

using namespace strongchain;
using nlohmann::json;

namespace {

constexpr uint32_t kGenesisTs = 1'700'000'000;
constexpr uint32_t kFarFuture = 2'000'000'000;

Block mine_child(const ChainState& chain, const Hash256& parent, uint8_t tag, uint32_t ts) {
    BlockTemplate tmpl;
    tmpl.prev_hash = parent;
    tmpl.coinbase[0] = tag;
    tmpl.timestamp = ts;
    GrindResult res = grind_block(tmpl, chain.params_for_child(parent), 1u << 24);
    REQUIRE(res.status == GrindStatus::Strong);
    return *res.block;
}

// Weak headers a miner would find working on `parent`, decompressed.
std::vector<BlockHeader> mine_weak(const ChainState& chain, const Hash256& parent, uint8_t tag,
                                   uint32_t ts) {
    BlockTemplate tmpl;
    tmpl.prev_hash = parent;
    tmpl.coinbase[0] = tag;
    tmpl.timestamp = ts;
    GrindResult res = grind_block(tmpl, chain.params_for_child(parent), 1u << 24);
    REQUIRE(res.status == GrindStatus::Strong);
    std::vector<BlockHeader> out;
    for (const auto& w : res.block->weak_headers) out.push_back(w.decompress(res.block->header));
    return out;
}

json load_golden_chain() {
    std::ifstream in(std::string(TESTDATA_DIR) + "/toy_mined_blocks.json");
    REQUIRE(in.good());
    return json::parse(in);
}

}  // namespace

TEST_CASE("fork choice agrees with a reference scorer on all 4-block tree shapes") {
    // Every parent assignment for four blocks above genesis (1*2*3*4 = 24 trees),
    // plus pending weak headers on the last block's tip.
    ProtocolParams params = ProtocolParams::toy(6, 3);
    for (int p2 = 0; p2 < 2; ++p2) {
        for (int p3 = 0; p3 < 3; ++p3) {
            for (int p4 = 0; p4 < 4; ++p4) {
                Block genesis = make_genesis(params, kGenesisTs);
                ChainState chain(params, genesis);

                std::vector<Hash256> ids = {genesis.header.hash()};
                std::vector<size_t> parent_of = {0, 0, static_cast<size_t>(p2),
                                                 static_cast<size_t>(p3),
                                                 static_cast<size_t>(p4)};
                std::vector<size_t> n_weak = {genesis.weak_headers.size()};
                for (size_t i = 1; i <= 4; ++i) {
                    Block b = mine_child(chain, ids[parent_of[i]], static_cast<uint8_t>(i),
                                         kGenesisTs + static_cast<uint32_t>(i) * 600);
                    REQUIRE(chain.add_block(b, kFarFuture) == Verdict::Ok);
                    ids.push_back(b.header.hash());
                    n_weak.push_back(b.weak_headers.size());
                }
                size_t pending_on = 4;
                std::vector<BlockHeader> weak =
                    mine_weak(chain, ids[pending_on], 9, kGenesisTs + 5 * 600);
                size_t pending_count = 0;
                for (const auto& w : weak)
                    if (chain.add_weak_header(w, kFarFuture) == Verdict::Ok) ++pending_count;

                // Reference: cumulative PoW in exact rationals, pending bonus on
                // childless tips, lowest insertion index on ties.
                Rational strong_unit(params.max_target, params.strong_target);
                Rational weak_unit(params.max_target, params.weak_target);
                std::vector<bool> has_child(5, false);
                for (size_t i = 1; i <= 4; ++i) has_child[parent_of[i]] = true;
                Rational best_score(-1);
                size_t best = 0;
                bool have = false;
                for (size_t i = 0; i <= 4; ++i) {
                    if (has_child[i]) continue;
                    Rational cum(0);
                    for (size_t j = i;; j = parent_of[j]) {
                        cum += strong_unit + Rational(n_weak[j]) * weak_unit;
                        if (j == 0) break;
                    }
                    if (i == pending_on) cum += Rational(pending_count) * weak_unit;
                    if (!have || cum > best_score) {
                        have = true;
                        best_score = cum;
                        best = i;
                    }
                }
                CAPTURE(p2);
                CAPTURE(p3);
                CAPTURE(p4);
                CHECK(chain.best_tip() == ids[best]);
                CHECK(chain.tip_score(ids[best]) == best_score);
            }
        }
    }
}

TEST_CASE("pending weak headers flip the tip exactly when l+k exceeds the rival") {
    ProtocolParams params = ProtocolParams::toy(6, 3);
    Block genesis = make_genesis(params, kGenesisTs);
    ChainState chain(params, genesis);

    Block a = mine_child(chain, genesis.header.hash(), 1, kGenesisTs + 600);
    Block b = mine_child(chain, genesis.header.hash(), 2, kGenesisTs + 601);
    REQUIRE(chain.add_block(a, kFarFuture) == Verdict::Ok);
    REQUIRE(chain.add_block(b, kFarFuture) == Verdict::Ok);

    Hash256 ha = a.header.hash(), hb = b.header.hash();
    Rational weak_unit(params.max_target, params.weak_target);
    Rational score_a = chain.tip_score(ha);
    Rational score_b = chain.tip_score(hb);
    Hash256 loser = chain.best_tip() == ha ? hb : ha;
    Hash256 winner = chain.best_tip();
    Rational gap = (winner == ha ? score_a : score_b) - (winner == ha ? score_b : score_a);

    // Feed pending weak headers to the losing tip one at a time; the tip must
    // switch at the first strictly greater score, never on a tie.
    std::vector<BlockHeader> weak;
    for (uint8_t round = 10; weak.size() < 40; ++round) {
        auto more = mine_weak(chain, loser, round, kGenesisTs + 600u + round);
        weak.insert(weak.end(), more.begin(), more.end());
    }
    size_t added = 0;
    for (const auto& w : weak) {
        if (chain.add_weak_header(w, kFarFuture) != Verdict::Ok) continue;
        ++added;
        Rational loser_score = (loser == ha ? score_a : score_b) + Rational(added) * weak_unit;
        Rational winner_score = winner == ha ? score_a : score_b;
        if (loser_score > winner_score) {
            CHECK(chain.best_tip() == loser);
        } else if (loser_score == winner_score) {
            // Ties resolve to the first-seen block: a arrived before b.
            CHECK(chain.best_tip() == ha);
        } else {
            CHECK(chain.best_tip() == winner);
        }
    }
    REQUIRE(Rational(added) * weak_unit > gap);  // the flip was actually exercised
    CHECK(chain.best_tip() == loser);
}

TEST_CASE("equal-weight competing tips keep the first-seen block") {
    // ratio_log2 = 0 leaves a near-empty weak band, so both children carry the
    // same PoW with no weak headers.
    ProtocolParams params = ProtocolParams::toy(6, 0);
    Block genesis = make_genesis(params, kGenesisTs);
    ChainState chain(params, genesis);

    Block a = mine_child(chain, genesis.header.hash(), 1, kGenesisTs + 600);
    Block b = mine_child(chain, genesis.header.hash(), 2, kGenesisTs + 601);
    REQUIRE(a.weak_headers.empty());
    REQUIRE(b.weak_headers.empty());
    REQUIRE(chain.add_block(a, kFarFuture) == Verdict::Ok);
    CHECK(chain.best_tip() == a.header.hash());
    REQUIRE(chain.add_block(b, kFarFuture) == Verdict::Ok);
    CHECK(chain.tip_score(a.header.hash()) == chain.tip_score(b.header.hash()));
    CHECK(chain.best_tip() == a.header.hash());

    // Re-adding a known block is idempotent.
    CHECK(chain.add_block(a, kFarFuture) == Verdict::Ok);
    CHECK(chain.size() == 3);
}

TEST_CASE("weak header for a non-tip block does not affect the best tip") {
    ProtocolParams params = ProtocolParams::toy(6, 3);
    Block genesis = make_genesis(params, kGenesisTs);
    ChainState chain(params, genesis);
    Block a = mine_child(chain, genesis.header.hash(), 1, kGenesisTs + 600);
    std::vector<BlockHeader> stale_weak =
        mine_weak(chain, genesis.header.hash(), 7, kGenesisTs + 300);
    REQUIRE(chain.add_block(a, kFarFuture) == Verdict::Ok);

    Hash256 tip = chain.best_tip();
    Rational score = chain.tip_score(tip);
    for (const auto& w : stale_weak) chain.add_weak_header(w, kFarFuture);
    CHECK(chain.best_tip() == tip);
    CHECK(chain.tip_score(tip) == score);
}

TEST_CASE("duplicate pending weak headers are ignored") {
    ProtocolParams params = ProtocolParams::toy(6, 3);
    Block genesis = make_genesis(params, kGenesisTs);
    ChainState chain(params, genesis);
    std::vector<BlockHeader> weak;
    for (uint8_t tag = 1; weak.empty(); ++tag)
        weak = mine_weak(chain, genesis.header.hash(), tag, kGenesisTs + 600u + tag);
    CHECK(chain.add_weak_header(weak[0], kFarFuture) == Verdict::Ok);
    CHECK(chain.add_weak_header(weak[0], kFarFuture) == Verdict::Ok);
    CHECK(chain.pending_weak(genesis.header.hash())->size() == 1);
}

TEST_CASE("golden toy chain validates as a full node and rejects mutations") {
    json v = load_golden_chain();
    ProtocolParams params = ProtocolParams::toy(v["toy"]["strong_zero_bits"],
                                                v["toy"]["ratio_log2"],
                                                Rational(v["toy"]["gamma"].get<int>()));
    Block genesis = make_genesis(params, v["genesis_timestamp"]);
    ChainState chain(params, genesis);

    std::vector<Block> blocks;
    for (const auto& bj : v["blocks"]) {
        Block b = Block::deserialize(from_hex(bj["serialized"]));
        CHECK(to_hex(b.header.hash()) == bj["hash"].get<std::string>());
        CHECK(b.weak_headers.size() == bj["n_weak"].get<size_t>());
        REQUIRE(chain.add_block(b, kFarFuture) == Verdict::Ok);
        blocks.push_back(b);
    }
    CHECK(chain.main_chain().size() == 4);  // genesis + 3

    const Block& parent = genesis;
    auto recent = chain.recent_timestamps(parent.header.hash());
    const Block& b0 = blocks[0];
    REQUIRE(b0.weak_headers.size() >= 2);

    SUBCASE("nonce flip breaks PoW") {
        Block m = b0;
        m.header.nonce ^= 1;
        CHECK(validate_block(m, parent, params, kFarFuture, recent) == Verdict::PowFail);
    }
    SUBCASE("wrong parent is a linkage error") {
        CHECK(chain.add_block(blocks[1], kFarFuture) == Verdict::Ok);  // idempotent
        Block m = blocks[1];  // points at blocks[0], validated against genesis
        CHECK(validate_block(m, parent, params, kFarFuture, recent) == Verdict::BadLinkage);
    }
    SUBCASE("permuted weak-header order is a binding mismatch") {
        Block m = b0;
        std::swap(m.weak_headers[0], m.weak_headers[1]);
        CHECK(validate_block(m, parent, params, kFarFuture, recent) ==
              Verdict::BindingMismatch);
    }
    SUBCASE("dropped weak header is a binding mismatch") {
        Block m = b0;
        m.weak_headers.pop_back();
        CHECK(validate_block(m, parent, params, kFarFuture, recent) ==
              Verdict::BindingMismatch);
    }
    SUBCASE("extra transaction without reroot is a merkle mismatch") {
        Block m = b0;
        m.transactions.push_back({0xde, 0xad});
        CHECK(validate_block(m, parent, params, kFarFuture, recent) ==
              Verdict::MerkleMismatch);
    }
    SUBCASE("timestamp at or below the ancestor median is rejected") {
        CHECK(validate_block(b0, parent, params, kFarFuture, {b0.header.timestamp}) ==
              Verdict::BadTimestamp);
    }
    SUBCASE("timestamp beyond the receiver's drift window is rejected") {
        uint32_t now = b0.header.timestamp - params.max_future_drift - 1;
        CHECK(validate_block(b0, parent, params, now, recent) == Verdict::BadTimestamp);
    }
    SUBCASE("version mismatch is rejected") {
        ProtocolParams strict = params;
        strict.version = 2;
        CHECK(validate_block(b0, parent, strict, kFarFuture, recent) == Verdict::BadVersion);
    }
    SUBCASE("target bits must match the window target") {
        ProtocolParams easier = params;
        easier.strong_target = params.strong_target * 2;
        easier.weak_target = params.weak_target * 2;
        CHECK(validate_block(b0, parent, easier, kFarFuture, recent) == Verdict::BadTarget);
    }
}

TEST_CASE("rebound mutations surface weak-band and duplicate violations") {
    // Mutating a weak header invalidates the binding commitment first; rebinding
    // and re-grinding the strong nonce isolates the weak-header checks.
    json v = load_golden_chain();
    ProtocolParams params = ProtocolParams::toy(v["toy"]["strong_zero_bits"],
                                                v["toy"]["ratio_log2"],
                                                Rational(v["toy"]["gamma"].get<int>()));
    Block genesis = make_genesis(params, v["genesis_timestamp"]);
    Block b0 = Block::deserialize(from_hex(v["blocks"][0]["serialized"]));
    std::vector<uint32_t> recent = {genesis.header.timestamp};

    auto regrind = [&](Block m) {
        rebind_block(m);
        for (uint64_t nonce = 0;; ++nonce) {
            m.header.nonce = static_cast<uint32_t>(nonce);
            if (classify_hash(m.header.hash(), params) == HashClass::Strong) return m;
        }
    };

    SUBCASE("weak header outside the band") {
        Block m = b0;
        m.weak_headers[0].nonce ^= 0xffff;  // reconstructed hash leaves the weak band
        m = regrind(m);
        CHECK(validate_block(m, genesis, params, kFarFuture, recent) ==
              Verdict::WeakHeaderViolation);
    }
    SUBCASE("duplicated weak header") {
        Block m = b0;
        m.weak_headers.push_back(m.weak_headers[0]);
        m = regrind(m);
        CHECK(validate_block(m, genesis, params, kFarFuture, recent) ==
              Verdict::DuplicateWeakHeader);
    }
}

TEST_CASE("SPV client tracks the full node on the golden chain") {
    json v = load_golden_chain();
    ProtocolParams params = ProtocolParams::toy(v["toy"]["strong_zero_bits"],
                                                v["toy"]["ratio_log2"],
                                                Rational(v["toy"]["gamma"].get<int>()));
    Block genesis = make_genesis(params, v["genesis_timestamp"]);
    ChainState chain(params, genesis);
    SpvClient spv(params, genesis.header);

    Rational cum = chain.genesis().cumulative_pow;
    for (const auto& bj : v["blocks"]) {
        Block b = Block::deserialize(from_hex(bj["serialized"]));
        REQUIRE(chain.add_block(b, kFarFuture) == Verdict::Ok);

        std::vector<Hash256> leaves;
        for (const auto& tx : b.transactions)
            leaves.push_back(dsha256(std::span<const uint8_t>(tx.data(), tx.size())));
        auto r = spv.verify_update(b.header, b.weak_headers, merkle_proof(leaves, 0),
                                   kFarFuture);
        CHECK(r.verdict == Verdict::Ok);
        CHECK(r.pow == block_pow(b, params));
        cum += r.pow;
    }
    CHECK(spv.tip() == chain.best_tip());
    CHECK(spv.height() == 3);
    CHECK(spv.cumulative_pow() == chain.find(chain.best_tip())->cumulative_pow);
    CHECK(spv.cumulative_pow() == cum);
}

TEST_CASE("SPV rejects tampered updates") {
    json v = load_golden_chain();
    ProtocolParams params = ProtocolParams::toy(v["toy"]["strong_zero_bits"],
                                                v["toy"]["ratio_log2"],
                                                Rational(v["toy"]["gamma"].get<int>()));
    Block genesis = make_genesis(params, v["genesis_timestamp"]);
    Block b0 = Block::deserialize(from_hex(v["blocks"][0]["serialized"]));
    std::vector<Hash256> leaves;
    for (const auto& tx : b0.transactions)
        leaves.push_back(dsha256(std::span<const uint8_t>(tx.data(), tx.size())));

    SUBCASE("dropped weak header") {
        SpvClient spv(params, genesis.header);
        auto weak = b0.weak_headers;
        weak.pop_back();
        auto r = spv.verify_update(b0.header, weak, merkle_proof(leaves, 0), kFarFuture);
        CHECK(r.verdict == Verdict::BindingMismatch);
    }
    SUBCASE("proof for a non-first leaf") {
        SpvClient spv(params, genesis.header);
        MerkleProof shifted = merkle_proof(leaves, 0);
        shifted.leaf_index = 1;
        auto r = spv.verify_update(b0.header, b0.weak_headers, shifted, kFarFuture);
        CHECK(r.verdict == Verdict::ProofPathInvalid);
    }
}
