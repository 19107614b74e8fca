#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <sstream>

#include "strongchain/analytics.hpp"
#include "strongchain/chain.hpp"
#include "strongchain/config.hpp"
#include "strongchain/mining.hpp"
#include "strongchain/presets.hpp"
#include "strongchain/rewards.hpp"
#include "strongchain/sim.hpp"
#include "strongchain/spv.hpp"

namespace py = pybind11;
using namespace strongchain;

namespace {

// Big integers cross the boundary as Python ints via decimal strings.
py::int_ u256_to_py(const U256& v) {
    std::ostringstream os;
    os << v;
    return py::reinterpret_steal<py::int_>(
        PyLong_FromString(os.str().c_str(), nullptr, 10));
}

U256 u256_from_py(const py::int_& v) {
    return U256(py::cast<std::string>(py::repr(v)));
}

template <size_t N>
py::bytes arr_to_bytes(const std::array<uint8_t, N>& a) {
    return py::bytes(reinterpret_cast<const char*>(a.data()), N);
}

template <size_t N>
std::array<uint8_t, N> arr_from_bytes(const py::bytes& b) {
    std::string s = b;
    if (s.size() != N)
        throw py::value_error("expected " + std::to_string(N) + " bytes, got " +
                              std::to_string(s.size()));
    std::array<uint8_t, N> out;
    std::memcpy(out.data(), s.data(), N);
    return out;
}

Bytes bytes_from_py(const py::bytes& b) {
    std::string s = b;
    return Bytes(s.begin(), s.end());
}

py::bytes bytes_to_py(const Bytes& b) {
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

// Property helpers for Hash256/Address members.
template <typename C, size_t N>
void def_arr_prop(py::class_<C>& cls, const char* name,
                  std::array<uint8_t, N> C::* member) {
    cls.def_property(
        name, [member](const C& c) { return arr_to_bytes<N>(c.*member); },
        [member](C& c, const py::bytes& b) { c.*member = arr_from_bytes<N>(b); });
}

}  // namespace

PYBIND11_MODULE(_strongchain, m) {
    m.doc() = "StrongChain consensus laboratory: protocol core, analytics, simulator";

    py::register_exception<DecompressionMismatch>(m, "DecompressionMismatch");
    py::register_exception<sim::ConfigError>(m, "ConfigError");

    // ---- parameters ----
    py::class_<ProtocolParams> params_cls(m, "ProtocolParams");
    params_cls.def(py::init<>())
        .def_static(
            "toy",
            [](unsigned strong_zero_bits, unsigned ratio_log2, double gamma) {
                return ProtocolParams::toy(strong_zero_bits, ratio_log2, Rational(gamma));
            },
            py::arg("strong_zero_bits"), py::arg("ratio_log2"), py::arg("gamma") = 0.0)
        .def_property(
            "strong_target",
            [](const ProtocolParams& p) { return u256_to_py(p.strong_target); },
            [](ProtocolParams& p, const py::int_& v) { p.strong_target = u256_from_py(v); })
        .def_property(
            "weak_target",
            [](const ProtocolParams& p) { return u256_to_py(p.weak_target); },
            [](ProtocolParams& p, const py::int_& v) { p.weak_target = u256_from_py(v); })
        .def_property(
            "max_target",
            [](const ProtocolParams& p) { return u256_to_py(p.max_target); },
            [](ProtocolParams& p, const py::int_& v) { p.max_target = u256_from_py(v); })
        .def_property(
            "gamma",
            [](const ProtocolParams& p) { return static_cast<double>(p.gamma); },
            [](ProtocolParams& p, double g) { p.gamma = Rational(g); })
        .def_readwrite("block_reward", &ProtocolParams::block_reward)
        .def_readwrite("target_block_interval", &ProtocolParams::target_block_interval)
        .def_readwrite("retarget_window", &ProtocolParams::retarget_window)
        .def_readwrite("max_future_drift", &ProtocolParams::max_future_drift)
        .def_readwrite("median_window", &ProtocolParams::median_window)
        .def_readwrite("version", &ProtocolParams::version)
        .def("ratio", [](const ProtocolParams& p) { return static_cast<double>(p.ratio()); })
        .def("scaling_c",
             [](const ProtocolParams& p) { return static_cast<double>(p.scaling_c()); })
        .def("validate", &ProtocolParams::validate);

    m.def("classify_hash", [](const py::bytes& h, const ProtocolParams& p) {
        switch (classify_hash(arr_from_bytes<32>(h), p)) {
            case HashClass::Strong: return "strong";
            case HashClass::Weak: return "weak";
            default: return "none";
        }
    });

    // ---- headers and blocks ----
    py::class_<BlockHeader> hdr_cls(m, "BlockHeader");
    hdr_cls.def(py::init<>())
        .def_readwrite("version", &BlockHeader::version)
        .def_readwrite("timestamp", &BlockHeader::timestamp)
        .def_readwrite("target_bits", &BlockHeader::target_bits)
        .def_readwrite("nonce", &BlockHeader::nonce)
        .def("serialize", [](const BlockHeader& h) { return bytes_to_py(h.serialize()); })
        .def_static("deserialize",
                    [](const py::bytes& b) { return BlockHeader::deserialize(bytes_from_py(b)); })
        .def("hash", [](const BlockHeader& h) { return arr_to_bytes<32>(h.hash()); })
        .def(py::self == py::self);
    def_arr_prop(hdr_cls, "prev_hash", &BlockHeader::prev_hash);
    def_arr_prop(hdr_cls, "tx_root", &BlockHeader::tx_root);
    def_arr_prop(hdr_cls, "coinbase", &BlockHeader::coinbase);

    py::class_<CompressedWeakHeader> weak_cls(m, "CompressedWeakHeader");
    weak_cls.def(py::init<>())
        .def_readwrite("timestamp", &CompressedWeakHeader::timestamp)
        .def_readwrite("nonce", &CompressedWeakHeader::nonce)
        .def("serialize",
             [](const CompressedWeakHeader& h) { return bytes_to_py(h.serialize()); })
        .def_static("deserialize",
                    [](const py::bytes& b) {
                        return CompressedWeakHeader::deserialize(bytes_from_py(b));
                    })
        .def("decompress", &CompressedWeakHeader::decompress)
        .def_static("compress", &CompressedWeakHeader::compress)
        .def(py::self == py::self);
    def_arr_prop(weak_cls, "tx_root", &CompressedWeakHeader::tx_root);
    def_arr_prop(weak_cls, "coinbase", &CompressedWeakHeader::coinbase);

    py::class_<Block>(m, "Block")
        .def(py::init<>())
        .def_readwrite("header", &Block::header)
        .def_readwrite("weak_headers", &Block::weak_headers)
        .def_property(
            "transactions",
            [](const Block& b) {
                py::list out;
                for (const Bytes& tx : b.transactions) out.append(bytes_to_py(tx));
                return out;
            },
            [](Block& b, const py::list& txs) {
                b.transactions.clear();
                for (const auto& tx : txs)
                    b.transactions.push_back(bytes_from_py(py::cast<py::bytes>(tx)));
            })
        .def("serialize", [](const Block& b) { return bytes_to_py(b.serialize()); })
        .def_static("deserialize",
                    [](const py::bytes& b) { return Block::deserialize(bytes_from_py(b)); })
        .def(py::self == py::self);

    m.def("binding_commitment",
          [](const std::vector<CompressedWeakHeader>& weak, const BlockHeader& ctx,
             const ProtocolParams& p) {
              return arr_to_bytes<32>(binding_commitment(weak, ctx, p));
          });
    m.def("make_binding_transaction", [](const py::bytes& commitment) {
        return bytes_to_py(make_binding_transaction(arr_from_bytes<32>(commitment)));
    });
    m.def("rebind_block", &rebind_block);
    m.def("block_pow", [](const Block& b, const ProtocolParams& p) {
        return static_cast<double>(block_pow(b, p));
    });
    m.def("effective_timestamp",
          py::overload_cast<const Block&, const ProtocolParams&>(&effective_timestamp));

    // ---- validation ----
    py::enum_<Verdict>(m, "Verdict")
        .value("Ok", Verdict::Ok)
        .value("PowFail", Verdict::PowFail)
        .value("BadLinkage", Verdict::BadLinkage)
        .value("BadTarget", Verdict::BadTarget)
        .value("BadTimestamp", Verdict::BadTimestamp)
        .value("BadVersion", Verdict::BadVersion)
        .value("BindingMismatch", Verdict::BindingMismatch)
        .value("MerkleMismatch", Verdict::MerkleMismatch)
        .value("WeakHeaderViolation", Verdict::WeakHeaderViolation)
        .value("DuplicateWeakHeader", Verdict::DuplicateWeakHeader)
        .value("ProofPathInvalid", Verdict::ProofPathInvalid);
    m.def("verdict_name", &verdict_name);
    m.def("validate_block", &validate_block, py::arg("block"), py::arg("parent"),
          py::arg("params"), py::arg("now"), py::arg("recent_timestamps"));
    m.def("median_timestamp", &median_timestamp);
    m.def("retarget",
          [](uint32_t first_ts, uint32_t last_ts, const py::int_& old_strong,
             const py::int_& old_weak, const ProtocolParams& p) {
              RetargetResult r = retarget(first_ts, last_ts, u256_from_py(old_strong),
                                          u256_from_py(old_weak), p);
              return py::make_tuple(u256_to_py(r.strong_target), u256_to_py(r.weak_target));
          });

    // ---- chain ----
    m.def("make_genesis", &make_genesis);
    py::class_<ChainState>(m, "ChainState")
        .def(py::init<ProtocolParams, Block>())
        .def("add_block", &ChainState::add_block)
        .def("add_weak_header", &ChainState::add_weak_header)
        .def("best_tip", [](const ChainState& c) { return arr_to_bytes<32>(c.best_tip()); })
        .def("size", &ChainState::size)
        .def("height",
             [](const ChainState& c) { return c.find(c.best_tip())->height; })
        .def("tip_score",
             [](const ChainState& c, const py::bytes& tip) {
                 return static_cast<double>(c.tip_score(arr_from_bytes<32>(tip)));
             })
        .def("block_at",
             [](const ChainState& c, const py::bytes& h) -> py::object {
                 const ChainState::Entry* e = c.find(arr_from_bytes<32>(h));
                 if (!e) return py::none();
                 return py::cast(e->block);
             })
        .def("params_for_child",
             [](const ChainState& c, const py::bytes& parent) {
                 return c.params_for_child(arr_from_bytes<32>(parent));
             })
        .def("recent_timestamps",
             [](const ChainState& c, const py::bytes& parent) {
                 return c.recent_timestamps(arr_from_bytes<32>(parent));
             })
        .def("main_chain", [](const ChainState& c) {
            py::list out;
            for (const Hash256& h : c.main_chain()) out.append(arr_to_bytes<32>(h));
            return out;
        });

    // ---- rewards ----
    m.def("compute_block_rewards",
          [](const Block& b, uint64_t fees, const ProtocolParams& p) {
              py::list out;
              for (const RewardEntry& e : compute_block_rewards(b, fees, p)) {
                  const char* kind = e.kind == RewardKind::Strong ? "strong"
                                     : e.kind == RewardKind::Weak ? "weak"
                                                                  : "fee";
                  out.append(py::make_tuple(arr_to_bytes<20>(e.address), e.amount, kind));
              }
              return out;
          },
          py::arg("block"), py::arg("fees") = 0, py::arg("params"));
    m.def("strong_reward_amount", &strong_reward_amount);
    m.def("weak_reward_amount", &weak_reward_amount);

    // ---- mining ----
    py::class_<BlockTemplate> tmpl_cls(m, "BlockTemplate");
    tmpl_cls.def(py::init<>())
        .def_readwrite("timestamp", &BlockTemplate::timestamp);
    def_arr_prop(tmpl_cls, "prev_hash", &BlockTemplate::prev_hash);
    def_arr_prop(tmpl_cls, "coinbase", &BlockTemplate::coinbase);

    py::class_<GrindResult>(m, "GrindResult")
        .def_property_readonly(
            "status",
            [](const GrindResult& r) {
                return r.status == GrindStatus::Strong ? "strong" : "exhausted";
            })
        .def_property_readonly(
            "block",
            [](const GrindResult& r) -> py::object {
                if (!r.block) return py::none();
                return py::cast(*r.block);
            })
        .def_readonly("weak_headers", &GrindResult::weak_headers)
        .def_readonly("hashes_tried", &GrindResult::hashes_tried);
    m.def("grind_block", &grind_block, py::arg("template"), py::arg("params"),
          py::arg("nonce_budget"));

    // ---- SPV ----
    py::class_<MerkleProof>(m, "MerkleProof")
        .def(py::init<>())
        .def_readwrite("leaf_index", &MerkleProof::leaf_index)
        .def_property(
            "siblings",
            [](const MerkleProof& p) {
                py::list out;
                for (const Hash256& h : p.siblings) out.append(arr_to_bytes<32>(h));
                return out;
            },
            [](MerkleProof& p, const py::list& sibs) {
                p.siblings.clear();
                for (const auto& s : sibs)
                    p.siblings.push_back(arr_from_bytes<32>(py::cast<py::bytes>(s)));
            });
    m.def("merkle_proof", [](const py::list& leaves, uint64_t index) {
        std::vector<Hash256> v;
        for (const auto& l : leaves) v.push_back(arr_from_bytes<32>(py::cast<py::bytes>(l)));
        return merkle_proof(v, index);
    });
    m.def("dsha256", [](const py::bytes& data) {
        Bytes b = bytes_from_py(data);
        return arr_to_bytes<32>(dsha256(b));
    });

    py::class_<SpvClient>(m, "SpvClient")
        .def(py::init<ProtocolParams, BlockHeader>())
        .def("verify_update",
             [](SpvClient& c, const BlockHeader& strong,
                const std::vector<CompressedWeakHeader>& weak, const MerkleProof& proof,
                uint32_t now) {
                 SpvClient::UpdateResult r = c.verify_update(strong, weak, proof, now);
                 return py::make_tuple(r.verdict, static_cast<double>(r.pow));
             })
        .def("tip", [](const SpvClient& c) { return arr_to_bytes<32>(c.tip()); })
        .def("height", &SpvClient::height)
        .def("cumulative_pow", [](const SpvClient& c) {
            return static_cast<double>(c.cumulative_pow());
        });

    // ---- analytics ----
    auto ana = m.def_submodule("analytics", "Closed-form reward and variance models");
    ana.def("scaling_constant",
            py::overload_cast<double, double>(&analytics::scaling_constant),
            py::arg("ratio"), py::arg("gamma"));
    ana.def(
        "coefficient_of_variation",
        [](double alpha, double ratio, double gamma, const std::string& protocol,
           double block_reward, double fee_mean, double fee_var) {
            analytics::RewardModelInputs in;
            in.alpha = alpha;
            in.ratio = ratio;
            in.gamma = gamma;
            in.block_reward = block_reward;
            in.fee_mean = fee_mean;
            in.fee_var = fee_var;
            analytics::Protocol p = protocol == "bitcoin" ? analytics::Protocol::Bitcoin
                                                          : analytics::Protocol::StrongChain;
            return analytics::coefficient_of_variation(in, p);
        },
        py::arg("alpha"), py::arg("ratio"), py::arg("gamma"),
        py::arg("protocol") = "strongchain", py::arg("block_reward") = 12.5,
        py::arg("fee_mean") = 0.0, py::arg("fee_var") = 0.0);
    ana.def("equivalent_pool_share", &analytics::equivalent_pool_share,
            py::arg("bitcoin_share"), py::arg("ratio") = 1024.0, py::arg("gamma") = 10.0);
    ana.def("weak_count_tail", &analytics::weak_count_tail);
    ana.def("weak_count_moments", [](double alpha, double ratio) {
        analytics::WeakCountMoments w = analytics::weak_count_moments(alpha, ratio);
        return py::make_tuple(w.mean, w.variance);
    });

    // ---- simulator ----
    auto s = m.def_submodule("sim", "Deterministic adversarial network simulator");
    py::class_<sim::SimConfig>(s, "SimConfig")
        .def(py::init<>())
        .def_readwrite("name", &sim::SimConfig::name)
        .def_readwrite("ratio", &sim::SimConfig::ratio)
        .def_readwrite("gamma", &sim::SimConfig::gamma)
        .def_readwrite("horizon_blocks", &sim::SimConfig::horizon_blocks)
        .def_readwrite("seed", &sim::SimConfig::seed)
        .def_readwrite("block_interval", &sim::SimConfig::block_interval)
        .def_readwrite("retarget_window", &sim::SimConfig::retarget_window)
        .def_readwrite("retarget_enabled", &sim::SimConfig::retarget_enabled)
        .def_readwrite("block_reward", &sim::SimConfig::block_reward)
        .def("add_miner",
             [](sim::SimConfig& c, double alpha, const std::string& strategy,
                double threshold) {
                 sim::MinerSpec spec;
                 spec.alpha = alpha;
                 spec.strategy = sim::strategy_from_name(strategy);
                 spec.spiteful_threshold = threshold;
                 c.miners.push_back(spec);
             },
             py::arg("alpha"), py::arg("strategy") = "honest", py::arg("threshold") = 1.0)
        .def("set_latency",
             [](sim::SimConfig& c, const std::string& family, double mean, double shape) {
                 c.latency.family = family == "weibull"
                                        ? sim::LatencyModel::Family::Weibull
                                        : sim::LatencyModel::Family::Constant;
                 c.latency.mean = mean;
                 c.latency.shape = shape;
             },
             py::arg("family"), py::arg("mean"), py::arg("shape") = 0.6)
        .def("validate", &sim::SimConfig::validate);

    py::class_<sim::MinerMetrics>(s, "MinerMetrics")
        .def_readonly("alpha", &sim::MinerMetrics::alpha)
        .def_property_readonly(
            "strategy",
            [](const sim::MinerMetrics& m) { return sim::strategy_name(m.strategy); })
        .def_readonly("strong_found", &sim::MinerMetrics::strong_found)
        .def_readonly("strong_on_main", &sim::MinerMetrics::strong_on_main)
        .def_readonly("weak_found", &sim::MinerMetrics::weak_found)
        .def_readonly("weak_on_main", &sim::MinerMetrics::weak_on_main)
        .def_readonly("reward", &sim::MinerMetrics::reward)
        .def_readonly("reward_share", &sim::MinerMetrics::reward_share)
        .def_readonly("fairness", &sim::MinerMetrics::fairness)
        .def_readonly("reward_mean", &sim::MinerMetrics::reward_mean)
        .def_readonly("reward_cov", &sim::MinerMetrics::reward_cov);

    py::class_<sim::RunMetrics>(s, "RunMetrics")
        .def_readonly("miners", &sim::RunMetrics::miners)
        .def_readonly("strong_found_total", &sim::RunMetrics::strong_found_total)
        .def_readonly("main_chain_length", &sim::RunMetrics::main_chain_length)
        .def_readonly("weak_found_total", &sim::RunMetrics::weak_found_total)
        .def_readonly("weak_included_main", &sim::RunMetrics::weak_included_main)
        .def_readonly("weak_pending_at_horizon", &sim::RunMetrics::weak_pending_at_horizon)
        .def_readonly("strong_stale_rate", &sim::RunMetrics::strong_stale_rate)
        .def_readonly("weak_stale_rate", &sim::RunMetrics::weak_stale_rate)
        .def_readonly("converged", &sim::RunMetrics::converged)
        .def_readonly("duration_seconds", &sim::RunMetrics::duration_seconds)
        .def_readonly("ts_dev_strong_all", &sim::RunMetrics::ts_dev_strong_all)
        .def_readonly("ts_dev_effective_all", &sim::RunMetrics::ts_dev_effective_all)
        .def_readonly("ts_dev_strong_adv", &sim::RunMetrics::ts_dev_strong_adv)
        .def_readonly("ts_dev_effective_adv", &sim::RunMetrics::ts_dev_effective_adv);

    s.def("run_scenario", &sim::run_scenario, py::call_guard<py::gil_scoped_release>());
    s.def("parse_scenario", [](const std::string& text) {
        std::istringstream in(text);
        return sim::parse_scenario(in);
    });

    // ---- reproduction presets ----
    auto pre = m.def_submodule("presets", "Reference experiments with tolerance checks");
    py::class_<presets::CheckResult>(pre, "CheckResult")
        .def_readonly("name", &presets::CheckResult::name)
        .def_readonly("value", &presets::CheckResult::value)
        .def_readonly("reference", &presets::CheckResult::reference)
        .def_readonly("tolerance", &presets::CheckResult::tolerance)
        .def_readonly("pass_", &presets::CheckResult::pass)
        .def_readonly("detail", &presets::CheckResult::detail);
    py::class_<presets::PresetReport>(pre, "PresetReport")
        .def_readonly("preset", &presets::PresetReport::preset)
        .def_readonly("checks", &presets::PresetReport::checks)
        .def("ok", &presets::PresetReport::pass);
    pre.def("preset_names", &presets::preset_names);
    pre.def("run_preset", &presets::run_preset, py::arg("name"), py::arg("out_dir") = "",
            py::arg("seed_base") = 1, py::arg("full") = false,
            py::call_guard<py::gil_scoped_release>());
}
