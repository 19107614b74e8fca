#include <chrono>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "strongchain/analytics.hpp"
#include "strongchain/chain.hpp"
#include "strongchain/config.hpp"
#include "strongchain/mining.hpp"
#include "strongchain/presets.hpp"
#include "strongchain/rewards.hpp"
#include "strongchain/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;

int cmd_simulate(const std::string& config_path, uint64_t seed, bool seed_set,
                 const std::string& out_path) {
    strongchain::sim::SimConfig cfg;
    try {
        cfg = strongchain::sim::parse_scenario_file(config_path);
    } catch (const strongchain::sim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (seed_set) cfg.seed = seed;
    strongchain::sim::RunMetrics m = strongchain::sim::run_scenario(cfg);

    std::ostringstream csv;
    csv << strongchain::sim::metrics_csv_header() << '\n';
    strongchain::sim::write_metrics_csv(csv, cfg, m);
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return kExitConfig;
        }
        out << csv.str();
    }
    return kExitOk;
}

int cmd_analyze(const std::vector<double>& alphas, const std::vector<double>& ratios,
                double gamma, bool gamma_set, const std::vector<double>& pool_shares,
                const std::string& out_path) {
    std::ostringstream csv;
    try {
        if (!pool_shares.empty()) {
            csv << "bitcoin_share,equivalent_share,reduction\n";
            for (double s : pool_shares) {
                double e = strongchain::analytics::equivalent_pool_share(s, 1024.0, 10.0);
                csv << s << ',' << e << ',' << s / e << '\n';
            }
        } else {
            csv << "alpha,ratio,gamma,cov_strongchain,cov_bitcoin\n";
            for (double r : ratios) {
                double g = gamma_set ? gamma : std::log2(r);
                for (double a : alphas) {
                    strongchain::analytics::RewardModelInputs in;
                    in.alpha = a;
                    in.ratio = r;
                    in.gamma = g;
                    double sc = strongchain::analytics::coefficient_of_variation(
                        in, strongchain::analytics::Protocol::StrongChain);
                    double bc = strongchain::analytics::coefficient_of_variation(
                        in, strongchain::analytics::Protocol::Bitcoin);
                    csv << a << ',' << r << ',' << g << ',' << sc << ',' << bc << '\n';
                }
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return kExitConfig;
        }
        out << csv.str();
    }
    return kExitOk;
}

int cmd_reproduce(const std::string& preset, const std::string& out_dir, uint64_t seed,
                  bool full) {
    std::vector<std::string> names;
    if (preset == "all") {
        names = strongchain::presets::preset_names();
    } else {
        names.push_back(preset);
    }
    bool all_pass = true;
    for (const std::string& name : names) {
        strongchain::presets::PresetReport rep;
        try {
            rep = strongchain::presets::run_preset(name, out_dir, seed, full);
        } catch (const std::invalid_argument& e) {
            std::cerr << e.what() << "\n";
            return kExitConfig;
        }
        strongchain::presets::print_report(std::cout, rep);
        std::cout << "\n";
        all_pass = all_pass && rep.pass();
    }
    return all_pass ? kExitOk : kExitTolerance;
}

int cmd_demo_mine(unsigned bits, unsigned ratio_log2, double gamma, unsigned blocks) {
    using namespace strongchain;
    ProtocolParams params = ProtocolParams::toy(bits, ratio_log2, Rational(gamma * 1000, 1000));
    uint32_t now = 1700000000;
    Block genesis = make_genesis(params, now);
    ChainState chain(params, genesis);
    RewardLedger ledger;
    Address miner{};
    miner[0] = 0x01;

    for (unsigned i = 0; i < blocks; ++i) {
        const ChainState::Entry* tip = chain.find(chain.best_tip());
        BlockTemplate tmpl;
        tmpl.prev_hash = tip->hash;
        tmpl.coinbase = miner;
        tmpl.timestamp = now + 1;
        GrindResult res = grind_block(tmpl, chain.params_for_child(tip->hash), 1u << 28);
        if (res.status != GrindStatus::Strong) {
            std::cerr << "nonce budget exhausted after " << res.hashes_tried
                      << " hashes at block " << i << "\n";
            return kExitConfig;
        }
        now = tmpl.timestamp;
        Verdict v = chain.add_block(*res.block, now + params.max_future_drift);
        if (v != Verdict::Ok) {
            std::cerr << "mined block rejected: " << verdict_name(v) << "\n";
            return kExitConfig;
        }
        std::vector<RewardEntry> rewards = compute_block_rewards(*res.block, 0, params);
        ledger.apply(rewards);
        uint64_t minted = 0;
        for (const RewardEntry& r : rewards) minted += r.amount;
        std::cout << "block " << (i + 1) << ": hash=" << to_hex(res.block->header.hash())
                  << " weak_headers=" << res.block->weak_headers.size()
                  << " hashes_tried=" << res.hashes_tried << " minted=" << minted
                  << " effective_timestamp=" << std::setprecision(12)
                  << effective_timestamp(*res.block, params) << "\n";
    }
    if (blocks > 0) {
        std::cout << "total minted: " << ledger.total_minted() << " ("
                  << blocks * params.block_reward << " nominal, shortfall "
                  << blocks * params.block_reward - ledger.total_minted()
                  << " from rounding)\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"StrongChain consensus laboratory"};
    app.require_subcommand(1);

    auto* sim_cmd = app.add_subcommand("simulate", "Run one scenario config, emit metrics CSV");
    std::string config_path, out_path, out_dir, preset;
    uint64_t seed = 1;
    bool full = false;
    sim_cmd->add_option("--config", config_path, "scenario file, see docs/config.md")
        ->required();
    auto* sim_seed = sim_cmd->add_option("--seed", seed, "override the scenario seed");
    sim_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* ana_cmd = app.add_subcommand("analyze", "Closed-form CoV curves and pool tables");
    std::vector<double> alphas{0.001, 0.01, 0.1};
    std::vector<double> ratios{2, 64, 1024};
    std::vector<double> pool_shares;
    double gamma = 0;
    ana_cmd->add_option("--alphas", alphas, "hash shares to evaluate");
    ana_cmd->add_option("--ratios", ratios, "T_w/T_s values to evaluate");
    auto* gamma_opt =
        ana_cmd->add_option("--gamma", gamma, "fixed gamma (default log2 of each ratio)");
    ana_cmd->add_option("--pool-shares", pool_shares,
                        "emit equivalent pool shares for these Bitcoin shares instead");
    ana_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* rep_cmd = app.add_subcommand("reproduce", "Run a preset experiment and check it");
    rep_cmd->add_option("preset", preset, "preset name or 'all'")->required();
    rep_cmd->add_option("--out", out_dir, "directory for raw CSV output");
    rep_cmd->add_option("--seed", seed, "base seed");
    rep_cmd->add_flag("--full", full, "raise simulation scale");

    auto* mine_cmd = app.add_subcommand("demo-mine", "Grind a toy chain with real hashing");
    unsigned bits = 12, ratio_log2 = 4, blocks = 3;
    double mine_gamma = 0.0;
    mine_cmd->add_option("--bits", bits, "strong-target difficulty bits below T_max");
    mine_cmd->add_option("--ratio-log2", ratio_log2, "log2 of T_w/T_s");
    mine_cmd->add_option("--gamma", mine_gamma, "weak reward weight");
    mine_cmd->add_option("--blocks", blocks, "number of strong blocks to mine");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (sim_cmd->parsed())
        return cmd_simulate(config_path, seed, sim_seed->count() > 0, out_path);
    if (ana_cmd->parsed())
        return cmd_analyze(alphas, ratios, gamma, gamma_opt->count() > 0, pool_shares,
                           out_path);
    if (rep_cmd->parsed()) return cmd_reproduce(preset, out_dir, seed, full);
    if (mine_cmd->parsed()) return cmd_demo_mine(bits, ratio_log2, mine_gamma, blocks);
    return kExitUsage;
}
