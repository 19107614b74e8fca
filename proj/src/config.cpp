#include "strongchain/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace strongchain {
namespace sim {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(size_t line, const std::string& what) {
    throw ConfigError("line " + std::to_string(line) + ": " + what);
}

double parse_double(size_t line, const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(line, key + ": expected a number, got \"" + v + "\"");
    }
}

uint64_t parse_uint(size_t line, const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        fail(line, key + ": expected a non-negative integer, got \"" + v + "\"");
    }
}

bool parse_flag(size_t line, const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    fail(line, key + ": expected on/off, got \"" + v + "\"");
}

// "constant:SECONDS" or "weibull:MEAN[:SHAPE]"
LatencyModel parse_latency(size_t line, const std::string& v) {
    LatencyModel lm;
    size_t colon = v.find(':');
    if (colon == std::string::npos) fail(line, "latency: expected family:mean");
    std::string family = v.substr(0, colon);
    std::string rest = v.substr(colon + 1);
    if (family == "constant") {
        lm.family = LatencyModel::Family::Constant;
        lm.mean = parse_double(line, "latency", rest);
    } else if (family == "weibull") {
        lm.family = LatencyModel::Family::Weibull;
        size_t colon2 = rest.find(':');
        if (colon2 != std::string::npos) {
            lm.shape = parse_double(line, "latency shape", rest.substr(colon2 + 1));
            rest = rest.substr(0, colon2);
        }
        lm.mean = parse_double(line, "latency", rest);
    } else {
        fail(line, "latency: unknown family \"" + family + "\"");
    }
    return lm;
}

// "ALPHA STRATEGY [THRESHOLD]"
MinerSpec parse_miner(size_t line, const std::string& v) {
    std::istringstream ss(v);
    std::string alpha_s, strat_s, thresh_s;
    ss >> alpha_s >> strat_s;
    if (alpha_s.empty() || strat_s.empty())
        fail(line, "miner: expected \"alpha strategy [threshold]\"");
    MinerSpec spec;
    spec.alpha = parse_double(line, "miner alpha", alpha_s);
    try {
        spec.strategy = strategy_from_name(strat_s);
    } catch (const std::invalid_argument& e) {
        fail(line, e.what());
    }
    if (ss >> thresh_s)
        spec.spiteful_threshold = parse_double(line, "miner threshold", thresh_s);
    return spec;
}

}  // namespace

SimConfig parse_scenario(std::istream& in) {
    SimConfig cfg;
    cfg.miners.clear();
    std::string raw;
    size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (val.empty()) fail(line, key + ": empty value");

        if (key == "name") cfg.name = val;
        else if (key == "seed") cfg.seed = parse_uint(line, key, val);
        else if (key == "ratio") cfg.ratio = parse_double(line, key, val);
        else if (key == "gamma") cfg.gamma = parse_double(line, key, val);
        else if (key == "horizon_blocks") cfg.horizon_blocks = parse_uint(line, key, val);
        else if (key == "block_interval") cfg.block_interval = parse_uint(line, key, val);
        else if (key == "retarget_window") cfg.retarget_window = parse_uint(line, key, val);
        else if (key == "retarget") cfg.retarget_enabled = parse_flag(line, key, val);
        else if (key == "block_reward") cfg.block_reward = parse_double(line, key, val);
        else if (key == "max_future_drift") cfg.max_future_drift = parse_uint(line, key, val);
        else if (key == "median_window") cfg.median_window = parse_uint(line, key, val);
        else if (key == "selfish_withhold_weak")
            cfg.selfish_withhold_weak = parse_flag(line, key, val);
        else if (key == "latency") cfg.latency = parse_latency(line, val);
        else if (key == "miner") cfg.miners.push_back(parse_miner(line, val));
        else fail(line, "unknown key \"" + key + "\"");
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

SimConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    return parse_scenario(in);
}

std::string metrics_csv_header() {
    return "scenario,seed,ratio,gamma,latency_mean,horizon_blocks,"
           "miner,alpha,strategy,strong_found,strong_on_main,weak_found,weak_on_main,"
           "reward,reward_share,fairness,reward_mean,reward_cov,"
           "strong_found_total,main_chain_length,strong_stale_rate,"
           "weak_found_total,weak_included_main,weak_pending_at_horizon,weak_stale_rate,"
           "ts_dev_strong_all,ts_dev_effective_all,ts_dev_strong_adv,ts_dev_effective_adv,"
           "converged,duration_seconds";
}

void write_metrics_csv(std::ostream& out, const SimConfig& cfg, const RunMetrics& m) {
    for (size_t i = 0; i < m.miners.size(); ++i) {
        const MinerMetrics& mm = m.miners[i];
        out << cfg.name << ',' << cfg.seed << ',' << cfg.ratio << ',' << cfg.gamma << ','
            << cfg.latency.mean << ',' << cfg.horizon_blocks << ',' << i << ','
            << mm.alpha << ',' << strategy_name(mm.strategy) << ',' << mm.strong_found << ','
            << mm.strong_on_main << ',' << mm.weak_found << ',' << mm.weak_on_main << ','
            << mm.reward << ',' << mm.reward_share << ',' << mm.fairness << ','
            << mm.reward_mean << ',' << mm.reward_cov << ','
            << m.strong_found_total << ',' << m.main_chain_length << ','
            << m.strong_stale_rate << ',' << m.weak_found_total << ','
            << m.weak_included_main << ',' << m.weak_pending_at_horizon << ','
            << m.weak_stale_rate << ',' << m.ts_dev_strong_all << ','
            << m.ts_dev_effective_all << ',' << m.ts_dev_strong_adv << ','
            << m.ts_dev_effective_adv << ',' << (m.converged ? 1 : 0) << ','
            << m.duration_seconds << '\n';
    }
}

}  // namespace sim
}  // namespace strongchain
