#ifndef STRONGCHAIN_CONFIG_HPP
#define STRONGCHAIN_CONFIG_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "strongchain/sim.hpp"

namespace strongchain {
namespace sim {

// Malformed scenario text; the message carries the line number and field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Line-oriented key = value scenario format; see docs/config.md.
SimConfig parse_scenario(std::istream& in);
SimConfig parse_scenario_file(const std::string& path);

// One CSV row per miner, run-level columns repeated; see docs/metrics.md.
std::string metrics_csv_header();
void write_metrics_csv(std::ostream& out, const SimConfig& cfg, const RunMetrics& m);

}  // namespace sim
}  // namespace strongchain

#endif
