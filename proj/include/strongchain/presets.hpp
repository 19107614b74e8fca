#ifndef STRONGCHAIN_PRESETS_HPP
#define STRONGCHAIN_PRESETS_HPP

#include <string>
#include <vector>

namespace strongchain {
namespace presets {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;  // meaning depends on the check; see detail
    bool pass = false;
    std::string detail;
};

struct PresetReport {
    std::string preset;
    std::vector<CheckResult> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

std::vector<std::string> preset_names();

// Runs the named preset experiment and compares against its reference values.
// If out_dir is nonempty, raw per-run CSV goes to <out_dir>/<preset>.csv.
// full raises simulation scale (more seeds, longer horizons).
// Throws std::invalid_argument for an unknown preset name.
PresetReport run_preset(const std::string& name, const std::string& out_dir,
                        uint64_t seed_base, bool full);

void print_report(std::ostream& out, const PresetReport& report);

}  // namespace presets
}  // namespace strongchain

#endif
