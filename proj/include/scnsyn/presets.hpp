#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "kinetics.hpp"

namespace scnsyn::presets {

// Named device configurations shipped with the library. The JSON files under
// configs/ are the same values serialized with to_json(RunConfig).
//
// Inhibitory (n-type ScN): hole capture lowers the mobility. Pool time
// constants are ~0.1 s, 100 s and 3000 s at 300 K; at 80 K the first two
// become ~25 s and ~200 s.
//
// Excitatory (Mg-doped ScN): trapped holes release free carriers. Pool time
// constants are ~0.1 s, 100 s and ~1e5 s at 300 K, the slowest with a 30 meV
// barrier.

inline RunConfig scn_inhibitory_default() {
    RunConfig rc;
    rc.name = "scn-inhibitory-default";
    auto& d = rc.device;
    d.label = "n-type ScN";
    d.polarity = Polarity::Inhibitory;
    d.n0 = 3e20;
    d.mu0 = 67.0;
    d.length = 0.72;
    d.width = 0.17;
    d.thickness = 2.5e-5;
    d.read_voltage = 0.02;
    d.pools = {
        {0.1, 0.2, 0.01338, 52.0, 0.2},
        {1.0, 0.0005, 77.77, 6.5, 0.02},
        {1.0, 0.0001, 940.0, 30.0, 0.02},
    };
    rc.stimulus = PulseTrain({{60.0, 1800.0, 40.0}});
    rc.environment = {300.0, 1.0, 3600.0};
    rc.protocol.settings.learning_threshold_relative = 0.025;
    rc.protocol.gate.gate = Gate::NOR;
    return rc;
}

inline RunConfig scn_mg_excitatory_default() {
    RunConfig rc;
    rc.name = "scn-mg-excitatory-default";
    auto& d = rc.device;
    d.label = "Mg-doped ScN";
    d.polarity = Polarity::Excitatory;
    d.n0 = 2e17;
    d.mu0 = 0.2;
    d.length = 0.61;
    d.width = 0.23;
    d.thickness = 2e-5;
    d.read_voltage = 1.0;
    d.pools = {
        {0.1, 0.2, 0.01754, 45.0, 0.5},
        {1.0, 0.0008, 55.98, 15.0, 0.1},
        {1.0, 0.00005, 3.13e4, 30.0, 0.1},
    };
    rc.stimulus = PulseTrain({{60.0, 1800.0, 40.0}});
    rc.environment = {300.0, 1.0, 3600.0};
    rc.protocol.settings.learning_threshold_relative = 0.095;
    rc.protocol.gate.gate = Gate::OR;
    return rc;
}

inline std::vector<std::string> names() { return {"scn-inhibitory-default", "scn-mg-excitatory-default"}; }

inline bool is_preset(const std::string& name) {
    for (const auto& n : names())
        if (n == name) return true;
    return false;
}

inline RunConfig get(const std::string& name) {
    if (name == "scn-inhibitory-default") return scn_inhibitory_default();
    if (name == "scn-mg-excitatory-default") return scn_mg_excitatory_default();
    throw InputError("unknown preset '" + name + "'");
}

} // namespace scnsyn::presets

namespace scnsyn {

// A readable file path wins over a preset of the same name.
inline RunConfig load_run_config(const std::string& path_or_name) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(path_or_name, ec)) return load_run_config_file(path_or_name);
    if (presets::is_preset(path_or_name)) return presets::get(path_or_name);
    throw InputError("'" + path_or_name + "' is neither a readable config file nor a preset name");
}

} // namespace scnsyn
