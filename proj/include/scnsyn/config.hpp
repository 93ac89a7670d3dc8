#pragma once

// Run configuration files (JSON, schema_version 1).
//
//   {
//     "schema_version": 1,
//     "name": "...",
//     "device":      { "label", "polarity", "n0", "mu0", "length", "width", "thickness",
//                      "read_voltage", "temperature_ref", "pools": [ { "capacity", "fill_coeff",
//                      "tau0", "activation_meV", "coupling" } ] },
//     "stimulus":    { "pulses": [ { "start", "duration", "intensity" } ] }
//                  | { "uniform": { "count", "width", "period", "intensity", "start" } },
//     "environment": { "temperature", "sample_dt", "t_end" },
//     "output":      { "directory", "format" },
//     "protocol":    { ProtocolSettings fields except temperature, plus "sweep", "frequencies",
//                      "ppf_frequency", "ppf_pulses", "stdp_delta_ts", "gate" },
//     "seed": 0,
//     "noise_relative": 0
//   }
//
// Every section is optional except "device". Unknown keys are rejected at
// every level. Geometry is in cm, intensity in mW/cm^2, times in s.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "kinetics.hpp"
#include "protocols.hpp"

namespace scnsyn {

inline constexpr int config_schema_version = 1;

enum class OutputFormat { Csv, Json, Both };

inline const char* to_string(OutputFormat f) {
    switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
    }
    return "?";
}

inline OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "both") return OutputFormat::Both;
    throw InputError("unknown output format '" + s + "' (expected csv|json|both)");
}

struct EnvironmentConfig {
    double temperature = 300.0; // K
    double sample_dt = 1.0;     // s, for plain simulation
    double t_end = 0.0;         // s; 0 means stimulus end + 600 s
};

struct OutputConfig {
    std::string directory = "out";
    OutputFormat format = OutputFormat::Both;
};

struct SweepConfig {
    StimulusAxis axis = StimulusAxis::Number;
    std::vector<double> values{1, 5, 10, 20};
};

struct GateConfig {
    Gate gate = Gate::OR;
    std::optional<double> threshold;
};

struct ProtocolConfig {
    ProtocolSettings settings;
    SweepConfig sweep;
    std::vector<double> frequencies{0.05, 0.2, 0.5, 1.0, 2.0};
    double ppf_frequency = 2.0;
    int ppf_pulses = 20;
    std::vector<double> stdp_delta_ts{-10, -5, -2, -1, 0, 1, 2, 5, 10};
    GateConfig gate;
};

struct RunConfig {
    std::string name;
    DeviceParams device;
    PulseTrain stimulus;
    EnvironmentConfig environment;
    OutputConfig output;
    ProtocolConfig protocol;
    std::uint64_t seed = 0;
    double noise_relative = 0.0; // Gaussian noise on simulated current, relative to |I_dark|

    double t_end() const {
        return environment.t_end > 0.0 ? environment.t_end : stimulus.end_time() + 600.0;
    }

    // Protocol settings with the environment temperature applied.
    ProtocolSettings settings() const {
        ProtocolSettings s = protocol.settings;
        s.temperature = environment.temperature;
        return s;
    }

    void validate() const {
        device.validate();
        if (!(environment.temperature > 0.0)) throw DomainError("environment.temperature must be > 0 K");
        if (!(environment.sample_dt > 0.0)) throw DomainError("environment.sample_dt must be > 0");
        if (environment.t_end < 0.0) throw DomainError("environment.t_end must be >= 0");
        if (environment.t_end > 0.0 && environment.t_end < stimulus.end_time())
            throw InputError("environment.t_end ends before the stimulus");
        if (!(noise_relative >= 0.0)) throw DomainError("noise_relative must be >= 0");
        settings().validate();
        if (protocol.ppf_pulses < 2) throw InputError("protocol.ppf_pulses must be >= 2");
        if (!(protocol.ppf_frequency > 0.0)) throw InputError("protocol.ppf_frequency must be > 0");
        if (protocol.gate.threshold && !std::isfinite(*protocol.gate.threshold))
            throw InputError("protocol.gate.threshold must be finite");
    }
};

namespace config_detail {

using nlohmann::json;

// Reads keys from one JSON object and rejects any it did not consume.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw InputError(path_ + ": expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    template <class T>
    void get(const std::string& key, T& out) {
        if (!j_.contains(key)) return;
        seen_.insert(key);
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw InputError(path_ + "." + key + ": wrong type");
        }
    }

    template <class T>
    T require(const std::string& key) {
        if (!j_.contains(key)) throw InputError(path_ + "." + key + ": required");
        T v{};
        get(key, v);
        return v;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw InputError(path_ + ": unknown key '" + it.key() + "'");
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline DeviceParams parse_device(const json& j) {
    Section s(j, "device");
    DeviceParams d;
    s.get("label", d.label);
    d.polarity = polarity_from_string(s.require<std::string>("polarity"));
    d.n0 = s.require<double>("n0");
    d.mu0 = s.require<double>("mu0");
    d.length = s.require<double>("length");
    d.width = s.require<double>("width");
    d.thickness = s.require<double>("thickness");
    d.read_voltage = s.require<double>("read_voltage");
    s.get("temperature_ref", d.temperature_ref);
    if (!s.has("pools")) throw InputError("device.pools: required");
    const auto& pools = s.raw("pools");
    if (!pools.is_array()) throw InputError("device.pools: expected an array");
    for (std::size_t i = 0; i < pools.size(); ++i) {
        Section p(pools[i], "device.pools[" + std::to_string(i) + "]");
        TrapPool tp;
        tp.capacity = p.require<double>("capacity");
        tp.fill_coeff = p.require<double>("fill_coeff");
        tp.tau0 = p.require<double>("tau0");
        tp.activation_meV = p.require<double>("activation_meV");
        tp.coupling = p.require<double>("coupling");
        p.finish();
        d.pools.push_back(tp);
    }
    s.finish();
    return d;
}

inline PulseTrain parse_stimulus(const json& j) {
    Section s(j, "stimulus");
    if (s.has("pulses") && s.has("uniform")) throw InputError("stimulus: give either 'pulses' or 'uniform'");
    PulseTrain train;
    if (s.has("pulses")) {
        const auto& arr = s.raw("pulses");
        if (!arr.is_array()) throw InputError("stimulus.pulses: expected an array");
        std::vector<Pulse> ps;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section p(arr[i], "stimulus.pulses[" + std::to_string(i) + "]");
            Pulse pu;
            pu.start = p.require<double>("start");
            pu.duration = p.require<double>("duration");
            p.get("intensity", pu.intensity);
            p.finish();
            ps.push_back(pu);
        }
        train = PulseTrain(std::move(ps));
    } else if (s.has("uniform")) {
        Section u(s.raw("uniform"), "stimulus.uniform");
        const int count = u.require<int>("count");
        const double width = u.require<double>("width");
        double period = width;
        double intensity = 40.0;
        double start = 0.0;
        u.get("period", period);
        u.get("intensity", intensity);
        u.get("start", start);
        u.finish();
        train = PulseTrain::uniform(count, width, period, intensity, start);
    }
    s.finish();
    return train;
}

inline void parse_protocol(const json& j, ProtocolConfig& pc) {
    Section s(j, "protocol");
    auto& st = pc.settings;
    s.get("intensity", st.intensity);
    s.get("pulse_width", st.pulse_width);
    s.get("pulse_period", st.pulse_period);
    s.get("base_pulse_count", st.base_pulse_count);
    s.get("freq_pulse_width", st.freq_pulse_width);
    s.get("freq_pulse_count", st.freq_pulse_count);
    s.get("lead_in", st.lead_in);
    s.get("sample_dt", st.sample_dt);
    s.get("retention_fraction", st.retention_fraction);
    s.get("ltm_threshold", st.ltm_threshold);
    s.get("retention_horizon", st.retention_horizon);
    s.get("measure_delay", st.measure_delay);
    s.get("max_learning_pulses", st.max_learning_pulses);
    s.get("max_forgetting_samples", st.max_forgetting_samples);
    s.get("learning_threshold_relative", st.learning_threshold_relative);
    s.get("learning_cycles", st.learning_cycles);
    s.get("learning_rest", st.learning_rest);
    if (s.has("sweep")) {
        Section sw(s.raw("sweep"), "protocol.sweep");
        pc.sweep.axis = stimulus_axis_from_string(sw.require<std::string>("axis"));
        pc.sweep.values = sw.require<std::vector<double>>("values");
        sw.finish();
    }
    s.get("frequencies", pc.frequencies);
    s.get("ppf_frequency", pc.ppf_frequency);
    s.get("ppf_pulses", pc.ppf_pulses);
    s.get("stdp_delta_ts", pc.stdp_delta_ts);
    if (s.has("gate")) {
        Section g(s.raw("gate"), "protocol.gate");
        pc.gate.gate = gate_from_string(g.require<std::string>("type"));
        if (g.has("threshold")) {
            const auto& t = g.raw("threshold");
            if (t.is_null())
                pc.gate.threshold.reset();
            else if (t.is_number())
                pc.gate.threshold = t.get<double>();
            else
                throw InputError("protocol.gate.threshold: expected a number or null");
        }
        g.finish();
    }
    s.finish();
}

} // namespace config_detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
    using config_detail::Section;
    Section top(j, "config");
    const int version = top.require<int>("schema_version");
    if (version != config_schema_version)
        throw InputError("unsupported schema_version " + std::to_string(version) + " (expected " +
                         std::to_string(config_schema_version) + ")");
    RunConfig rc;
    top.get("name", rc.name);
    if (!top.has("device")) throw InputError("config.device: required");
    rc.device = config_detail::parse_device(top.raw("device"));
    if (top.has("stimulus")) rc.stimulus = config_detail::parse_stimulus(top.raw("stimulus"));
    if (top.has("environment")) {
        Section e(top.raw("environment"), "environment");
        e.get("temperature", rc.environment.temperature);
        e.get("sample_dt", rc.environment.sample_dt);
        e.get("t_end", rc.environment.t_end);
        e.finish();
    }
    if (top.has("output")) {
        Section o(top.raw("output"), "output");
        o.get("directory", rc.output.directory);
        if (o.has("format")) rc.output.format = output_format_from_string(o.require<std::string>("format"));
        o.finish();
    }
    if (top.has("protocol")) config_detail::parse_protocol(top.raw("protocol"), rc.protocol);
    top.get("seed", rc.seed);
    top.get("noise_relative", rc.noise_relative);
    top.finish();
    rc.validate();
    return rc;
}

inline RunConfig parse_run_config_text(const std::string& text, const std::string& origin = "config") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(origin + ": invalid JSON: " + e.what());
    }
    return parse_run_config(j);
}

inline RunConfig load_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config_text(ss.str(), path);
}

inline nlohmann::json to_json(const DeviceParams& d) {
    nlohmann::json pools = nlohmann::json::array();
    for (const auto& p : d.pools)
        pools.push_back({{"capacity", p.capacity},
                         {"fill_coeff", p.fill_coeff},
                         {"tau0", p.tau0},
                         {"activation_meV", p.activation_meV},
                         {"coupling", p.coupling}});
    return {{"label", d.label},
            {"polarity", to_string(d.polarity)},
            {"n0", d.n0},
            {"mu0", d.mu0},
            {"length", d.length},
            {"width", d.width},
            {"thickness", d.thickness},
            {"read_voltage", d.read_voltage},
            {"temperature_ref", d.temperature_ref},
            {"pools", pools}};
}

inline nlohmann::json to_json(const PulseTrain& t) {
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : t.pulses())
        ps.push_back({{"start", p.start}, {"duration", p.duration}, {"intensity", p.intensity}});
    return {{"pulses", ps}};
}

inline nlohmann::json to_json(const RunConfig& rc) {
    const auto& st = rc.protocol.settings;
    nlohmann::json gate = {{"type", to_string(rc.protocol.gate.gate)}, {"threshold", nullptr}};
    if (rc.protocol.gate.threshold) gate["threshold"] = *rc.protocol.gate.threshold;
    return {
        {"schema_version", config_schema_version},
        {"name", rc.name},
        {"device", to_json(rc.device)},
        {"stimulus", to_json(rc.stimulus)},
        {"environment",
         {{"temperature", rc.environment.temperature},
          {"sample_dt", rc.environment.sample_dt},
          {"t_end", rc.environment.t_end}}},
        {"output", {{"directory", rc.output.directory}, {"format", to_string(rc.output.format)}}},
        {"protocol",
         {{"intensity", st.intensity},
          {"pulse_width", st.pulse_width},
          {"pulse_period", st.pulse_period},
          {"base_pulse_count", st.base_pulse_count},
          {"freq_pulse_width", st.freq_pulse_width},
          {"freq_pulse_count", st.freq_pulse_count},
          {"lead_in", st.lead_in},
          {"sample_dt", st.sample_dt},
          {"retention_fraction", st.retention_fraction},
          {"ltm_threshold", st.ltm_threshold},
          {"retention_horizon", st.retention_horizon},
          {"measure_delay", st.measure_delay},
          {"max_learning_pulses", st.max_learning_pulses},
          {"max_forgetting_samples", st.max_forgetting_samples},
          {"learning_threshold_relative", st.learning_threshold_relative},
          {"learning_cycles", st.learning_cycles},
          {"learning_rest", st.learning_rest},
          {"sweep", {{"axis", to_string(rc.protocol.sweep.axis)}, {"values", rc.protocol.sweep.values}}},
          {"frequencies", rc.protocol.frequencies},
          {"ppf_frequency", rc.protocol.ppf_frequency},
          {"ppf_pulses", rc.protocol.ppf_pulses},
          {"stdp_delta_ts", rc.protocol.stdp_delta_ts},
          {"gate", gate}}},
        {"seed", rc.seed},
        {"noise_relative", rc.noise_relative},
    };
}

} // namespace scnsyn
