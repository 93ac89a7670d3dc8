#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "kinetics.hpp"
#include "units.hpp"

namespace scnsyn {

// Stimulus and measurement conventions shared by every protocol driver.
struct ProtocolSettings {
    double temperature = 300.0;   // K
    double intensity = 40.0;      // mW/cm^2
    double pulse_width = 1.0;     // s
    double pulse_period = 2.0;    // s, start-to-start for count-based trains
    int base_pulse_count = 5;     // pulses per train on the duration and intensity axes
    double freq_pulse_width = 0.25; // s, pulse width on frequency-driven trains
    int freq_pulse_count = 20;    // pulses per train on the frequency axis
    double lead_in = 1.0;         // s of darkness before the first pulse
    double sample_dt = 0.05;      // s
    double retention_fraction = 0.1;
    double ltm_threshold = 60.0;  // s; retention above this counts as LTM
    double retention_horizon = 1200.0; // s recorded after light-off
    double measure_delay = 1.0;   // s after the later pulse ends (STDP, logic)
    int max_learning_pulses = 10000;
    std::size_t max_forgetting_samples = 20000;
    double learning_threshold_relative = 0.025; // |dI| target as a fraction of the dark current
    int learning_cycles = 5;
    double learning_rest = 60.0; // s of darkness between learning cycles

    void validate() const {
        if (!(temperature > 0.0)) throw DomainError("protocol temperature must be > 0 K");
        if (!(intensity >= 0.0)) throw DomainError("protocol intensity must be >= 0");
        if (!(pulse_width > 0.0) || !(freq_pulse_width > 0.0)) throw DomainError("pulse widths must be > 0");
        if (!(pulse_period >= pulse_width)) throw DomainError("pulse_period must be >= pulse_width");
        if (base_pulse_count < 1 || freq_pulse_count < 1) throw DomainError("pulse counts must be >= 1");
        if (!(lead_in >= 0.0)) throw DomainError("lead_in must be >= 0");
        if (!(sample_dt > 0.0)) throw DomainError("sample_dt must be > 0");
        if (!(retention_fraction > 0.0 && retention_fraction < 1.0))
            throw DomainError("retention_fraction must lie in (0, 1)");
        if (!(ltm_threshold >= 0.0)) throw DomainError("ltm_threshold must be >= 0");
        if (!(retention_horizon > 0.0)) throw DomainError("retention_horizon must be > 0");
        if (!(measure_delay >= 0.0)) throw DomainError("measure_delay must be >= 0");
        if (max_learning_pulses < 1 || max_forgetting_samples < 1)
            throw DomainError("learning limits must be >= 1");
        if (!(learning_threshold_relative > 0.0)) throw DomainError("learning_threshold_relative must be > 0");
        if (learning_cycles < 1) throw DomainError("learning_cycles must be >= 1");
        if (!(learning_rest > 0.0)) throw DomainError("learning_rest must be > 0");
    }
};

// ---------------------------------------------------------------------------
// Memory retention

enum class MemoryClass { STM, LTM };

inline const char* to_string(MemoryClass c) { return c == MemoryClass::STM ? "STM" : "LTM"; }

struct RetentionResult {
    double delta_I_at_off = 0.0; // A, signed
    double retention_time = 0.0; // s
    MemoryClass classification = MemoryClass::STM;
    bool open_ended = false;     // threshold never reached within the trace
};

// Time after `off_time` for |I - I_dark| to fall to `fraction` of its value
// at `off_time`; the crossing is interpolated linearly between samples.
inline RetentionResult retention(const Trace& trace, double off_time, double fraction, double dark_current,
                                 double ltm_threshold = 60.0) {
    trace.validate();
    if (trace.t.empty() || off_time < trace.t.front() || off_time > trace.t.back())
        throw InputError("off_time lies outside the trace");
    if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("retention fraction must lie in (0, 1)");
    RetentionResult res;
    res.delta_I_at_off = trace.interpolate(off_time) - dark_current;
    const double target = fraction * std::abs(res.delta_I_at_off);
    if (res.delta_I_at_off == 0.0) return res;

    auto it = std::upper_bound(trace.t.begin(), trace.t.end(), off_time);
    auto j = static_cast<std::size_t>(it - trace.t.begin());
    double t_prev = off_time;
    double d_prev = std::abs(res.delta_I_at_off);
    for (; j < trace.size(); ++j) {
        const double d = std::abs(trace.current[j] - dark_current);
        if (d <= target) {
            const double a = d_prev > d ? (d_prev - target) / (d_prev - d) : 1.0;
            res.retention_time = t_prev + a * (trace.t[j] - t_prev) - off_time;
            res.classification = res.retention_time > ltm_threshold ? MemoryClass::LTM : MemoryClass::STM;
            return res;
        }
        t_prev = trace.t[j];
        d_prev = d;
    }
    res.open_ended = true;
    res.retention_time = trace.t.back() - off_time;
    res.classification = res.retention_time > ltm_threshold ? MemoryClass::LTM : MemoryClass::STM;
    return res;
}

// Overload taking the trace's first sample as the dark baseline.
inline RetentionResult retention(const Trace& trace, double off_time, double fraction) {
    if (trace.current.empty()) throw InputError("trace: empty");
    return retention(trace, off_time, fraction, trace.current.front());
}

namespace detail {

// Trace sampled from `off` onwards at off + k*dt, state advanced exactly
// through `train` first.
inline Trace record_after(const DeviceParams& params, const PulseTrain& train, double temperature, double off,
                          double dt, double horizon, std::size_t max_samples = 0) {
    DeviceState state = DeviceState::dark(params, temperature);
    advance_to(state, params, train, off);
    std::size_t n = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    double step = dt;
    if (max_samples > 0 && n > max_samples) {
        n = max_samples;
        step = horizon / static_cast<double>(n);
    }
    Trace tr{{}, {}, params.read_voltage, temperature, params.label};
    tr.t.reserve(n + 1);
    tr.current.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = off + static_cast<double>(k) * step;
        advance_to(state, params, train, t);
        tr.t.push_back(t);
        tr.current.push_back(observe_current(state, params).current);
    }
    return tr;
}

inline std::string pool_name(std::size_t i) { return "pool " + std::to_string(i); }

} // namespace detail

enum class StimulusAxis { Number, Duration, Intensity, Frequency };

inline const char* to_string(StimulusAxis a) {
    switch (a) {
    case StimulusAxis::Number: return "number";
    case StimulusAxis::Duration: return "duration";
    case StimulusAxis::Intensity: return "intensity";
    case StimulusAxis::Frequency: return "frequency";
    }
    return "?";
}

inline StimulusAxis stimulus_axis_from_string(const std::string& s) {
    if (s == "number") return StimulusAxis::Number;
    if (s == "duration") return StimulusAxis::Duration;
    if (s == "intensity") return StimulusAxis::Intensity;
    if (s == "frequency") return StimulusAxis::Frequency;
    throw InputError("unknown stimulus axis '" + s + "' (expected number|duration|intensity|frequency)");
}

// The train applied at one point of an STM/LTM sweep:
//   Number     `value` pulses of pulse_width every pulse_period
//   Duration   base_pulse_count pulses of `value` seconds, gaps of (pulse_period - pulse_width)
//   Intensity  base_pulse_count standard pulses at `value` mW/cm^2
//   Frequency  freq_pulse_count pulses of freq_pulse_width at `value` Hz
inline PulseTrain sweep_stimulus(StimulusAxis axis, double value, const ProtocolSettings& s) {
    switch (axis) {
    case StimulusAxis::Number: {
        if (!(value >= 1.0) || value != std::floor(value))
            throw InputError("pulse number must be a positive integer");
        return PulseTrain::uniform(static_cast<int>(value), s.pulse_width, s.pulse_period, s.intensity, s.lead_in);
    }
    case StimulusAxis::Duration: {
        if (!(value > 0.0)) throw InputError("pulse duration must be > 0");
        const double gap = s.pulse_period - s.pulse_width;
        return PulseTrain::uniform(s.base_pulse_count, value, value + gap, s.intensity, s.lead_in);
    }
    case StimulusAxis::Intensity: {
        if (!(value >= 0.0)) throw InputError("intensity must be >= 0");
        return PulseTrain::uniform(s.base_pulse_count, s.pulse_width, s.pulse_period, value, s.lead_in);
    }
    case StimulusAxis::Frequency: {
        if (!(value > 0.0)) throw InputError("frequency must be > 0");
        const double period = 1.0 / value;
        if (!(period > s.freq_pulse_width))
            throw InputError("frequency " + std::to_string(value) + " Hz leaves no gap between " +
                             std::to_string(s.freq_pulse_width) + " s pulses");
        return PulseTrain::uniform(s.freq_pulse_count, s.freq_pulse_width, period, s.intensity, s.lead_in);
    }
    }
    throw InputError("unknown axis");
}

inline RetentionResult retention_for_train(const DeviceParams& params, const PulseTrain& train,
                                           const ProtocolSettings& s) {
    const double off = train.end_time();
    const auto tr = detail::record_after(params, train, s.temperature, off, s.sample_dt, s.retention_horizon);
    return retention(tr, off, s.retention_fraction, dark_conductivity(params).dark_current, s.ltm_threshold);
}

inline std::vector<RetentionResult> stm_ltm_sweep(const DeviceParams& params, StimulusAxis axis,
                                                  const std::vector<double>& values,
                                                  const ProtocolSettings& s = {}) {
    params.validate();
    s.validate();
    if (values.empty()) throw InputError("sweep values must not be empty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1]) throw InputError("sweep values must be sorted ascending");
    std::vector<RetentionResult> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(retention_for_train(params, sweep_stimulus(axis, v, s), s));
    return out;
}

// ---------------------------------------------------------------------------
// Learning and forgetting

struct LearningCycle {
    int cycle_index = 0; // 1-based
    int pulses_to_threshold = 0;
    double delta_at_threshold = 0.0; // A, the |dI| that met the threshold
    double off_time = 0.0;           // s, end of the last learning pulse of the cycle
    Trace forgetting_trace;          // from off_time over the rest period
};

inline std::vector<LearningCycle> learning_forgetting(const DeviceParams& params, double threshold_delta,
                                                      int n_cycles, double rest,
                                                      const ProtocolSettings& s = {}) {
    params.validate();
    s.validate();
    if (!(threshold_delta > 0.0)) throw InputError("threshold_delta must be > 0");
    if (n_cycles < 1) throw InputError("n_cycles must be >= 1");
    if (!(rest > 0.0)) throw InputError("rest must be > 0");

    const double i_dark = dark_conductivity(params).dark_current;

    // Continuous illumination bounds any pulsed response.
    {
        DeviceState sat = DeviceState::dark(params, s.temperature);
        std::size_t fullest = 0;
        double fullest_frac = -1.0;
        for (std::size_t i = 0; i < params.pools.size(); ++i) {
            const auto& p = params.pools[i];
            const double tau = arrhenius_tau(p.tau0, p.activation_meV, s.temperature);
            const double drive = p.fill_coeff * s.intensity;
            sat.occupancy[i] = drive / (drive / p.capacity + 1.0 / tau);
            if (sat.occupancy[i] / p.capacity > fullest_frac) {
                fullest_frac = sat.occupancy[i] / p.capacity;
                fullest = i;
            }
        }
        const double max_delta = std::abs(observe_current(sat, params).current - i_dark);
        if (threshold_delta >= max_delta) {
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "threshold %.6g A is unreachable: response saturates at %.6g A with %s at %.1f%% "
                          "of capacity",
                          threshold_delta, max_delta, detail::pool_name(fullest).c_str(), 100.0 * fullest_frac);
            throw ProtocolError(buf);
        }
    }

    std::vector<LearningCycle> cycles;
    DeviceState state = DeviceState::dark(params, s.temperature);
    const double gap = s.pulse_period - s.pulse_width;
    for (int c = 1; c <= n_cycles; ++c) {
        LearningCycle cyc;
        cyc.cycle_index = c;
        double delta = 0.0;
        for (;;) {
            detail::advance_in_place(state, params, s.intensity, s.pulse_width);
            ++cyc.pulses_to_threshold;
            delta = std::abs(observe_current(state, params).current - i_dark);
            if (delta >= threshold_delta) break;
            if (cyc.pulses_to_threshold >= s.max_learning_pulses) {
                std::size_t fullest = 0;
                for (std::size_t i = 1; i < params.pools.size(); ++i)
                    if (state.occupancy[i] / params.pools[i].capacity >
                        state.occupancy[fullest] / params.pools[fullest].capacity)
                        fullest = i;
                throw ProtocolError("threshold not reached after " + std::to_string(s.max_learning_pulses) +
                                    " pulses; " + detail::pool_name(fullest) + " is saturating");
            }
            if (gap > 0.0) detail::advance_in_place(state, params, 0.0, gap);
        }
        cyc.delta_at_threshold = delta;
        cyc.off_time = state.time;

        // Forgetting: the device rests in the dark.
        std::size_t n = static_cast<std::size_t>(std::ceil(rest / s.sample_dt - 1e-9));
        n = std::clamp<std::size_t>(n, 1, s.max_forgetting_samples);
        const double step = rest / static_cast<double>(n);
        Trace& tr = cyc.forgetting_trace;
        tr.read_voltage = params.read_voltage;
        tr.temperature = s.temperature;
        tr.label = params.label + " cycle " + std::to_string(c);
        const double off = state.time;
        tr.t.push_back(off);
        tr.current.push_back(observe_current(state, params).current);
        for (std::size_t k = 1; k <= n; ++k) {
            detail::advance_in_place(state, params, 0.0, step);
            state.time = off + static_cast<double>(k) * step;
            tr.t.push_back(state.time);
            tr.current.push_back(observe_current(state, params).current);
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

// ---------------------------------------------------------------------------
// Paired-pulse index and temporal filtering

// (A_k / A_1) * 100 for k = 2..n, with A_k = |I(end of pulse k) - I_dark|.
inline std::vector<double> ppf_index(const DeviceParams& params, double frequency, int n_pulses,
                                     const ProtocolSettings& s = {}) {
    params.validate();
    s.validate();
    if (n_pulses < 2) throw InputError("paired-pulse index needs n_pulses >= 2");
    if (!(frequency > 0.0)) throw InputError("frequency must be > 0");
    const double period = 1.0 / frequency;
    if (!(period > s.freq_pulse_width))
        throw InputError("frequency " + std::to_string(frequency) + " Hz leaves no gap between pulses");
    const double i_dark = dark_conductivity(params).dark_current;
    DeviceState state = DeviceState::dark(params, s.temperature);
    std::vector<double> amps;
    amps.reserve(static_cast<std::size_t>(n_pulses));
    for (int k = 0; k < n_pulses; ++k) {
        detail::advance_in_place(state, params, s.intensity, s.freq_pulse_width);
        amps.push_back(std::abs(observe_current(state, params).current - i_dark));
        detail::advance_in_place(state, params, 0.0, period - s.freq_pulse_width);
    }
    if (amps.front() == 0.0) throw UndefinedIndexError("first-pulse amplitude is zero; index undefined");
    std::vector<double> idx;
    idx.reserve(amps.size() - 1);
    for (std::size_t k = 1; k < amps.size(); ++k) idx.push_back(amps[k] / amps.front() * 100.0);
    return idx;
}

inline std::vector<std::pair<double, double>> filter_response(const DeviceParams& params,
                                                              const std::vector<double>& frequencies,
                                                              int n_pulses, const ProtocolSettings& s = {}) {
    std::vector<std::pair<double, double>> out;
    out.reserve(frequencies.size());
    for (double f : frequencies) {
        if (!(f > 0.0)) throw InputError("frequencies must be > 0");
        out.emplace_back(f, ppf_index(params, f, n_pulses, s).back());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Two devices in series

struct Synapse {
    DeviceParams params;
    DeviceState state;

    static Synapse dark(DeviceParams p, double temperature = 300.0) {
        auto st = DeviceState::dark(p, temperature);
        return {std::move(p), std::move(st)};
    }
};

struct SeriesPair {
    Synapse pre;
    Synapse post;

    void validate() const {
        pre.params.validate();
        post.params.validate();
        if (pre.params.polarity != post.params.polarity)
            throw InputError("series pair devices must share polarity");
    }
};

namespace detail {

// Conductance `lag` seconds after the start of one pulse, from dark.
inline double conductance_after_pulse(const DeviceParams& params, const Pulse& pulse, double lag,
                                      double temperature) {
    DeviceState st = DeviceState::dark(params, temperature);
    advance_in_place(st, params, pulse.intensity, pulse.duration);
    if (lag > pulse.duration) advance_in_place(st, params, 0.0, lag - pulse.duration);
    return conductance(st, params);
}

inline double series(double g1, double g2) { return 1.0 / (1.0 / g1 + 1.0 / g2); }

} // namespace detail

struct StdpPoint {
    double delta_t; // s; post pulse time minus pre pulse time
    double delta_G; // S
};

// Pre device pulsed at 0, post device at delta_t; series conductance read
// measure_delay after the later pulse ends, relative to the dark pair.
inline std::vector<StdpPoint> stdp(const SeriesPair& pair, const std::vector<double>& delta_ts, const Pulse& pulse,
                                   double measure_delay, double temperature = 300.0) {
    pair.validate();
    if (!(pulse.duration > 0.0) || !(pulse.intensity >= 0.0)) throw InputError("invalid STDP pulse");
    if (!(measure_delay >= 0.0)) throw InputError("measure_delay must be >= 0");
    const double g_dark = detail::series(1.0 / dark_conductivity(pair.pre.params).resistance,
                                         1.0 / dark_conductivity(pair.post.params).resistance);
    std::vector<StdpPoint> out;
    out.reserve(delta_ts.size());
    for (double dt : delta_ts) {
        // Lags are built from |dt| so that +dt and -dt produce identical operands.
        const double late_lag = pulse.duration + measure_delay;
        const double early_lag = std::abs(dt) + pulse.duration + measure_delay;
        const double pre_lag = dt >= 0.0 ? early_lag : late_lag;
        const double post_lag = dt >= 0.0 ? late_lag : early_lag;
        const double r_pre = 1.0 / detail::conductance_after_pulse(pair.pre.params, pulse, pre_lag, temperature);
        const double r_post =
            1.0 / detail::conductance_after_pulse(pair.post.params, pulse, post_lag, temperature);
        out.push_back({dt, 1.0 / (r_pre + r_post) - g_dark});
    }
    return out;
}

enum class Gate { OR, AND, NOR, NAND };

inline const char* to_string(Gate g) {
    switch (g) {
    case Gate::OR: return "OR";
    case Gate::AND: return "AND";
    case Gate::NOR: return "NOR";
    case Gate::NAND: return "NAND";
    }
    return "?";
}

inline Gate gate_from_string(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (s == "OR") return Gate::OR;
    if (s == "AND") return Gate::AND;
    if (s == "NOR") return Gate::NOR;
    if (s == "NAND") return Gate::NAND;
    throw InputError("unknown gate '" + s + "' (expected OR|AND|NOR|NAND)");
}

inline bool gate_truth(Gate g, bool a, bool b) {
    switch (g) {
    case Gate::OR: return a || b;
    case Gate::AND: return a && b;
    case Gate::NOR: return !(a || b);
    case Gate::NAND: return !(a && b);
    }
    return false;
}

inline Polarity gate_polarity(Gate g) {
    return (g == Gate::OR || g == Gate::AND) ? Polarity::Excitatory : Polarity::Inhibitory;
}

struct GateSpec {
    Gate gate = Gate::OR;
    std::optional<double> threshold; // S; auto-derived when empty
};

struct GateOutput {
    double G_net; // S
    bool output;
};

struct GateSettings {
    Pulse pulse{0.0, 1.0, 40.0};
    double measure_delay = 1.0;
    double temperature = 300.0;
};

// Net conductance for inputs (pre, post) in the order 00, 01, 10, 11.
inline std::array<double, 4> gate_conductances(const SeriesPair& pair, const GateSettings& gs = {}) {
    pair.validate();
    const double lag = gs.pulse.duration + gs.measure_delay;
    auto device_g = [&](const Synapse& syn, bool lit) {
        DeviceState st = syn.state;
        st.temperature = gs.temperature;
        if (st.occupancy.size() != syn.params.pools.size()) st = DeviceState::dark(syn.params, gs.temperature);
        if (lit) detail::advance_in_place(st, syn.params, gs.pulse.intensity, gs.pulse.duration);
        const double dark_tail = lit ? lag - gs.pulse.duration : lag;
        if (dark_tail > 0.0) detail::advance_in_place(st, syn.params, 0.0, dark_tail);
        return conductance(st, syn.params);
    };
    const double g_pre[2] = {device_g(pair.pre, false), device_g(pair.pre, true)};
    const double g_post[2] = {device_g(pair.post, false), device_g(pair.post, true)};
    return {detail::series(g_pre[0], g_post[0]), detail::series(g_pre[0], g_post[1]),
            detail::series(g_pre[1], g_post[0]), detail::series(g_pre[1], g_post[1])};
}

// Thresholds t with lo < t <= hi realize the gate (output 1 iff G >= t).
inline std::pair<double, double> gate_feasibility(Gate gate, const std::array<double, 4>& G) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        if (gate_truth(gate, (i & 2) != 0, (i & 1) != 0))
            hi = std::min(hi, G[static_cast<std::size_t>(i)]);
        else
            lo = std::max(lo, G[static_cast<std::size_t>(i)]);
    }
    return {lo, hi};
}

namespace detail {
inline std::string format_conductances(const std::array<double, 4>& G) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "G(00)=%.9g S, G(01)=%.9g S, G(10)=%.9g S, G(11)=%.9g S", G[0], G[1], G[2], G[3]);
    return buf;
}
} // namespace detail

inline double resolve_threshold(const GateSpec& spec, const std::array<double, 4>& G) {
    const auto [lo, hi] = gate_feasibility(spec.gate, G);
    if (!(lo < hi))
        throw UnsatisfiableGateError(std::string(to_string(spec.gate)) + " is not realizable: " +
                                     detail::format_conductances(G));
    if (!spec.threshold) return 0.5 * (lo + hi);
    const double t = *spec.threshold;
    if (!(t > lo && t <= hi))
        throw UnsatisfiableGateError("threshold " + std::to_string(t) + " S outside feasible interval for " +
                                     to_string(spec.gate) + ": " + detail::format_conductances(G));
    return t;
}

inline GateOutput logic_gate(const GateSpec& spec, const SeriesPair& pair, std::pair<bool, bool> inputs,
                             const GateSettings& gs = {}) {
    if (pair.pre.params.polarity != gate_polarity(spec.gate) || pair.post.params.polarity != gate_polarity(spec.gate))
        throw InputError(std::string(to_string(spec.gate)) + " gate requires " + to_string(gate_polarity(spec.gate)) +
                         " devices");
    const auto G = gate_conductances(pair, gs);
    const double thr = resolve_threshold(spec, G);
    const double g = G[static_cast<std::size_t>((inputs.first ? 2 : 0) + (inputs.second ? 1 : 0))];
    return {g, g >= thr};
}

struct TruthRow {
    bool a, b;
    double G_net;
    bool output;
};

inline std::vector<TruthRow> truth_table(const GateSpec& spec, const SeriesPair& pair, const GateSettings& gs = {}) {
    std::vector<TruthRow> rows;
    for (int i = 0; i < 4; ++i) {
        const bool a = (i & 2) != 0, b = (i & 1) != 0;
        const auto r = logic_gate(spec, pair, {a, b}, gs);
        rows.push_back({a, b, r.G_net, r.output});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Energy figures

// Per-area power of a read-out event, nW/mm^2. `pulse_width` enters only the
// energy (see pulse_energy_electrical).
inline double power_density(double read_voltage, double delta_I, double area_mm2, double pulse_width) {
    if (!(area_mm2 > 0.0)) throw DomainError("device area must be > 0");
    if (!(pulse_width >= 0.0)) throw DomainError("pulse width must be >= 0");
    return std::abs(read_voltage * delta_I) * units::W_to_nW / area_mm2;
}

// dE = S * P * dt; S in mm^2, P in mW/cm^2, dt in s; returns J.
inline double pulse_energy_optical(double area_mm2, double intensity, double dt) {
    if (area_mm2 < 0.0 || intensity < 0.0 || dt < 0.0) throw DomainError("optical energy inputs must be >= 0");
    return area_mm2 * units::mm2_to_cm2 * intensity * units::mW_to_W * dt;
}

// dE = V * I * dt; returns J.
inline double pulse_energy_electrical(double voltage, double current, double dt) {
    if (voltage < 0.0 || current < 0.0 || dt < 0.0) throw DomainError("electrical energy inputs must be >= 0");
    return voltage * current * dt;
}

} // namespace scnsyn
