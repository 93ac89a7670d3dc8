#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "units.hpp"

namespace scnsyn {

enum class Polarity { Inhibitory, Excitatory };

inline const char* to_string(Polarity p) {
    return p == Polarity::Inhibitory ? "inhibitory" : "excitatory";
}

inline Polarity polarity_from_string(const std::string& s) {
    if (s == "inhibitory") return Polarity::Inhibitory;
    if (s == "excitatory") return Polarity::Excitatory;
    throw InputError("unknown polarity '" + s + "' (expected inhibitory|excitatory)");
}

// One saturable trap reservoir. Occupancy h obeys
//
//     dh/dt = g * phi * (1 - h/H) - h / tau(T),   tau(T) = tau0 * exp(Ea / (kB T))
//
// `coupling` is the mobility-degradation weight per unit occupancy for an
// inhibitory device, or the fractional free-carrier gain per unit occupancy
// for an excitatory one.
struct TrapPool {
    double capacity = 1.0;       // H, dimensionless
    double fill_coeff = 0.0;     // g, per (mW/cm^2) s
    double tau0 = 1.0;           // s
    double activation_meV = 0.0; // Ea
    double coupling = 0.0;       // c (inhibitory) or d (excitatory)
};

struct DeviceParams {
    std::string label;
    Polarity polarity = Polarity::Inhibitory;
    double n0 = 0.0;           // cm^-3
    double mu0 = 0.0;          // cm^2/(V s)
    double length = 0.0;       // contact-to-contact, cm
    double width = 0.0;        // cm
    double thickness = 0.0;    // cm
    double read_voltage = 0.0; // V
    std::vector<TrapPool> pools;
    double temperature_ref = 300.0; // K

    std::size_t min_pools() const { return polarity == Polarity::Inhibitory ? 2 : 3; }

    void validate() const {
        if (!(n0 > 0.0)) throw DomainError("n0 must be > 0");
        if (!(mu0 > 0.0)) throw DomainError("mu0 must be > 0");
        if (!(length > 0.0) || !(width > 0.0) || !(thickness > 0.0))
            throw DomainError("device geometry (length, width, thickness) must be > 0");
        if (read_voltage == 0.0 || !std::isfinite(read_voltage))
            throw DomainError("read_voltage must be finite and non-zero");
        if (!(temperature_ref > 0.0)) throw DomainError("temperature_ref must be > 0");
        if (pools.size() < min_pools())
            throw DomainError(std::string(to_string(polarity)) + " device needs at least " +
                              std::to_string(min_pools()) + " trap pools, got " +
                              std::to_string(pools.size()));
        for (std::size_t i = 0; i < pools.size(); ++i) {
            const auto& p = pools[i];
            const std::string tag = "pool " + std::to_string(i) + ": ";
            if (!(p.capacity > 0.0)) throw DomainError(tag + "capacity must be > 0");
            if (!(p.fill_coeff >= 0.0)) throw DomainError(tag + "fill_coeff must be >= 0");
            if (!(p.tau0 > 0.0)) throw DomainError(tag + "tau0 must be > 0");
            if (!(p.activation_meV >= 0.0)) throw DomainError(tag + "activation energy must be >= 0");
            if (!(p.coupling >= 0.0)) throw DomainError(tag + "coupling must be >= 0");
        }
    }
};

struct DeviceState {
    std::vector<double> occupancy;
    double time = 0.0;         // s
    double temperature = 300.0; // K

    static DeviceState dark(const DeviceParams& params, double temperature, double time = 0.0) {
        return DeviceState{std::vector<double>(params.pools.size(), 0.0), time, temperature};
    }
};

struct Pulse {
    double start = 0.0;     // s
    double duration = 1.0;  // s
    double intensity = 40.0; // mW/cm^2

    double end() const { return start + duration; }
};

// Sorted, non-overlapping optical pulses. Adjacent pulses may touch.
class PulseTrain {
public:
    PulseTrain() = default;

    explicit PulseTrain(std::vector<Pulse> pulses) : pulses_(std::move(pulses)) {
        for (std::size_t i = 0; i < pulses_.size(); ++i) {
            const auto& p = pulses_[i];
            if (!std::isfinite(p.start) || !(p.duration > 0.0) || !std::isfinite(p.duration))
                throw InputError("pulse " + std::to_string(i) + ": duration must be finite and > 0");
            if (!(p.intensity >= 0.0) || !std::isfinite(p.intensity))
                throw InputError("pulse " + std::to_string(i) + ": intensity must be finite and >= 0");
            if (i > 0) {
                const auto& q = pulses_[i - 1];
                if (p.start < q.start) throw InputError("pulses must be sorted by start time");
                if (p.start < q.end())
                    throw InputError("pulses " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                     " overlap");
            }
        }
    }

    // `count` pulses of `width` seconds every `period` seconds starting at `start`.
    static PulseTrain uniform(int count, double width, double period, double intensity,
                              double start = 0.0) {
        if (count < 0) throw InputError("pulse count must be >= 0");
        if (count > 1 && !(period >= width))
            throw InputError("pulse period must be >= pulse width");
        std::vector<Pulse> ps;
        ps.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) ps.push_back({start + k * period, width, intensity});
        return PulseTrain(std::move(ps));
    }

    const std::vector<Pulse>& pulses() const { return pulses_; }
    bool empty() const { return pulses_.empty(); }
    std::size_t size() const { return pulses_.size(); }

    double end_time() const { return pulses_.empty() ? 0.0 : pulses_.back().end(); }

    // Repetition frequency when all start-to-start spacings agree.
    std::optional<double> frequency() const {
        if (pulses_.size() < 2) return std::nullopt;
        const double period = pulses_[1].start - pulses_[0].start;
        for (std::size_t i = 2; i < pulses_.size(); ++i) {
            const double d = pulses_[i].start - pulses_[i - 1].start;
            if (std::abs(d - period) > 1e-9 * std::max(1.0, std::abs(period))) return std::nullopt;
        }
        return 1.0 / period;
    }

    // Intensity on the open interval (a, b); the interval must not straddle an edge.
    double intensity_between(double a, double b) const {
        const double mid = 0.5 * (a + b);
        auto it = std::upper_bound(pulses_.begin(), pulses_.end(), mid,
                                   [](double t, const Pulse& p) { return t < p.start; });
        if (it == pulses_.begin()) return 0.0;
        --it;
        return mid < it->end() ? it->intensity : 0.0;
    }

private:
    std::vector<Pulse> pulses_;
};

// Sampled (time, current) series. t strictly increasing, all values finite.
struct Trace {
    std::vector<double> t;       // s
    std::vector<double> current; // A
    double read_voltage = 0.0;   // V
    double temperature = 300.0;  // K
    std::string label;

    std::size_t size() const { return t.size(); }

    void validate() const {
        if (t.size() != current.size()) throw InputError("trace: time and current lengths differ");
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!std::isfinite(t[i]) || !std::isfinite(current[i]))
                throw InputError("trace: non-finite value at sample " + std::to_string(i));
            if (i > 0 && !(t[i] > t[i - 1]))
                throw InputError("trace: time not strictly increasing at sample " + std::to_string(i));
        }
    }

    // Linear interpolation; clamps outside the sampled range.
    double interpolate(double time) const {
        if (t.empty()) throw InputError("trace: empty");
        if (time <= t.front()) return current.front();
        if (time >= t.back()) return current.back();
        auto it = std::upper_bound(t.begin(), t.end(), time);
        const auto j = static_cast<std::size_t>(it - t.begin());
        const double a = (time - t[j - 1]) / (t[j] - t[j - 1]);
        return current[j - 1] + a * (current[j] - current[j - 1]);
    }

    Trace window(double t_start, double t_end) const {
        Trace out{{}, {}, read_voltage, temperature, label};
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] >= t_start && t[i] <= t_end) {
                out.t.push_back(t[i]);
                out.current.push_back(current[i]);
            }
        }
        return out;
    }
};

struct DarkTransport {
    double sigma;        // S/cm
    double resistance;   // ohm
    double dark_current; // A
};

inline DarkTransport dark_conductivity(const DeviceParams& params) {
    if (!(params.n0 > 0.0) || !(params.mu0 > 0.0))
        throw DomainError("carrier density and mobility must be > 0");
    if (!(params.length > 0.0) || !(params.width > 0.0) || !(params.thickness > 0.0))
        throw DomainError("device geometry must be > 0");
    const double sigma = params.n0 * units::elementary_charge * params.mu0;
    const double resistance = params.length / (sigma * params.width * params.thickness);
    return {sigma, resistance, params.read_voltage / resistance};
}

inline double arrhenius_tau(double tau0, double activation_meV, double temperature) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0 K");
    if (!(tau0 > 0.0)) throw DomainError("tau0 must be > 0");
    if (activation_meV == 0.0) return tau0;
    return tau0 * std::exp(activation_meV / (units::boltzmann_meV * temperature));
}

namespace detail {

// Exact solution of the linear pool ODE over dt at constant intensity.
inline double advance_pool(double h, const TrapPool& pool, double intensity, double temperature,
                           double dt) {
    const double tau = arrhenius_tau(pool.tau0, pool.activation_meV, temperature);
    const double drive = pool.fill_coeff * intensity;
    const double rate = drive / pool.capacity + 1.0 / tau;
    const double h_inf = drive / rate;
    const double decay = std::exp(-rate * dt);
    // h*decay + h_inf*(1-decay), with expm1 for small rate*dt
    const double next = h * decay - h_inf * std::expm1(-rate * dt);
    return std::clamp(next, 0.0, pool.capacity);
}

inline void advance_in_place(DeviceState& state, const DeviceParams& params, double intensity,
                             double dt) {
    for (std::size_t i = 0; i < params.pools.size(); ++i)
        state.occupancy[i] =
            advance_pool(state.occupancy[i], params.pools[i], intensity, state.temperature, dt);
    state.time += dt;
}

} // namespace detail

inline DeviceState step_segment(const DeviceState& state, const DeviceParams& params,
                                double intensity, double dt) {
    if (!(dt > 0.0)) throw DomainError("segment length dt must be > 0");
    if (!(intensity >= 0.0)) throw DomainError("intensity must be >= 0");
    if (state.occupancy.size() != params.pools.size())
        throw InputError("state has " + std::to_string(state.occupancy.size()) +
                         " occupancies but device has " + std::to_string(params.pools.size()) +
                         " pools");
    DeviceState next = state;
    detail::advance_in_place(next, params, intensity, dt);
    return next;
}

struct Observation {
    double n;       // cm^-3
    double mu;      // cm^2/(V s)
    double current; // A
};

inline double coupling_sum(const DeviceState& state, const DeviceParams& params) {
    double s = 0.0;
    for (std::size_t i = 0; i < params.pools.size(); ++i)
        s += params.pools[i].coupling * state.occupancy[i];
    return s;
}

inline Observation observe_current(const DeviceState& state, const DeviceParams& params) {
    const double s = coupling_sum(state, params);
    double n = params.n0;
    double mu = params.mu0;
    if (params.polarity == Polarity::Inhibitory)
        mu = params.mu0 / (1.0 + s);
    else
        n = params.n0 * (1.0 + s);
    const double sigma = n * units::elementary_charge * mu;
    const double current = params.read_voltage * sigma * params.width * params.thickness / params.length;
    return {n, mu, current};
}

// Conductance of the device (S) in the given state.
inline double conductance(const DeviceState& state, const DeviceParams& params) {
    return observe_current(state, params).current / params.read_voltage;
}

// Advance `state` to `t_target` under `train`, splitting at every pulse edge
// so each closed-form step sees constant illumination.
inline void advance_to(DeviceState& state, const DeviceParams& params, const PulseTrain& train,
                       double t_target) {
    const auto& ps = train.pulses();
    auto it = std::upper_bound(ps.begin(), ps.end(), state.time,
                               [](double t, const Pulse& p) { return t < p.end(); });
    while (state.time < t_target) {
        double next = t_target;
        double intensity = 0.0;
        if (it != ps.end()) {
            if (state.time < it->start) {
                next = std::min(next, it->start);
            } else {
                next = std::min(next, it->end());
                intensity = it->intensity;
            }
        }
        const double dt = next - state.time;
        if (dt > 0.0) detail::advance_in_place(state, params, intensity, dt);
        state.time = next; // snap exactly onto the edge
        if (it != ps.end() && state.time >= it->end()) ++it;
    }
}

struct SimulationRecord {
    std::vector<double> t;
    std::vector<double> n;
    std::vector<double> mu;
    std::vector<double> current;
    std::vector<std::vector<double>> occupancy; // [sample][pool]
};

inline std::vector<double> sample_times(double sample_dt, double t_end) {
    if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) throw DomainError("sample_dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be finite and >= 0");
    const auto count = static_cast<std::size_t>(std::floor(t_end / sample_dt * (1.0 + 1e-12)));
    std::vector<double> ts;
    ts.reserve(count + 2);
    for (std::size_t k = 0; k <= count; ++k) ts.push_back(static_cast<double>(k) * sample_dt);
    if (t_end - ts.back() > 1e-9 * sample_dt) ts.push_back(t_end);
    return ts;
}

inline SimulationRecord simulate_detailed(const DeviceParams& params, const PulseTrain& train,
                                          double temperature, double sample_dt, double t_end) {
    params.validate();
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0 K");
    if (t_end < train.end_time()) throw InputError("t_end must cover the pulse train");
    if (!train.empty() && train.pulses().front().start < 0.0)
        throw InputError("pulses must start at t >= 0");
    const auto ts = sample_times(sample_dt, t_end);
    SimulationRecord rec;
    rec.t.reserve(ts.size());
    rec.n.reserve(ts.size());
    rec.mu.reserve(ts.size());
    rec.current.reserve(ts.size());
    rec.occupancy.reserve(ts.size());
    DeviceState state = DeviceState::dark(params, temperature);
    for (double t : ts) {
        advance_to(state, params, train, t);
        const auto obs = observe_current(state, params);
        rec.t.push_back(t);
        rec.n.push_back(obs.n);
        rec.mu.push_back(obs.mu);
        rec.current.push_back(obs.current);
        rec.occupancy.push_back(state.occupancy);
    }
    return rec;
}

inline Trace simulate(const DeviceParams& params, const PulseTrain& train, double temperature,
                      double sample_dt, double t_end) {
    auto rec = simulate_detailed(params, train, temperature, sample_dt, t_end);
    return Trace{std::move(rec.t), std::move(rec.current), params.read_voltage, temperature,
                 params.label};
}

} // namespace scnsyn
