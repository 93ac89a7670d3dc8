#pragma once

// Reference integrator for the trap-pool equations, used only by tests.
// It shares no code with the closed-form stepper: it takes the raw ODE
// right-hand side and integrates it with adaptive Dormand-Prince 5(4).

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Rhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

struct Tolerance {
    double rtol = 1e-11;
    double atol = 1e-15;
};

// Integrates y from t0 to t1 in place.
inline void dopri5(const Rhs& f, double t0, double t1, Vec& y, const Tolerance& tol = {}) {
    if (t1 <= t0) return;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n);
    double t = t0;
    double h = std::min(t1 - t0, 1e-3);
    f(t, y, k1);
    int steps = 0;
    while (t < t1) {
        if (++steps > 50'000'000) throw std::runtime_error("dopri5: step limit");
        if (t + h > t1) h = t1 - t;
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y5, k7);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(ei) / sc);
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7; // first-same-as-last
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
    }
}

struct Pool {
    double H, g, tau0, Ea_meV, coupling;
};

struct Device {
    bool inhibitory;
    double n0, mu0, L, W, thick, V;
    std::vector<Pool> pools;
};

struct Pulse {
    double start, duration, intensity;
};

inline double current(const Device& d, const Vec& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += d.pools[i].coupling * h[i];
    const double q = 1.602176634e-19;
    const double n = d.inhibitory ? d.n0 : d.n0 * (1.0 + s);
    const double mu = d.inhibitory ? d.mu0 / (1.0 + s) : d.mu0;
    return d.V * (n * q * mu) * d.W * d.thick / d.L;
}

// Current at each requested time (ascending) under the given pulses.
inline std::vector<double> simulate(const Device& d, const std::vector<Pulse>& pulses, double T,
                                    const std::vector<double>& times, const Tolerance& tol = {}) {
    const double kB = 8.617333e-2;
    std::vector<double> tau(d.pools.size());
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = d.pools[i].tau0 * std::exp(d.pools[i].Ea_meV / (kB * T));

    // The right-hand side is discontinuous at pulse edges, so integration is
    // restarted there.
    std::vector<double> edges;
    for (const auto& p : pulses) {
        edges.push_back(p.start);
        edges.push_back(p.start + p.duration);
    }
    auto intensity_at = [&](double a, double b) {
        const double mid = 0.5 * (a + b);
        for (const auto& p : pulses)
            if (mid > p.start && mid < p.start + p.duration) return p.intensity;
        return 0.0;
    };

    Vec y(d.pools.size(), 0.0);
    double t = 0.0;
    std::vector<double> out;
    for (double target : times) {
        while (t < target) {
            double next = target;
            for (double e : edges)
                if (e > t && e < next) next = e;
            const double phi = intensity_at(t, next);
            Rhs f = [&](double, const Vec& h, Vec& dh) {
                for (std::size_t i = 0; i < h.size(); ++i) {
                    const auto& p = d.pools[i];
                    dh[i] = p.g * phi * (1.0 - h[i] / p.H) - h[i] / tau[i];
                }
            };
            dopri5(f, t, next, y, tol);
            t = next;
        }
        out.push_back(current(d, y));
    }
    return out;
}

} // namespace oracle
