#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fitting.hpp"
#include "kinetics.hpp"
#include "units.hpp"

namespace scnsyn {

struct HallSample {
    double t;  // s
    double n;  // cm^-3
    double mu; // cm^2/(V s)

    double sigma() const { return n * units::elementary_charge * mu; } // S/cm
};

struct HallSeries {
    std::vector<HallSample> samples;

    void validate() const {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto& s = samples[i];
            if (!(s.n > 0.0) || !(s.mu > 0.0))
                throw DomainError("Hall sample " + std::to_string(i) + ": n and mu must be > 0");
            if (!std::isfinite(s.t)) throw InputError("Hall sample " + std::to_string(i) + ": non-finite time");
            if (i > 0 && !(s.t > samples[i - 1].t)) throw InputError("Hall series times must increase strictly");
        }
    }

    // Hall series of a simulated device, taken at each simulation sample.
    static HallSeries from_simulation(const SimulationRecord& rec) {
        HallSeries h;
        h.samples.reserve(rec.t.size());
        for (std::size_t i = 0; i < rec.t.size(); ++i) h.samples.push_back({rec.t[i], rec.n[i], rec.mu[i]});
        return h;
    }
};

struct HallConsistency {
    double pearson_r = 0.0;
    double max_rel_dev = 0.0;
    std::size_t n_points = 0;
};

// Both curves are normalized by their value at the first shared instant.
inline HallConsistency hall_consistency(const HallSeries& series, const Trace& trace) {
    series.validate();
    trace.validate();
    if (trace.t.empty()) throw InputError("trace: empty");
    std::vector<double> a, b;
    for (const auto& s : series.samples) {
        if (s.t < trace.t.front() || s.t > trace.t.back()) continue;
        a.push_back(s.n * s.mu);
        b.push_back(trace.interpolate(s.t));
    }
    if (a.size() < 3)
        throw InputError("Hall series and trace overlap in " + std::to_string(a.size()) + " points; need 3");
    if (a.front() == 0.0 || b.front() == 0.0) throw DomainError("cannot normalize by a zero first value");
    const double a0 = a.front(), b0 = b.front();
    HallConsistency out;
    out.n_points = a.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] /= a0;
        b[i] /= b0;
        out.max_rel_dev = std::max(out.max_rel_dev, std::abs(b[i] - a[i]) / std::abs(a[i]));
    }
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    // Two flat curves are perfectly consistent.
    out.pearson_r = (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : (saa == sbb ? 1.0 : 0.0);
    return out;
}

struct SpectrumPoint {
    double wavelength_nm;
    double transmittance;
    double reflectance;
};

struct OpticalSpectrum {
    std::vector<SpectrumPoint> points;
    double thickness_cm = 0.0;

    void validate() const {
        if (!(thickness_cm > 0.0)) throw DomainError("film thickness must be > 0");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            const std::string tag = "spectrum point " + std::to_string(i) + ": ";
            if (!(p.wavelength_nm > 0.0)) throw DomainError(tag + "wavelength must be > 0");
            if (!(p.transmittance >= 0.0) || !(p.reflectance >= 0.0))
                throw DomainError(tag + "T and R must be >= 0");
            if (p.transmittance + p.reflectance > 1.0 + 1e-12) throw DomainError(tag + "T + R exceeds 1");
        }
    }
};

struct AbsorptionPoint {
    double energy_eV;
    double alpha; // cm^-1
};

// alpha = ln((1 - R) / T) / d, on an ascending photon-energy axis.
inline std::vector<AbsorptionPoint> absorption_coefficient(const OpticalSpectrum& spec) {
    spec.validate();
    std::vector<AbsorptionPoint> out;
    out.reserve(spec.points.size());
    for (const auto& p : spec.points) {
        if (!(p.transmittance > 0.0))
            throw DomainError("transmittance is zero at " + std::to_string(p.wavelength_nm) + " nm");
        out.push_back({units::hc_eV_nm / p.wavelength_nm,
                       std::log((1.0 - p.reflectance) / p.transmittance) / spec.thickness_cm});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const AbsorptionPoint& a, const AbsorptionPoint& b) { return a.energy_eV < b.energy_eV; });
    return out;
}

struct TaucResult {
    double bandgap_eV = 0.0;
    double slope = 0.0; // (cm^-1 eV)^2 per eV
    double r_squared = 0.0;
    double window_lo = 0.0; // eV
    double window_hi = 0.0; // eV
    std::size_t n_points = 0;
};

namespace detail {

inline TaucResult tauc_line(const std::vector<double>& e, const std::vector<double>& y) {
    const auto lf = fitting::fit_line(e, y);
    if (!(lf.slope > 0.0)) throw NoEdgeError("Tauc plot has no rising absorption edge in the window");
    TaucResult r;
    r.slope = lf.slope;
    r.bandgap_eV = -lf.intercept / lf.slope;
    r.r_squared = lf.r_squared;
    r.window_lo = e.front();
    r.window_hi = e.back();
    r.n_points = e.size();
    return r;
}

} // namespace detail

// Linear fit of (alpha E)^2 against E. Without a window, the fit uses the
// contiguous run of points with the steepest line (at least 5 points, or a
// fifth of the spectrum).
inline TaucResult tauc_bandgap(const OpticalSpectrum& spec,
                               std::optional<std::pair<double, double>> fit_window = std::nullopt) {
    const auto ab = absorption_coefficient(spec);
    std::vector<double> e, y;
    for (const auto& p : ab) {
        e.push_back(p.energy_eV);
        y.push_back((p.alpha * p.energy_eV) * (p.alpha * p.energy_eV));
    }
    if (fit_window) {
        const auto [lo, hi] = *fit_window;
        if (!(hi > lo)) throw InputError("Tauc window must satisfy lo < hi");
        std::vector<double> we, wy;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] >= lo && e[i] <= hi) {
                we.push_back(e[i]);
                wy.push_back(y[i]);
            }
        if (we.size() < 5)
            throw InputError("Tauc window holds " + std::to_string(we.size()) + " points; need at least 5");
        return detail::tauc_line(we, wy);
    }
    if (e.size() < 5) throw InputError("Tauc analysis needs at least 5 spectrum points");
    const std::size_t w = std::max<std::size_t>(5, e.size() / 5);
    std::size_t best = 0;
    double best_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + w <= e.size(); ++i) {
        const std::vector<double> we(e.begin() + static_cast<std::ptrdiff_t>(i),
                                     e.begin() + static_cast<std::ptrdiff_t>(i + w));
        const std::vector<double> wy(y.begin() + static_cast<std::ptrdiff_t>(i),
                                     y.begin() + static_cast<std::ptrdiff_t>(i + w));
        const double s = fitting::fit_line(we, wy).slope;
        if (s > best_slope * (1.0 + 1e-9)) {
            best_slope = s;
            best = i;
        }
    }
    const std::vector<double> we(e.begin() + static_cast<std::ptrdiff_t>(best),
                                 e.begin() + static_cast<std::ptrdiff_t>(best + w));
    const std::vector<double> wy(y.begin() + static_cast<std::ptrdiff_t>(best),
                                 y.begin() + static_cast<std::ptrdiff_t>(best + w));
    return detail::tauc_line(we, wy);
}

} // namespace scnsyn
