#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "error.hpp"
#include "fitting.hpp"
#include "kinetics.hpp"
#include "models.hpp"

namespace scnsyn::io {

using nlohmann::json;

// Shortest text that round-trips; identical inputs give identical bytes.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw InputError("write failed for '" + path.string() + "'");
}

namespace detail {

inline std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline double parse_number(const std::string& s, const std::string& where) {
    if (s.empty()) throw InputError(where + ": empty field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw InputError(where + ": not a number: '" + s + "'");
    return v;
}

struct Table {
    std::vector<std::pair<std::string, std::string>> meta; // from "# key=value" lines
    std::vector<std::vector<double>> rows;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : meta)
            if (k == key) return &v;
        return nullptr;
    }
};

// Comment lines may appear anywhere; the first other line is the header.
inline Table read_table(const std::string& text, const std::vector<std::string>& header, const std::string& what) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool seen_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) t.meta.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
            continue;
        }
        const auto cols = split(line);
        const std::string where = what + " line " + std::to_string(lineno);
        if (!seen_header) {
            if (cols != header) {
                std::string expect;
                for (std::size_t i = 0; i < header.size(); ++i) expect += (i ? "," : "") + header[i];
                throw InputError(where + ": expected header '" + expect + "'");
            }
            seen_header = true;
            continue;
        }
        if (cols.size() != header.size())
            throw InputError(where + ": expected " + std::to_string(header.size()) + " fields");
        std::vector<double> row;
        for (const auto& c : cols) row.push_back(parse_number(c, where));
        t.rows.push_back(std::move(row));
    }
    if (!seen_header) throw InputError(what + ": missing header");
    return t;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Traces

inline std::string trace_to_csv(const Trace& tr) {
    std::string s;
    s += "# read_voltage_V=" + fmt(tr.read_voltage) + "\n";
    s += "# temperature_K=" + fmt(tr.temperature) + "\n";
    s += "# label=" + tr.label + "\n";
    s += "t_s,I_A\n";
    for (std::size_t i = 0; i < tr.size(); ++i) s += fmt(tr.t[i]) + "," + fmt(tr.current[i]) + "\n";
    return s;
}

inline Trace trace_from_csv(const std::string& text, const std::string& what = "trace") {
    const auto tab = detail::read_table(text, {"t_s", "I_A"}, what);
    Trace tr;
    if (const auto* v = tab.find("read_voltage_V")) tr.read_voltage = detail::parse_number(*v, what + " read_voltage_V");
    if (const auto* v = tab.find("temperature_K")) tr.temperature = detail::parse_number(*v, what + " temperature_K");
    if (const auto* v = tab.find("label")) tr.label = *v;
    for (const auto& r : tab.rows) {
        tr.t.push_back(r[0]);
        tr.current.push_back(r[1]);
    }
    tr.validate();
    return tr;
}

inline json trace_to_json(const Trace& tr) {
    return {{"read_voltage_V", tr.read_voltage},
            {"temperature_K", tr.temperature},
            {"label", tr.label},
            {"t_s", tr.t},
            {"I_A", tr.current}};
}

inline Trace trace_from_json(const json& j, const std::string& what = "trace") {
    try {
        Trace tr;
        tr.read_voltage = j.value("read_voltage_V", 0.0);
        tr.temperature = j.value("temperature_K", 300.0);
        tr.label = j.value("label", std::string{});
        tr.t = j.at("t_s").get<std::vector<double>>();
        tr.current = j.at("I_A").get<std::vector<double>>();
        tr.validate();
        return tr;
    } catch (const json::exception& e) {
        throw InputError(what + ": " + e.what());
    }
}

// Reads a trace from .csv or .json by extension.
inline Trace load_trace(const std::string& path) {
    const auto text = read_file(path);
    if (std::filesystem::path(path).extension() == ".json") {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw InputError(path + ": invalid JSON: " + e.what());
        }
        return trace_from_json(j, path);
    }
    return trace_from_csv(text, path);
}

// ---------------------------------------------------------------------------
// Spectra and Hall series

inline std::string spectrum_to_csv(const OpticalSpectrum& sp) {
    std::string s = "# thickness_cm=" + fmt(sp.thickness_cm) + "\n";
    s += "wavelength_nm,transmittance,reflectance\n";
    for (const auto& p : sp.points)
        s += fmt(p.wavelength_nm) + "," + fmt(p.transmittance) + "," + fmt(p.reflectance) + "\n";
    return s;
}

// `thickness_cm` overrides (or stands in for) the file's metadata line.
inline OpticalSpectrum spectrum_from_csv(const std::string& text, std::optional<double> thickness_cm = std::nullopt,
                                         const std::string& what = "spectrum") {
    const auto tab = detail::read_table(text, {"wavelength_nm", "transmittance", "reflectance"}, what);
    OpticalSpectrum sp;
    if (thickness_cm)
        sp.thickness_cm = *thickness_cm;
    else if (const auto* v = tab.find("thickness_cm"))
        sp.thickness_cm = detail::parse_number(*v, what + " thickness_cm");
    else
        throw InputError(what + ": film thickness missing (add '# thickness_cm=' or pass it explicitly)");
    for (const auto& r : tab.rows) sp.points.push_back({r[0], r[1], r[2]});
    sp.validate();
    return sp;
}

inline std::string hall_to_csv(const HallSeries& h) {
    std::string s = "t_s,n_cm3,mu_cm2Vs\n";
    for (const auto& x : h.samples) s += fmt(x.t) + "," + fmt(x.n) + "," + fmt(x.mu) + "\n";
    return s;
}

inline HallSeries hall_from_csv(const std::string& text, const std::string& what = "hall") {
    const auto tab = detail::read_table(text, {"t_s", "n_cm3", "mu_cm2Vs"}, what);
    HallSeries h;
    for (const auto& r : tab.rows) h.samples.push_back({r[0], r[1], r[2]});
    h.validate();
    return h;
}

// ---------------------------------------------------------------------------
// Fit reports and plot tables

inline json model_to_json(const KineticModelParams& m) {
    json j = {{"kind", to_string(m.kind)}, {"t0", m.t0}};
    if (m.kind == ModelKind::Wickelgren) {
        j["lambda"] = m.lambda;
        j["beta_scale"] = m.beta_scale;
        j["psi"] = m.psi;
    } else {
        j["I0"] = m.I0;
        j["amplitudes"] = m.amplitudes;
        j["taus"] = m.taus;
        if (m.kind == ModelKind::Stretched) j["beta_stretch"] = m.beta_stretch;
    }
    return j;
}

inline json fit_report_to_json(const FitReport& r) {
    json var = json::object();
    for (std::size_t i = 0; i < r.param_names.size() && i < r.variance.size(); ++i)
        var[r.param_names[i]] = r.variance[i];
    return {{"model", model_to_json(r.model)},
            {"variance", var},
            {"rss", r.rss},
            {"aicc", r.aicc},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"gradient_norm", r.gradient_norm},
            {"n_samples", r.n_samples},
            {"n_params", r.n_params}};
}

// Plot-ready two-column table.
inline std::string xy_csv(const std::string& xname, const std::string& yname, const std::vector<double>& x,
                          const std::vector<double>& y) {
    if (x.size() != y.size()) throw InputError("xy table: column lengths differ");
    std::string s = xname + "," + yname + "\n";
    for (std::size_t i = 0; i < x.size(); ++i) s += fmt(x[i]) + "," + fmt(y[i]) + "\n";
    return s;
}

inline json error_json(const std::string& kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

} // namespace scnsyn::io
