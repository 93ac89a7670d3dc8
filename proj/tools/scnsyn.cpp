// scnsyn: command-line front end for the simulator, protocol drivers, fits
// and spectrum analysis. Run `scnsyn --help` for usage.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <scnsyn/scnsyn.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scnsyn;

namespace {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* v = std::getenv("SCNSYN_LOG");
    if (!v) return LogLevel::Info;
    const std::string s = v;
    if (s == "quiet" || s == "0" || s == "error") return LogLevel::Quiet;
    if (s == "debug" || s == "2") return LogLevel::Debug;
    return LogLevel::Info;
}

void log(LogLevel lvl, const std::string& msg) {
    if (static_cast<int>(lvl) <= static_cast<int>(log_level())) std::cerr << "scnsyn: " << msg << "\n";
}

struct Common {
    std::string config = "scn-inhibitory-default";
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<double> temperature;
};

void add_common(CLI::App* sub, Common& c, bool with_config = true) {
    if (with_config)
        sub->add_option("--config", c.config, "Config file path or preset name")->capture_default_str();
    sub->add_option("--out", c.out, "Output directory (overrides the config)");
    sub->add_option("--format", c.format, "csv|json|both (overrides the config)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_option("--seed", c.seed, "Seed for synthetic noise");
    sub->add_option("--temperature", c.temperature, "Temperature override, K");
}

RunConfig resolve(const Common& c) {
    RunConfig rc = load_run_config(c.config);
    if (!c.out.empty()) rc.output.directory = c.out;
    if (!c.format.empty()) rc.output.format = output_format_from_string(c.format);
    if (c.seed) rc.seed = *c.seed;
    if (c.temperature) rc.environment.temperature = *c.temperature;
    rc.validate();
    return rc;
}

bool want_csv(OutputFormat f) { return f != OutputFormat::Json; }
bool want_json(OutputFormat f) { return f != OutputFormat::Csv; }

void emit(const fs::path& path, const std::string& content) {
    io::write_file(path, content);
    log(LogLevel::Debug, "wrote " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : io::detail::split(s)) out.push_back(io::detail::parse_number(tok, "value list"));
    if (out.empty()) throw InputError("empty value list");
    return out;
}

json protocol_record(const std::string& name, const RunConfig& rc, json metrics) {
    return {{"protocol", name}, {"config", to_json(rc)}, {"metrics", std::move(metrics)}};
}

// Writes `<stem>.json` (record) and `<stem>.csv` (plot table) as requested.
void write_result(const RunConfig& rc, const std::string& stem, const json& record, const std::string& csv) {
    const fs::path dir = rc.output.directory;
    // The plot table is always written.
    emit(dir / (stem + ".csv"), csv);
    if (want_json(rc.output.format)) emit(dir / (stem + ".json"), dump(record));
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Common& c) {
    const RunConfig rc = resolve(c);
    const auto rec = simulate_detailed(rc.device, rc.stimulus, rc.environment.temperature,
                                       rc.environment.sample_dt, rc.t_end());
    Trace tr{rec.t, rec.current, rc.device.read_voltage, rc.environment.temperature, rc.device.label};
    if (rc.noise_relative > 0.0) {
        std::mt19937_64 rng(rc.seed);
        std::normal_distribution<double> noise(0.0, rc.noise_relative * std::abs(dark_conductivity(rc.device).dark_current));
        for (auto& i : tr.current) i += noise(rng);
    }
    const fs::path dir = rc.output.directory;
    if (want_csv(rc.output.format)) {
        emit(dir / "trace.csv", io::trace_to_csv(tr));
        emit(dir / "hall.csv", io::hall_to_csv(HallSeries::from_simulation(rec)));
    }
    if (want_json(rc.output.format)) emit(dir / "trace.json", dump(io::trace_to_json(tr)));
    log(LogLevel::Info, "simulated " + std::to_string(tr.size()) + " samples into " + dir.string());
    return 0;
}

json retention_json(double value, const RetentionResult& r) {
    return {{"value", value},
            {"delta_I_at_off_A", r.delta_I_at_off},
            {"retention_time_s", r.retention_time},
            {"classification", to_string(r.classification)},
            {"open_ended", r.open_ended}};
}

std::string retention_csv(const std::string& axis, const std::vector<double>& values,
                          const std::vector<RetentionResult>& res) {
    std::vector<double> rt;
    for (const auto& r : res) rt.push_back(r.retention_time);
    return io::xy_csv(axis, "retention_s", values, rt);
}

struct ProtocolArgs {
    std::string which;
    std::string axis;
    std::string values;
    std::string gate;
    std::optional<double> threshold;
    std::optional<double> frequency;
};

int cmd_protocol(const Common& c, const ProtocolArgs& a) {
    RunConfig rc = resolve(c);
    if (!a.axis.empty()) rc.protocol.sweep.axis = stimulus_axis_from_string(a.axis);
    if (!a.values.empty()) rc.protocol.sweep.values = parse_list(a.values);
    if (!a.gate.empty()) rc.protocol.gate.gate = gate_from_string(a.gate);
    if (a.threshold) rc.protocol.gate.threshold = *a.threshold;
    if (a.frequency) rc.protocol.ppf_frequency = *a.frequency;
    rc.validate();
    const auto s = rc.settings();
    const auto& d = rc.device;

    if (a.which == "stm-ltm") {
        const auto& sw = rc.protocol.sweep;
        const auto res = stm_ltm_sweep(d, sw.axis, sw.values, s);
        json rows = json::array();
        for (std::size_t i = 0; i < res.size(); ++i) rows.push_back(retention_json(sw.values[i], res[i]));
        write_result(rc, "stm-ltm", protocol_record("stm-ltm", rc, {{"axis", to_string(sw.axis)}, {"points", rows}}),
                     retention_csv(to_string(sw.axis), sw.values, res));
    } else if (a.which == "learning") {
        const double thr = s.learning_threshold_relative * std::abs(dark_conductivity(d).dark_current);
        const auto cycles = learning_forgetting(d, thr, s.learning_cycles, s.learning_rest, s);
        json rows = json::array();
        std::vector<double> idx, pulses;
        for (const auto& cy : cycles) {
            json row = {{"cycle", cy.cycle_index},
                        {"pulses_to_threshold", cy.pulses_to_threshold},
                        {"delta_at_threshold_A", cy.delta_at_threshold},
                        {"off_time_s", cy.off_time}};
            try {
                const auto fr = fit_wickelgren(cy.forgetting_trace, cy.off_time);
                row["wickelgren"] = {{"lambda", fr.model.lambda},
                                     {"beta_scale", fr.model.beta_scale},
                                     {"psi", fr.model.psi},
                                     {"converged", fr.converged}};
            } catch (const Error& e) {
                row["wickelgren"] = {{"error", e.what()}};
            }
            rows.push_back(row);
            idx.push_back(cy.cycle_index);
            pulses.push_back(cy.pulses_to_threshold);
            if (want_csv(rc.output.format))
                emit(fs::path(rc.output.directory) / ("learning_cycle_" + std::to_string(cy.cycle_index) + ".csv"),
                     io::trace_to_csv(cy.forgetting_trace));
        }
        write_result(rc, "learning",
                     protocol_record("learning", rc, {{"threshold_delta_A", thr}, {"cycles", rows}}),
                     io::xy_csv("cycle", "pulses_to_threshold", idx, pulses));
    } else if (a.which == "ppf") {
        const auto ix = ppf_index(d, rc.protocol.ppf_frequency, rc.protocol.ppf_pulses, s);
        std::vector<double> k;
        for (std::size_t i = 0; i < ix.size(); ++i) k.push_back(static_cast<double>(i + 2));
        write_result(rc, "ppf",
                     protocol_record("ppf", rc,
                                     {{"frequency_Hz", rc.protocol.ppf_frequency},
                                      {"pulse", k},
                                      {"index_percent", ix}}),
                     io::xy_csv("pulse", "index_percent", k, ix));
    } else if (a.which == "filter") {
        const auto fr = filter_response(d, rc.protocol.frequencies, rc.protocol.ppf_pulses, s);
        std::vector<double> f, g;
        for (const auto& [hz, gain] : fr) {
            f.push_back(hz);
            g.push_back(gain);
        }
        write_result(rc, "filter",
                     protocol_record("filter", rc, {{"frequency_Hz", f}, {"gain_percent", g}}),
                     io::xy_csv("frequency_Hz", "gain_percent", f, g));
    } else if (a.which == "stdp") {
        SeriesPair pair{Synapse::dark(d, s.temperature), Synapse::dark(d, s.temperature)};
        const auto pts = stdp(pair, rc.protocol.stdp_delta_ts, Pulse{0.0, s.pulse_width, s.intensity},
                              s.measure_delay, s.temperature);
        std::vector<double> x, y;
        for (const auto& p : pts) {
            x.push_back(p.delta_t);
            y.push_back(p.delta_G);
        }
        write_result(rc, "stdp", protocol_record("stdp", rc, {{"delta_t_s", x}, {"delta_G_S", y}}),
                     io::xy_csv("delta_t_s", "delta_G_S", x, y));
    } else if (a.which == "logic") {
        SeriesPair pair{Synapse::dark(d, s.temperature), Synapse::dark(d, s.temperature)};
        const GateSpec spec{rc.protocol.gate.gate, rc.protocol.gate.threshold};
        const GateSettings gs{Pulse{0.0, s.pulse_width, s.intensity}, s.measure_delay, s.temperature};
        const auto rows = truth_table(spec, pair, gs);
        const auto G = gate_conductances(pair, gs);
        const auto [lo, hi] = gate_feasibility(spec.gate, G);
        json table = json::array();
        std::vector<double> cases, gnet, outputs;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            table.push_back({{"inputs", {static_cast<int>(rows[i].a), static_cast<int>(rows[i].b)}},
                             {"G_net_S", rows[i].G_net},
                             {"output", static_cast<int>(rows[i].output)}});
            cases.push_back(static_cast<double>(i));
            gnet.push_back(rows[i].G_net);
            outputs.push_back(rows[i].output ? 1.0 : 0.0);
        }
        json metrics = {{"gate", to_string(spec.gate)},
                        {"threshold_S", resolve_threshold(spec, G)},
                        {"threshold_source", spec.threshold ? "user" : "auto"},
                        {"feasible_interval_S", {lo, hi}},
                        {"truth_table", table},
                        {"outputs", outputs}};
        write_result(rc, "logic", protocol_record("logic", rc, metrics), io::xy_csv("case", "G_net_S", cases, gnet));
    } else {
        throw InputError("unknown protocol '" + a.which + "'");
    }
    log(LogLevel::Info, "protocol " + a.which + " written to " + rc.output.directory);
    return 0;
}

struct FitArgs {
    std::vector<std::string> inputs;
    std::string model = "auto";
    int terms = 2;
    std::optional<double> t_start, t_end, off_time;
    std::string out = "out";
    std::string format = "both";
};

FitReport fit_one(const Trace& tr, const FitArgs& a, json& extra) {
    FitWindow w;
    if (a.t_start) w.t_start = *a.t_start;
    if (a.t_end) w.t_end = *a.t_end;
    if (a.model == "auto") {
        fitting::prepare(tr, w, ModelKind::ExpDecay); // rejects constant traces up front
        std::vector<CandidateSpec> cands = {{ModelKind::ExpDecay, 1}, {ModelKind::ExpDecay, 2},
                                            {ModelKind::ExpDecay, 3}, {ModelKind::Stretched, 1}};
        const auto sel = model_select(tr, cands, w);
        if (sel.ranked.empty()) {
            std::string why;
            for (const auto& [c, r] : sel.excluded) why += c + ": " + r + "; ";
            throw InputError("no candidate could be fitted: " + why);
        }
        json ranking = json::array();
        for (const auto& r : sel.ranked)
            ranking.push_back({{"model", to_string(r.model.kind)}, {"n_terms", r.model.n_terms()}, {"aicc", r.aicc}});
        json excluded = json::array();
        for (const auto& [c, r] : sel.excluded) excluded.push_back({{"candidate", c}, {"reason", r}});
        extra = {{"ranking", ranking}, {"excluded", excluded}};
        return sel.ranked.front();
    }
    const ModelKind kind = model_kind_from_string(a.model);
    if (kind == ModelKind::Wickelgren) return fit_wickelgren(tr, a.off_time ? *a.off_time : tr.t.front());
    return fit_transient(tr, kind, kind == ModelKind::Stretched ? 1 : a.terms, w);
}

int cmd_fit(const FitArgs& a) {
    const OutputFormat fmt = output_format_from_string(a.format);
    std::vector<std::string> files;
    for (const auto& in : a.inputs) {
        if (fs::is_directory(in)) {
            std::vector<std::string> found;
            for (const auto& e : fs::directory_iterator(in)) {
                const auto ext = e.path().extension();
                if (e.is_regular_file() && (ext == ".csv" || ext == ".json")) found.push_back(e.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(in);
        }
    }
    if (files.empty()) throw InputError("no trace files to fit");

    const bool batch = files.size() > 1 || (a.inputs.size() == 1 && fs::is_directory(a.inputs[0]));
    std::string summary = "file,model,n_terms,rss,aicc,converged,status\n";
    std::optional<Error> first_error;
    for (const auto& f : files) {
        const std::string stem = fs::path(f).stem().string();
        try {
            const Trace tr = io::load_trace(f);
            json extra;
            const FitReport rep = fit_one(tr, a, extra);
            json j = io::fit_report_to_json(rep);
            j["source"] = fs::path(f).filename().string();
            if (!extra.is_null()) j["selection"] = extra;
            if (want_json(fmt)) emit(fs::path(a.out) / (stem + ".fit.json"), dump(j));
            if (want_csv(fmt)) {
                // Fitted curve next to the data, for plotting.
                std::vector<double> y;
                for (double t : tr.t) y.push_back(t >= rep.model.t0 ? eval_model(rep.model, t) : tr.current.front());
                emit(fs::path(a.out) / (stem + ".fit.csv"), io::xy_csv("t_s", "I_fit_A", tr.t, y));
            }
            summary += fs::path(f).filename().string() + "," + to_string(rep.model.kind) + "," +
                       std::to_string(rep.model.n_terms()) + "," + io::fmt(rep.rss) + "," + io::fmt(rep.aicc) + "," +
                       (rep.converged ? "true" : "false") + ",ok\n";
        } catch (const Error& e) {
            if (!batch) throw;
            log(LogLevel::Info, f + ": " + e.what());
            summary += fs::path(f).filename().string() + ",,,,,," + e.kind() + "\n";
            if (!first_error) first_error = e;
        }
    }
    if (batch) emit(fs::path(a.out) / "fit_summary.csv", summary);
    if (first_error) throw *first_error;
    return 0;
}

struct TaucArgs {
    std::string input;
    std::optional<double> thickness_cm;
    std::string window;
    std::string out = "out";
    std::string format = "both";
};

int cmd_tauc(const TaucArgs& a) {
    const OutputFormat fmt = output_format_from_string(a.format);
    const auto sp = io::spectrum_from_csv(io::read_file(a.input), a.thickness_cm, a.input);
    std::optional<std::pair<double, double>> win;
    if (!a.window.empty()) {
        const auto v = parse_list(a.window);
        if (v.size() != 2) throw InputError("--window takes two energies: LO,HI");
        win = std::make_pair(v[0], v[1]);
    }
    const auto res = tauc_bandgap(sp, win);
    const auto ab = absorption_coefficient(sp);
    std::vector<double> e, y;
    for (const auto& p : ab) {
        e.push_back(p.energy_eV);
        y.push_back((p.alpha * p.energy_eV) * (p.alpha * p.energy_eV));
    }
    json j = {{"bandgap_eV", res.bandgap_eV},
              {"slope", res.slope},
              {"r_squared", res.r_squared},
              {"window_eV", {res.window_lo, res.window_hi}},
              {"window_source", win ? "user" : "auto"},
              {"n_points", res.n_points},
              {"source", fs::path(a.input).filename().string()}};
    emit(fs::path(a.out) / "tauc.csv", io::xy_csv("energy_eV", "alphaE_sq", e, y));
    if (want_json(fmt)) emit(fs::path(a.out) / "tauc.json", dump(j));
    log(LogLevel::Info, "Eg = " + io::fmt(res.bandgap_eV) + " eV");
    return 0;
}

int cmd_sweep(const Common& c, const std::string& axis, const std::string& values) {
    RunConfig rc = resolve(c);
    if (!axis.empty()) rc.protocol.sweep.axis = stimulus_axis_from_string(axis);
    if (!values.empty()) rc.protocol.sweep.values = parse_list(values);
    const auto s = rc.settings();
    const auto& sw = rc.protocol.sweep;
    // Validate ordering and the stimulus for every point before fanning out.
    stm_ltm_sweep(rc.device, sw.axis, {sw.values.front()}, s);
    for (std::size_t i = 1; i < sw.values.size(); ++i)
        if (sw.values[i] < sw.values[i - 1]) throw InputError("sweep values must be sorted ascending");

    std::vector<std::future<RetentionResult>> jobs;
    for (double v : sw.values)
        jobs.push_back(std::async(std::launch::async, [&rc, &s, axis = sw.axis, v] {
            return retention_for_train(rc.device, sweep_stimulus(axis, v, s), s);
        }));
    std::vector<RetentionResult> res;
    for (auto& j : jobs) res.push_back(j.get());

    std::string csv = std::string(to_string(sw.axis)) + ",delta_I_at_off_A,retention_s,classification,open_ended\n";
    json rows = json::array();
    for (std::size_t i = 0; i < res.size(); ++i) {
        csv += io::fmt(sw.values[i]) + "," + io::fmt(res[i].delta_I_at_off) + "," + io::fmt(res[i].retention_time) +
               "," + to_string(res[i].classification) + "," + (res[i].open_ended ? "true" : "false") + "\n";
        rows.push_back(retention_json(sw.values[i], res[i]));
    }
    const fs::path dir = rc.output.directory;
    emit(dir / "sweep.csv", csv);
    if (want_json(rc.output.format))
        emit(dir / "sweep.json", dump(protocol_record("sweep", rc, {{"axis", to_string(sw.axis)}, {"points", rows}})));
    log(LogLevel::Info, "sweep of " + std::to_string(res.size()) + " points written to " + dir.string());
    return 0;
}

int fail(const std::string& kind, const std::string& message, int code) {
    std::cout << io::error_json(kind, message).dump() << std::endl;
    log(LogLevel::Info, kind + ": " + message);
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trap-kinetics simulator for optically stimulated ScN synapses"};
    app.require_subcommand(1);

    Common sim_c;
    auto* sim = app.add_subcommand("simulate", "Simulate the config's stimulus and write the trace");
    add_common(sim, sim_c);

    Common pro_c;
    ProtocolArgs pro_a;
    auto* pro = app.add_subcommand("protocol", "Run a synaptic protocol");
    pro->add_option("which", pro_a.which, "stm-ltm|learning|ppf|filter|stdp|logic")
        ->required()
        ->check(CLI::IsMember({"stm-ltm", "learning", "ppf", "filter", "stdp", "logic"}));
    add_common(pro, pro_c);
    pro->add_option("--axis", pro_a.axis, "stm-ltm: number|duration|intensity|frequency");
    pro->add_option("--values", pro_a.values, "stm-ltm: comma-separated ascending values");
    pro->add_option("--gate", pro_a.gate, "logic: OR|AND|NOR|NAND");
    pro->add_option("--threshold", pro_a.threshold, "logic: net-conductance threshold, S");
    pro->add_option("--frequency", pro_a.frequency, "ppf: pulse frequency, Hz");

    FitArgs fit_a;
    auto* fit = app.add_subcommand("fit", "Fit kinetic models to trace files");
    fit->add_option("inputs", fit_a.inputs, "Trace files (.csv/.json) or directories")->required();
    fit->add_option("--model", fit_a.model, "auto|exp-decay|exp-rise|stretched|wickelgren")->capture_default_str();
    fit->add_option("--terms", fit_a.terms, "Number of exponential terms")->capture_default_str();
    fit->add_option("--t-start", fit_a.t_start, "Fit window start, s");
    fit->add_option("--t-end", fit_a.t_end, "Fit window end, s");
    fit->add_option("--off-time", fit_a.off_time, "Wickelgren origin, s");
    fit->add_option("--out", fit_a.out, "Output directory")->capture_default_str();
    fit->add_option("--format", fit_a.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));

    TaucArgs tauc_a;
    auto* tauc = app.add_subcommand("tauc", "Direct-gap Tauc analysis of a transmission/reflection spectrum");
    tauc->add_option("spectrum", tauc_a.input, "Spectrum CSV")->required();
    tauc->add_option("--thickness-cm", tauc_a.thickness_cm, "Film thickness, cm (overrides the file)");
    tauc->add_option("--window", tauc_a.window, "Fit window LO,HI in eV (default: automatic)");
    tauc->add_option("--out", tauc_a.out, "Output directory")->capture_default_str();
    tauc->add_option("--format", tauc_a.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));

    Common sw_c;
    std::string sw_axis, sw_values;
    auto* sweep = app.add_subcommand("sweep", "Retention sweep along one stimulus axis, run concurrently");
    add_common(sweep, sw_c);
    sweep->add_option("--axis", sw_axis, "number|duration|intensity|frequency");
    sweep->add_option("--values", sw_values, "Comma-separated ascending values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage_error", e.what(), 64);
    }

    try {
        if (*sim) return cmd_simulate(sim_c);
        if (*pro) return cmd_protocol(pro_c, pro_a);
        if (*fit) return cmd_fit(fit_a);
        if (*tauc) return cmd_tauc(tauc_a);
        if (*sweep) return cmd_sweep(sw_c, sw_axis, sw_values);
    } catch (const Error& e) {
        return fail(e.kind(), e.what(), 2);
    } catch (const std::exception& e) {
        return fail("internal_error", e.what(), 70);
    }
    return 0;
}
