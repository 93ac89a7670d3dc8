// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <scnsyn/scnsyn.hpp>

#include "oracle/rk45.hpp"

using namespace scnsyn;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

template <class... Args>
std::string strf(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

DeviceParams transport_only(double n0, double mu0) {
    DeviceParams d;
    d.polarity = Polarity::Inhibitory;
    d.n0 = n0;
    d.mu0 = mu0;
    d.length = d.width = d.thickness = 1.0;
    d.read_voltage = 1.0;
    d.pools = {{1, 0, 1, 0, 0}, {1, 0, 1, 0, 0}};
    return d;
}

Outcome c1_transport() {
    const double rho1 = 1.0 / dark_conductivity(transport_only(3e20, 67)).sigma;
    const double rho3 = 1.0 / dark_conductivity(transport_only(5e18, 9.7)).sigma;
    const double e1 = std::abs(rho1 / 3e-4 - 1.0), e3 = std::abs(rho3 / 0.127 - 1.0);
    return {e1 <= 0.05 && e3 <= 0.05,
            strf("rho=%.4g ohm cm (%.2f%% off), rho=%.4g ohm cm (%.2f%% off)", rho1, 100 * e1, rho3, 100 * e3)};
}

Outcome c2_power_density() {
    const double p1 = power_density(0.02, 79.6e-9, 7.2 * 1.7, 1.0);
    const double p2 = power_density(1.0, 9.12e-9, 6.1 * 2.3, 1.0);
    const double e1 = std::abs(p1 / 0.13 - 1.0), e2 = std::abs(p2 / 0.65 - 1.0);
    return {e1 <= 0.01 && e2 <= 0.01, strf("%.4g and %.4g nW/mm^2", p1, p2)};
}

// Closed-form stepping against adaptive integration of the raw ODE, on
// randomized devices, trains and temperatures.
Outcome c3_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto logu = [&](double a, double b) { return std::exp(std::log(a) + (std::log(b) - std::log(a)) * U(rng)); };
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const bool inhib = U(rng) < 0.5;
        DeviceParams d;
        d.polarity = inhib ? Polarity::Inhibitory : Polarity::Excitatory;
        d.n0 = logu(1e16, 1e21);
        d.mu0 = logu(0.1, 100);
        d.length = 0.1 + U(rng);
        d.width = 0.1 + U(rng);
        d.thickness = logu(1e-6, 1e-4);
        d.read_voltage = 0.01 + U(rng);
        const double T = 80 + 320 * U(rng);
        const int npools = static_cast<int>(d.min_pools()) + static_cast<int>(U(rng) * 2);
        for (int i = 0; i < npools; ++i) {
            const double Ea = 60 * U(rng);
            const double tau = logu(0.05, 2000);
            const double tau0 = tau / std::exp(Ea / (units::boltzmann_meV * T));
            d.pools.push_back({0.1 + 1.9 * U(rng), logu(1e-5, 0.05), tau0, Ea, logu(1e-3, 1.0)});
        }
        std::vector<Pulse> ps;
        double t = 2.0 * U(rng);
        const int npulses = 1 + static_cast<int>(U(rng) * 8);
        for (int k = 0; k < npulses; ++k) {
            const double w = logu(0.1, 30);
            ps.push_back({t, w, 1.0 + 59.0 * U(rng)});
            t += w + (U(rng) < 0.2 ? 0.0 : logu(0.1, 30));
        }
        const PulseTrain train(ps);
        const double t_end = train.end_time() + logu(1.0, 300);
        const double dt = t_end / (20 + std::floor(U(rng) * 300));
        const Trace tr = simulate(d, train, T, dt, t_end);

        oracle::Device od{inhib, d.n0, d.mu0, d.length, d.width, d.thickness, d.read_voltage, {}};
        for (const auto& p : d.pools) od.pools.push_back({p.capacity, p.fill_coeff, p.tau0, p.activation_meV, p.coupling});
        std::vector<oracle::Pulse> ops;
        for (const auto& p : ps) ops.push_back({p.start, p.duration, p.intensity});
        const auto ref = oracle::simulate(od, ops, T, tr.t);
        const double i_dark = oracle::current(od, oracle::Vec(d.pools.size(), 0.0));

        double peak = 0.0, err = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            peak = std::max(peak, std::abs(ref[i] - i_dark));
            err = std::max(err, std::abs((tr.current[i] - i_dark) - (ref[i] - i_dark)));
        }
        if (peak > 0.0) worst = std::max(worst, err / peak);
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-6 && secs < 60.0, strf("worst relative deviation %.3g, %.1f s", worst, secs)};
}

Trace synthetic(const std::vector<double>& t, const std::function<double(double)>& f, double sigma,
                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, sigma);
    Trace tr;
    for (double x : t) {
        tr.t.push_back(x);
        tr.current.push_back(f(x) + (sigma > 0 ? N(rng) : 0.0));
    }
    return tr;
}

std::vector<double> grid(double a, double b, double dt) {
    std::vector<double> t;
    for (int k = 0; a + k * dt <= b + 1e-9; ++k) t.push_back(a + k * dt);
    return t;
}

Outcome c4_fit_recovery() {
    const auto t = grid(0, 1000, 1.0);
    auto f = [](double x) { return std::exp(-x / 25.0) + std::exp(-x / 200.0); };
    int ok = 0;
    double worst_err = 0.0, slowest = 0.0;
    for (int seed = 0; seed < 50; ++seed) {
        const auto tr = synthetic(t, f, 0.01 * 2.0, 1000 + static_cast<std::uint64_t>(seed));
        const auto t0 = Clock::now();
        const auto rep = fit_transient(tr, ModelKind::ExpDecay, 2);
        const double secs = seconds_since(t0);
        slowest = std::max(slowest, secs);
        const double e = std::max(std::abs(rep.model.taus[0] / 25.0 - 1), std::abs(rep.model.taus[1] / 200.0 - 1));
        worst_err = std::max(worst_err, e);
        if (e <= 0.05 && secs < 1.0) ++ok;
    }
    return {ok == 50, strf("%d/50 within 5%%, worst %.2f%%, slowest fit %.3f s", ok, 100 * worst_err, slowest)};
}

Outcome c5_arrhenius() {
    const std::vector<double> Ts{80, 120, 200, 300, 400};
    const double tau0 = 3.13e4, Ea = 30.0;
    std::vector<std::pair<double, double>> exact;
    for (double T : Ts) exact.emplace_back(T, arrhenius_tau(tau0, Ea, T));
    const double rel = std::abs(fit_arrhenius(exact).activation_meV / Ea - 1.0);
    int good = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(s) + 77);
        std::normal_distribution<double> N(0.0, 0.05);
        std::vector<std::pair<double, double>> pts;
        for (double T : Ts) pts.emplace_back(T, arrhenius_tau(tau0, Ea, T) * std::exp(N(rng)));
        if (std::abs(fit_arrhenius(pts).activation_meV - Ea) <= 2.0) ++good;
    }
    const double frac = static_cast<double>(good) / seeds;
    return {rel <= 1e-9 && frac >= 0.95, strf("exact rel. error %.2g; noisy within 2 meV: %.1f%%", rel, 100 * frac)};
}

Outcome c6_model_selection() {
    const std::vector<CandidateSpec> cands{{ModelKind::ExpDecay, 1}, {ModelKind::ExpDecay, 2},
                                           {ModelKind::ExpDecay, 3}, {ModelKind::Stretched, 1}};
    const auto t = grid(0, 2000, 1.0);
    auto rank = [](const ModelSelection& sel, ModelKind k, std::size_t n) {
        for (std::size_t i = 0; i < sel.ranked.size(); ++i)
            if (sel.ranked[i].model.kind == k && (k == ModelKind::Stretched || sel.ranked[i].model.n_terms() == n))
                return static_cast<int>(i);
        return 1000;
    };
    int exp_ok = 0, str_ok = 0;
    const int trials = 10;
    for (int s = 0; s < trials; ++s) {
        const auto tr3 = synthetic(
            t, [](double x) { return 0.2 + std::exp(-x / 5.0) + std::exp(-x / 50.0) + std::exp(-x / 500.0); },
            0.003, 500 + static_cast<std::uint64_t>(s));
        const auto sel3 = model_select(tr3, cands);
        if (rank(sel3, ModelKind::ExpDecay, 3) < rank(sel3, ModelKind::Stretched, 1)) ++exp_ok;
        const auto trs = synthetic(
            t, [](double x) { return 0.2 + 3.0 * std::exp(-std::pow(x / 100.0, 0.5)); }, 0.003,
            900 + static_cast<std::uint64_t>(s));
        const auto sels = model_select(trs, cands);
        if (rank(sels, ModelKind::Stretched, 1) < rank(sels, ModelKind::ExpDecay, 3)) ++str_ok;
    }
    return {exp_ok == trials && str_ok == trials,
            strf("triple-exp truth: exp3 wins %d/%d; stretched truth: stretched wins %d/%d", exp_ok, trials, str_ok,
                 trials)};
}

Outcome c7_stdp() {
    const std::vector<double> dts{-10, -5, -2, -1, 0, 1, 2, 5, 10};
    bool ok = true;
    std::string detail;
    for (const auto& name : presets::names()) {
        const auto rc = presets::get(name);
        const auto s = rc.settings();
        const SeriesPair pair{Synapse::dark(rc.device), Synapse::dark(rc.device)};
        const auto pts = stdp(pair, dts, Pulse{0, s.pulse_width, s.intensity}, s.measure_delay, s.temperature);
        bool sym = true, dec = true;
        for (std::size_t i = 0; i < 4; ++i) sym = sym && pts[i].delta_G == pts[8 - i].delta_G;
        for (std::size_t i = 4; i < 8; ++i) dec = dec && std::abs(pts[i + 1].delta_G) < std::abs(pts[i].delta_G);
        bool max0 = true;
        for (const auto& p : pts) max0 = max0 && std::abs(p.delta_G) <= std::abs(pts[4].delta_G);
        ok = ok && sym && dec && max0;
        detail += strf("%s: symmetric=%d max_at_0=%d decreasing=%d; ", name.c_str(), sym, max0, dec);
    }
    return {ok, detail};
}

Outcome c8_logic() {
    bool ok = true;
    std::string detail;
    for (Gate g : {Gate::OR, Gate::AND, Gate::NOR, Gate::NAND}) {
        const auto rc = g == Gate::OR || g == Gate::AND ? presets::scn_mg_excitatory_default()
                                                        : presets::scn_inhibitory_default();
        const SeriesPair pair{Synapse::dark(rc.device), Synapse::dark(rc.device)};
        const auto rows = truth_table({g, std::nullopt}, pair);
        std::string bits;
        for (const auto& r : rows) {
            ok = ok && r.output == gate_truth(g, r.a, r.b);
            bits += r.output ? '1' : '0';
        }
        detail += std::string(to_string(g)) + "=" + bits + " ";
    }
    return {ok, detail};
}

Outcome c9_learning() {
    bool ok = true;
    std::string detail;
    for (const auto& name : presets::names()) {
        const auto rc = presets::get(name);
        const auto s = rc.settings();
        const double thr = s.learning_threshold_relative * dark_conductivity(rc.device).dark_current;
        const auto cycles = learning_forgetting(rc.device, thr, std::max(3, s.learning_cycles), s.learning_rest, s);
        const double sign = rc.device.polarity == Polarity::Inhibitory ? -1.0 : 1.0;
        std::string counts, psis;
        double prev_psi = INFINITY;
        int prev_n = 1 << 30;
        for (const auto& c : cycles) {
            const auto fr = fit_wickelgren(c.forgetting_trace, c.off_time);
            ok = ok && c.pulses_to_threshold <= prev_n && std::abs(fr.model.psi) <= prev_psi &&
                 fr.model.psi * sign > 0.0 && fr.converged;
            prev_n = c.pulses_to_threshold;
            prev_psi = std::abs(fr.model.psi);
            counts += std::to_string(c.pulses_to_threshold) + " ";
            psis += fmt("%.4g ", fr.model.psi);
        }
        detail += name + ": pulses " + counts + "psi " + psis + "; ";
    }
    return {ok, detail};
}

Outcome c10_monotonicity() {
    const std::vector<std::pair<StimulusAxis, std::vector<double>>> axes{
        {StimulusAxis::Number, {1, 2, 5, 10, 20}},
        {StimulusAxis::Duration, {0.5, 1, 2, 5, 10}},
        {StimulusAxis::Intensity, {0, 5, 10, 20, 40, 80}},
        {StimulusAxis::Frequency, {0.1, 0.5, 1, 2}}};
    bool ok = true;
    std::string detail;
    for (const auto& name : presets::names()) {
        const auto rc = presets::get(name);
        const auto s = rc.settings();
        for (const auto& [axis, values] : axes) {
            const auto res = stm_ltm_sweep(rc.device, axis, values, s);
            for (std::size_t i = 1; i < res.size(); ++i)
                if (res[i].retention_time < res[i - 1].retention_time) {
                    ok = false;
                    detail += name + " " + to_string(axis) + " not monotone; ";
                }
        }
        const auto fr = filter_response(rc.device, {0.05, 0.2, 0.5, 1, 2}, s.freq_pulse_count, s);
        std::string gains;
        for (std::size_t i = 0; i < fr.size(); ++i) {
            if (i > 0 && !(fr[i].second > fr[i - 1].second)) ok = false;
            gains += fmt("%.1f ", fr[i].second);
        }
        detail += name + " filter gain " + gains + "; ";
    }
    return {ok, detail};
}

Outcome c11_photo_hall() {
    const auto rc = presets::scn_inhibitory_default();
    const auto rec = simulate_detailed(rc.device, rc.stimulus, rc.environment.temperature, rc.environment.sample_dt,
                                       rc.t_end());
    const auto [nmin, nmax] = std::minmax_element(rec.n.begin(), rec.n.end());
    const double n_var = (*nmax - *nmin) / *nmin;
    const auto& p = rc.stimulus.pulses().front();
    bool mu_dec = true;
    double prev = INFINITY;
    int lit = 0;
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
        if (rec.t[i] < p.start || rec.t[i] > p.end()) continue;
        mu_dec = mu_dec && rec.mu[i] < prev;
        prev = rec.mu[i];
        ++lit;
    }
    const Trace tr{rec.t, rec.current, rc.device.read_voltage, rc.environment.temperature, rc.device.label};
    const auto hc = hall_consistency(HallSeries::from_simulation(rec), tr);
    return {n_var < 0.01 && mu_dec && hc.pearson_r > 0.99,
            strf("n variation %.2g, mu strictly decreasing over %d lit samples: %d, r = %.12f", n_var, lit, mu_dec,
                 hc.pearson_r)};
}

OpticalSpectrum direct_gap_spectrum(double Eg) {
    OpticalSpectrum sp;
    sp.thickness_cm = 250e-7;
    const double K = 3.5e5, R = 0.2;
    for (double lam = 250; lam <= 850 + 1e-9; lam += 2.0) {
        const double E = units::hc_eV_nm / lam;
        const double alpha = E > Eg ? K * std::sqrt(E - Eg) / E : 0.0;
        sp.points.push_back({lam, (1 - R) * std::exp(-alpha * sp.thickness_cm), R});
    }
    return sp;
}

Outcome c12_tauc() {
    const auto res = tauc_bandgap(direct_gap_spectrum(2.26));
    return {std::abs(res.bandgap_eV - 2.26) <= 0.02,
            strf("Eg = %.4f eV from window %.3f-%.3f eV", res.bandgap_eV, res.window_lo, res.window_hi)};
}

Outcome c13_jacobians() {
    struct Case {
        ModelKind kind;
        int n;
    };
    const std::vector<Case> cases{{ModelKind::ExpDecay, 1}, {ModelKind::ExpDecay, 2}, {ModelKind::ExpDecay, 3},
                                  {ModelKind::ExpRise, 1},  {ModelKind::ExpRise, 2},  {ModelKind::Stretched, 1},
                                  {ModelKind::Wickelgren, 0}};
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto logu = [&](double a, double b) { return std::exp(std::log(a) + (std::log(b) - std::log(a)) * U(rng)); };
    std::vector<double> s_grid;
    for (int i = 0; i < 60; ++i) s_grid.push_back(0.25 * i * i / 10.0);
    double worst = 0.0;
    for (const auto& c : cases) {
        const fitting::ParametricModel m(c.kind, c.n);
        const auto k = static_cast<Eigen::Index>(m.size());
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd p(k);
            switch (c.kind) {
            case ModelKind::ExpDecay:
            case ModelKind::ExpRise:
                p[0] = 2 * U(rng) - 1;
                for (int i = 0; i < c.n; ++i) {
                    p[1 + i] = 4 * U(rng) - 2;
                    p[1 + c.n + i] = fitting::tau_map().inverse(logu(0.5, 300));
                }
                break;
            case ModelKind::Stretched:
                p << 2 * U(rng) - 1, 4 * U(rng) - 2, fitting::tau_map().inverse(logu(0.5, 300)),
                    fitting::logit(0.2 + 0.75 * U(rng));
                break;
            case ModelKind::Wickelgren:
                p << 0.5 + 1.5 * U(rng), fitting::rate_map().inverse(logu(1e-3, 10)), 2 * U(rng) - 1;
                break;
            }
            Eigen::MatrixXd Ja(static_cast<Eigen::Index>(s_grid.size()), k), Jf(Ja.rows(), k);
            std::vector<double> g(static_cast<std::size_t>(k));
            for (std::size_t r = 0; r < s_grid.size(); ++r) {
                m.eval(p, s_grid[r], g.data());
                for (Eigen::Index j = 0; j < k; ++j) Ja(static_cast<Eigen::Index>(r), j) = g[static_cast<std::size_t>(j)];
            }
            for (Eigen::Index j = 0; j < k; ++j) {
                const double h = 1e-5 * std::max(1.0, std::abs(p[j]));
                Eigen::VectorXd pp = p, pm = p;
                pp[j] += h;
                pm[j] -= h;
                for (std::size_t r = 0; r < s_grid.size(); ++r)
                    Jf(static_cast<Eigen::Index>(r), j) =
                        (m.eval(pp, s_grid[r], nullptr) - m.eval(pm, s_grid[r], nullptr)) / (2 * h);
            }
            const double jnorm = Ja.cwiseAbs().maxCoeff();
            for (Eigen::Index j = 0; j < k; ++j) {
                const double scale = std::max(Ja.col(j).cwiseAbs().maxCoeff(), 1e-6 * jnorm);
                worst = std::max(worst, (Ja.col(j) - Jf.col(j)).cwiseAbs().maxCoeff() / scale);
            }
        }
    }
    return {worst <= 1e-6, strf("worst column-relative deviation %.3g over %d points", worst,
                                static_cast<int>(cases.size()) * 20)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"transport consistency", c1_transport},
        {"power-density formula", c2_power_density},
        {"closed form vs adaptive ODE oracle", c3_oracle},
        {"double-exponential fit recovery", c4_fit_recovery},
        {"Arrhenius activation energy", c5_arrhenius},
        {"model selection", c6_model_selection},
        {"STDP symmetry and decay", c7_stdp},
        {"logic gate truth tables", c8_logic},
        {"learning and forgetting", c9_learning},
        {"retention and filter monotonicity", c10_monotonicity},
        {"photo-Hall invariants", c11_photo_hall},
        {"Tauc bandgap", c12_tauc},
        {"Jacobian vs finite differences", c13_jacobians},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
