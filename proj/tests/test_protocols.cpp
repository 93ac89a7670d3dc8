#include <cmath>

#include <gtest/gtest.h>

#include <scnsyn/fitting.hpp>
#include <scnsyn/presets.hpp>
#include <scnsyn/protocols.hpp>

using namespace scnsyn;

namespace {

const RunConfig& inhibitory() {
    static const RunConfig rc = presets::scn_inhibitory_default();
    return rc;
}
const RunConfig& excitatory() {
    static const RunConfig rc = presets::scn_mg_excitatory_default();
    return rc;
}

Trace exp_trace(double tau, double dark, double amp) {
    Trace tr;
    for (int k = 0; k <= 2000; ++k) {
        const double t = 0.05 * k;
        tr.t.push_back(t);
        tr.current.push_back(dark + amp * std::exp(-t / tau));
    }
    return tr;
}

} // namespace

TEST(Retention, SingleExponential) {
    const auto r = retention(exp_trace(10.0, 1.0, 0.5), 0.0, 0.1, 1.0);
    EXPECT_NEAR(r.retention_time, 10.0 * std::log(10.0), 1e-3);
    EXPECT_EQ(r.classification, MemoryClass::STM);
    EXPECT_FALSE(r.open_ended);
}

TEST(Retention, ZeroResponse) {
    const auto r = retention(exp_trace(10.0, 1.0, 0.0), 0.0, 0.1, 1.0);
    EXPECT_EQ(r.retention_time, 0.0);
    EXPECT_EQ(r.classification, MemoryClass::STM);
}

TEST(Retention, OpenEndedWhenNeverCrossing) {
    const auto r = retention(exp_trace(1e4, 0.0, 1.0), 0.0, 0.1, 0.0, 60.0);
    EXPECT_TRUE(r.open_ended);
    EXPECT_DOUBLE_EQ(r.retention_time, 100.0);
    EXPECT_EQ(r.classification, MemoryClass::LTM);
}

TEST(Retention, Preconditions) {
    const auto tr = exp_trace(5, 0, 1);
    EXPECT_THROW(retention(tr, 500.0, 0.1, 0.0), InputError);
    EXPECT_THROW(retention(tr, 1.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(retention(tr, 1.0, 0.0, 0.0), DomainError);
}

TEST(StmLtm, ExcitatoryNumberAndFrequencyTransition) {
    const auto s = excitatory().settings();
    const auto one = stm_ltm_sweep(excitatory().device, StimulusAxis::Number, {1}, s);
    EXPECT_EQ(one[0].classification, MemoryClass::STM);
    const auto hf = stm_ltm_sweep(excitatory().device, StimulusAxis::Frequency, {2.0}, s);
    EXPECT_EQ(hf[0].classification, MemoryClass::LTM);
}

TEST(StmLtm, NumberAxisMonotone) {
    for (const auto* rc : {&inhibitory(), &excitatory()}) {
        const auto r = stm_ltm_sweep(rc->device, StimulusAxis::Number, {1, 5, 10, 20}, rc->settings());
        for (std::size_t i = 1; i < r.size(); ++i) EXPECT_GE(r[i].retention_time, r[i - 1].retention_time);
    }
}

TEST(StmLtm, ZeroIntensityGivesNoResponse) {
    const auto r = stm_ltm_sweep(inhibitory().device, StimulusAxis::Intensity, {0, 0, 0}, inhibitory().settings());
    for (const auto& x : r) {
        EXPECT_EQ(x.delta_I_at_off, 0.0);
        EXPECT_EQ(x.classification, MemoryClass::STM);
    }
}

TEST(StmLtm, InputErrors) {
    const auto& d = inhibitory().device;
    EXPECT_THROW(stm_ltm_sweep(d, StimulusAxis::Number, {}), InputError);
    EXPECT_THROW(stm_ltm_sweep(d, StimulusAxis::Number, {5, 1}), InputError);
    EXPECT_THROW(stm_ltm_sweep(d, StimulusAxis::Number, {1.5}), InputError);
    EXPECT_THROW(stm_ltm_sweep(d, StimulusAxis::Frequency, {5.0}), InputError); // pulses would overlap
}

TEST(Learning, CountsDecreaseOnInhibitoryDefault) {
    const auto s = inhibitory().settings();
    const double thr = s.learning_threshold_relative * dark_conductivity(inhibitory().device).dark_current;
    const auto c = learning_forgetting(inhibitory().device, thr, 3, s.learning_rest, s);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_GT(c[0].pulses_to_threshold, c[1].pulses_to_threshold);
    EXPECT_GT(c[1].pulses_to_threshold, c[2].pulses_to_threshold);
    for (const auto& cy : c) {
        EXPECT_GE(cy.pulses_to_threshold, 1);
        EXPECT_DOUBLE_EQ(cy.forgetting_trace.t.front(), cy.off_time);
        EXPECT_NEAR(cy.forgetting_trace.t.back(), cy.off_time + s.learning_rest, 1e-9);
    }
}

TEST(Learning, FullForgettingIsMemoryless) {
    const auto s = excitatory().settings();
    const double thr = s.learning_threshold_relative * dark_conductivity(excitatory().device).dark_current;
    const auto c = learning_forgetting(excitatory().device, thr, 3, 1e8, s);
    EXPECT_EQ(c[0].pulses_to_threshold, c[1].pulses_to_threshold);
    EXPECT_EQ(c[1].pulses_to_threshold, c[2].pulses_to_threshold);
}

TEST(Learning, SingleCycleFitsFinitePsi) {
    const auto s = excitatory().settings();
    const double thr = s.learning_threshold_relative * dark_conductivity(excitatory().device).dark_current;
    const auto c = learning_forgetting(excitatory().device, thr, 1, s.learning_rest, s);
    ASSERT_EQ(c.size(), 1u);
    const auto fr = fit_wickelgren(c[0].forgetting_trace, c[0].off_time);
    EXPECT_TRUE(std::isfinite(fr.model.psi));
    EXPECT_GT(fr.model.psi, 0.0);
}

TEST(Learning, UnreachableThresholdNamesPool) {
    const auto& d = inhibitory().device;
    try {
        learning_forgetting(d, dark_conductivity(d).dark_current, 1, 60.0);
        FAIL() << "expected ProtocolError";
    } catch (const ProtocolError& e) {
        EXPECT_NE(std::string(e.what()).find("pool"), std::string::npos);
    }
    EXPECT_THROW(learning_forgetting(d, 0.0, 1, 60.0), InputError);
}

TEST(Ppf, SlowTrainIsIndependent) {
    const auto ix = ppf_index(excitatory().device, 1e-4, 3, excitatory().settings());
    for (double v : ix) EXPECT_NEAR(v, 100.0, 0.5);
}

TEST(Ppf, HigherFrequencyRaisesIndex) {
    for (const auto* rc : {&inhibitory(), &excitatory()}) {
        const auto s = rc->settings();
        EXPECT_GT(ppf_index(rc->device, 2.0, 20, s).back(), ppf_index(rc->device, 0.1, 20, s).back());
    }
}

TEST(Ppf, Errors) {
    const auto& d = inhibitory().device;
    EXPECT_THROW(ppf_index(d, 1.0, 1), InputError);
    auto s = inhibitory().settings();
    s.intensity = 0.0;
    EXPECT_THROW(ppf_index(d, 1.0, 5, s), UndefinedIndexError);
}

TEST(Filter, RepeatedFrequencyIsDeterministic) {
    const auto f = filter_response(excitatory().device, {0.5, 0.5}, 20, excitatory().settings());
    EXPECT_EQ(f[0].second, f[1].second);
    EXPECT_THROW(filter_response(excitatory().device, {-1.0}, 20), InputError);
}

TEST(Stdp, SymmetricWithPeakAtZero) {
    const SeriesPair pair{Synapse::dark(excitatory().device), Synapse::dark(excitatory().device)};
    const auto pts = stdp(pair, {-3, 0, 3}, Pulse{0, 1, 40}, 1.0);
    EXPECT_EQ(pts[0].delta_G, pts[2].delta_G);
    EXPECT_GT(std::abs(pts[1].delta_G), std::abs(pts[0].delta_G));
    EXPECT_GT(pts[1].delta_G, 0.0);
}

TEST(Stdp, RejectsMixedPolarity) {
    const SeriesPair pair{Synapse::dark(excitatory().device), Synapse::dark(inhibitory().device)};
    EXPECT_THROW(stdp(pair, {0}, Pulse{}, 1.0), InputError);
}

TEST(Logic, TruthTables) {
    const SeriesPair ex{Synapse::dark(excitatory().device), Synapse::dark(excitatory().device)};
    const SeriesPair in{Synapse::dark(inhibitory().device), Synapse::dark(inhibitory().device)};
    auto bits = [](const std::vector<TruthRow>& rows) {
        std::string s;
        for (const auto& r : rows) s += r.output ? '1' : '0';
        return s;
    };
    EXPECT_EQ(bits(truth_table({Gate::OR, std::nullopt}, ex)), "0111");
    EXPECT_EQ(bits(truth_table({Gate::AND, std::nullopt}, ex)), "0001");
    EXPECT_EQ(bits(truth_table({Gate::NOR, std::nullopt}, in)), "1000");
    EXPECT_EQ(bits(truth_table({Gate::NAND, std::nullopt}, in)), "1110");
}

TEST(Logic, UserThresholdOutsideIntervalIsUnsatisfiable) {
    const SeriesPair ex{Synapse::dark(excitatory().device), Synapse::dark(excitatory().device)};
    const auto G = gate_conductances(ex);
    try {
        logic_gate({Gate::OR, G[3] * 2.0}, ex, {true, false});
        FAIL() << "expected UnsatisfiableGateError";
    } catch (const UnsatisfiableGateError& e) {
        EXPECT_NE(std::string(e.what()).find("G(11)"), std::string::npos);
    }
    const double mid = 0.5 * (G[0] + G[1]);
    EXPECT_TRUE(logic_gate({Gate::OR, mid}, ex, {false, true}).output);
}

TEST(Logic, PolarityMustMatchGateFamily) {
    const SeriesPair in{Synapse::dark(inhibitory().device), Synapse::dark(inhibitory().device)};
    EXPECT_THROW(logic_gate({Gate::OR, std::nullopt}, in, {true, true}), InputError);
}

TEST(Logic, EqualDevicesCannotRealizeAsymmetricCase) {
    // With no light the four cases coincide, so no threshold separates them.
    const SeriesPair ex{Synapse::dark(excitatory().device), Synapse::dark(excitatory().device)};
    GateSettings gs;
    gs.pulse.intensity = 0.0;
    const auto G = gate_conductances(ex, gs);
    EXPECT_THROW(resolve_threshold({Gate::OR, std::nullopt}, G), UnsatisfiableGateError);
}

TEST(Energy, Examples) {
    EXPECT_NEAR(power_density(0.02, 79.6e-9, 12.24, 1.0), 0.13, 0.0013);
    EXPECT_NEAR(power_density(1.0, 9.12e-9, 14.03, 1.0), 0.65, 0.0065);
    EXPECT_EQ(power_density(1.0, 0.0, 1.0, 1.0), 0.0);
    EXPECT_THROW(power_density(1.0, 1.0, 0.0, 1.0), DomainError);
    EXPECT_NEAR(pulse_energy_optical(12.24, 40.0, 1.0), 4.896e-3, 1e-15);
    EXPECT_EQ(pulse_energy_optical(12.24, 0.0, 1.0), 0.0);
    EXPECT_NEAR(pulse_energy_electrical(0.02, 79.6e-9, 1.0), 1.592e-9, 1e-20);
    EXPECT_EQ(pulse_energy_electrical(0.02, 0.0, 1.0), 0.0);
    EXPECT_THROW(pulse_energy_electrical(-1.0, 1.0, 1.0), DomainError);
}
