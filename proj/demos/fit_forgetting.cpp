// Learning cycles on the excitatory preset, each forgetting curve fitted
// with the Wickelgren power law, then a triple-exponential fit of a long decay.
#include <cstdio>

#include <scnsyn/scnsyn.hpp>

using namespace scnsyn;

int main() {
    const auto rc = presets::scn_mg_excitatory_default();
    const auto s = rc.settings();
    const double target = s.learning_threshold_relative * dark_conductivity(rc.device).dark_current;

    for (const auto& cyc : learning_forgetting(rc.device, target, 3, s.learning_rest, s)) {
        const auto fit = fit_wickelgren(cyc.forgetting_trace, cyc.off_time);
        std::printf("cycle %d: %2d pulses, psi = %+.4f, lambda = %.4g A\n", cyc.cycle_index,
                    cyc.pulses_to_threshold, fit.model.psi, fit.model.lambda);
    }

    // Decay after a 10 minute exposure, observed for two hours.
    const PulseTrain light({{0.0, 600.0, 40.0}});
    const Trace tr = simulate(rc.device, light, 300.0, 5.0, 600.0 + 7200.0);
    const auto sel = model_select(tr, {{ModelKind::ExpDecay, 2}, {ModelKind::ExpDecay, 3}, {ModelKind::Stretched, 1}},
                                  FitWindow{600.0, 7800.0});
    for (const auto& r : sel.ranked) {
        std::printf("%-10s n=%zu AICc=%.1f taus:", to_string(r.model.kind), r.model.n_terms(), r.aicc);
        for (double t : r.model.taus) std::printf(" %.4g", t);
        std::printf("\n");
    }
}
