// Five light pulses on the inhibitory preset: trace, retention, energy cost.
#include <cstdio>

#include <scnsyn/scnsyn.hpp>

using namespace scnsyn;

int main() {
    const auto rc = presets::scn_inhibitory_default();
    const auto& dev = rc.device;
    const auto train = PulseTrain::uniform(5, 1.0, 2.0, 40.0, 1.0);

    const Trace tr = simulate(dev, train, 300.0, 0.05, train.end_time() + 300.0);
    const double i_dark = dark_conductivity(dev).dark_current;
    const auto ret = retention(tr, train.end_time(), 0.1, i_dark);

    std::printf("dark current        %.6g A\n", i_dark);
    std::printf("dI at light-off     %.6g A\n", ret.delta_I_at_off);
    std::printf("retention (10%%)     %.3f s -> %s\n", ret.retention_time, to_string(ret.classification));

    const double area_mm2 = dev.length * dev.width * 100.0;
    std::printf("power density       %.4g nW/mm^2\n",
                power_density(dev.read_voltage, ret.delta_I_at_off, area_mm2, 1.0));
    std::printf("optical energy/pulse %.4g J\n", pulse_energy_optical(area_mm2, 40.0, 1.0));
    std::printf("electrical energy/pulse %.4g J\n", pulse_energy_electrical(dev.read_voltage, i_dark, 1.0));
}
