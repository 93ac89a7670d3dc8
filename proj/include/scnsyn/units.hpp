#pragma once

// Unit conventions used throughout scnsyn.
//
// Everything is SI (s, A, V, K, m) with three exceptions that follow the
// semiconductor transport literature and are converted explicitly wherever
// they meet SI quantities:
//
//   carrier density     cm^-3
//   mobility            cm^2/(V s)
//   device geometry     cm            (so n*e*mu is S/cm and L/(sigma*W*t) is ohm)
//   optical intensity   mW/cm^2
//   activation energy   meV
//   absorption coeff.   cm^-1
//   photon energy       eV

namespace scnsyn::units {

inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double boltzmann_meV = 8.617333e-2;         // meV/K
inline constexpr double hc_eV_nm = 1239.842;                 // eV nm

inline constexpr double mm2_to_cm2 = 1.0e-2;
inline constexpr double mW_to_W = 1.0e-3;
inline constexpr double W_to_nW = 1.0e9;
inline constexpr double nm_to_cm = 1.0e-7;

} // namespace scnsyn::units
