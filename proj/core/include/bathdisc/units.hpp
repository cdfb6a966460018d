#pragma once

// Internal unit conventions: frequencies and energies in cm^-1, time in fs,
// temperature in K. Everything that converts between them lives here.

namespace bathdisc {

namespace constants {

// Second radiation constant hc/k_B in cm*K. beta*omega is dimensionless for
// omega in cm^-1 when beta = radiation_c2_cm_K / T.
inline constexpr double radiation_c2_cm_K = 1.4387769;

// 2*pi*c expressed in rad/fs per cm^-1: the phase accumulated per fs by a
// mode of 1 cm^-1.
inline constexpr double phase_per_cm1_fs = 1.8836515673e-4;

} // namespace constants

// Inverse temperature in (cm^-1)^-1; valid for temperature_K > 0.
inline constexpr double beta_inv_cm(double temperature_K) {
  return constants::radiation_c2_cm_K / temperature_K;
}

} // namespace bathdisc
