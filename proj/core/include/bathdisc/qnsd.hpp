#pragma once

#include <optional>

#include "bathdisc/spectral_density.hpp"
#include "bathdisc/units.hpp"

namespace bathdisc {

// Quantum noise spectral density S_beta(omega) = J(omega)[coth(beta*omega/2)+1]/(2*pi)
// with the odd extension J(-omega) = -J(omega) applied internally. Temperature 0
// selects the zero-temperature limit: S = J/pi for omega > 0, 0 for omega < 0.
//
// Immutable after construction; evaluation is pure and thread-safe.
class Qnsd {
public:
  Qnsd(SpectralDensity sd, double temperature_K);

  double temperature_K() const { return temperature_K_; }
  bool zero_temperature() const { return temperature_K_ == 0.0; }
  // Inverse temperature in (cm^-1)^-1; requires finite temperature.
  double beta() const;

  // True when S_beta diverges (integrably) as omega -> 0: sub-Ohmic power law
  // at finite temperature, or a tabulated J with a nonzero value at 0.
  bool singular_at_zero() const;

  // S_beta(omega); empty exactly at omega = 0 when singular_at_zero().
  std::optional<double> try_value(double omega_cm1) const;
  // As try_value but throws std::domain_error on the singular point.
  double value(double omega_cm1) const;

  const SpectralDensity& spectral_density() const { return sd_; }
  // J(|omega|), the one-sided density.
  double sd(double omega_cm1) const { return sd_(omega_cm1); }

private:
  SpectralDensity sd_;
  double temperature_K_;

  double value_at_zero_limit() const;
};

} // namespace bathdisc
