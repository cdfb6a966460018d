#pragma once

#include <memory>
#include <variant>

#include "bathdisc/rational.hpp"

namespace bathdisc {

// J(omega) = pi * alpha * omega_c^(1-s) * omega^s * exp(-omega/omega_c)
struct PowerLawExpCutoff {
  double exponent_s;
  double coupling_alpha;
  double omega_c_cm1;
};

// One-sided spectral density J(omega) for omega >= 0, in cm^-1. Either the
// analytic power-law/exponential-cutoff model or a rational surrogate of
// tabulated data, clamped at 0 and zeroed below omega_floor.
class SpectralDensity {
public:
  static SpectralDensity power_law(double exponent_s, double coupling_alpha, double omega_c_cm1);
  static SpectralDensity tabulated(std::shared_ptr<const RationalInterpolant> interpolant,
                                   double omega_floor_cm1);

  // J(omega); omega must be >= 0.
  double operator()(double omega_cm1) const;

  bool is_power_law() const { return std::holds_alternative<PowerLawExpCutoff>(kind_); }
  // nullptr unless power-law.
  const PowerLawExpCutoff* power_law_params() const { return std::get_if<PowerLawExpCutoff>(&kind_); }
  // nullptr unless tabulated.
  const RationalInterpolant* interpolant() const;
  double omega_floor_cm1() const;

private:
  struct Tabulated {
    std::shared_ptr<const RationalInterpolant> interpolant;
    double omega_floor_cm1;
  };
  std::variant<PowerLawExpCutoff, Tabulated> kind_;

  explicit SpectralDensity(std::variant<PowerLawExpCutoff, Tabulated> kind) : kind_(std::move(kind)) {}
};

} // namespace bathdisc
