#include "bathdisc/spectral_density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bathdisc {

SpectralDensity SpectralDensity::power_law(double exponent_s, double coupling_alpha,
                                           double omega_c_cm1) {
  if (!(exponent_s > 0.0) || !(coupling_alpha > 0.0) || !(omega_c_cm1 > 0.0))
    throw std::invalid_argument("power-law spectral density requires s > 0, alpha > 0, omega_c > 0");
  return SpectralDensity(PowerLawExpCutoff{exponent_s, coupling_alpha, omega_c_cm1});
}

SpectralDensity SpectralDensity::tabulated(std::shared_ptr<const RationalInterpolant> interpolant,
                                           double omega_floor_cm1) {
  if (!interpolant) throw std::invalid_argument("tabulated spectral density requires an interpolant");
  if (omega_floor_cm1 < 0.0) throw std::invalid_argument("omega_floor must be >= 0");
  return SpectralDensity(Tabulated{std::move(interpolant), omega_floor_cm1});
}

double SpectralDensity::operator()(double omega_cm1) const {
  if (omega_cm1 < 0.0) throw std::domain_error("spectral density evaluated at negative frequency");
  if (const auto* p = std::get_if<PowerLawExpCutoff>(&kind_)) {
    if (omega_cm1 == 0.0) return 0.0;
    return std::numbers::pi * p->coupling_alpha *
           std::pow(p->omega_c_cm1, 1.0 - p->exponent_s) *
           std::pow(omega_cm1, p->exponent_s) * std::exp(-omega_cm1 / p->omega_c_cm1);
  }
  const auto& t = std::get<Tabulated>(kind_);
  if (omega_cm1 < t.omega_floor_cm1) return 0.0;
  return std::max(0.0, (*t.interpolant)(omega_cm1));
}

const RationalInterpolant* SpectralDensity::interpolant() const {
  if (const auto* t = std::get_if<Tabulated>(&kind_)) return t->interpolant.get();
  return nullptr;
}

double SpectralDensity::omega_floor_cm1() const {
  if (const auto* t = std::get_if<Tabulated>(&kind_)) return t->omega_floor_cm1;
  return 0.0;
}

} // namespace bathdisc
