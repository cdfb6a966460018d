#include "bathdisc/qnsd.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bathdisc {

namespace {
constexpr double kInvPi = 1.0 / std::numbers::pi;
}

Qnsd::Qnsd(SpectralDensity sd, double temperature_K)
    : sd_(std::move(sd)), temperature_K_(temperature_K) {
  if (temperature_K < 0.0) throw std::invalid_argument("temperature must be >= 0 K");
}

double Qnsd::beta() const {
  if (zero_temperature()) throw std::domain_error("beta undefined at T = 0 (zero-temperature limit)");
  return beta_inv_cm(temperature_K_);
}

bool Qnsd::singular_at_zero() const {
  if (zero_temperature()) return false;
  if (const auto* p = sd_.power_law_params()) return p->exponent_s < 1.0;
  // Tabulated J vanishes below its floor; only a nonzero J(0) makes the
  // Bose factor divergence survive.
  return sd_.omega_floor_cm1() == 0.0 && sd_(0.0) > 0.0;
}

double Qnsd::value_at_zero_limit() const {
  // Finite temperature: S -> J(w)/(pi*beta*w) as w -> 0.
  if (const auto* p = sd_.power_law_params()) {
    if (p->exponent_s > 1.0) return 0.0;
    // s = 1: J ~ pi*alpha*w, so the limit is alpha/beta.
    return p->coupling_alpha / beta();
  }
  return 0.0; // tabulated with positive floor
}

std::optional<double> Qnsd::try_value(double omega_cm1) const {
  if (zero_temperature()) {
    if (omega_cm1 <= 0.0) return 0.0;
    return kInvPi * sd_(omega_cm1);
  }
  if (omega_cm1 == 0.0) {
    if (singular_at_zero()) return std::nullopt;
    return value_at_zero_limit();
  }
  const double abs_w = std::abs(omega_cm1);
  const double j = sd_(abs_w);
  const double bw = beta() * abs_w;
  // coth(x)+1 = 2/(1-e^{-2x}), coth(x)-1 = 2/(e^{2x}-1) with x = beta*|w|/2.
  if (omega_cm1 > 0.0) return kInvPi * j / (-std::expm1(-bw));
  return kInvPi * j / std::expm1(bw);
}

double Qnsd::value(double omega_cm1) const {
  auto v = try_value(omega_cm1);
  if (!v) throw std::domain_error("QNSD is singular at omega = 0 for this bath");
  return *v;
}

} // namespace bathdisc
