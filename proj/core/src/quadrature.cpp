#include "bathdisc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bathdisc/units.hpp"

namespace bathdisc {

namespace {

using cplx = std::complex<double>;

// 15-point Kronrod extension of 7-point Gauss on [-1, 1]; positive abscissae.
constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
// 7-point Gauss weights for nodes 1, 3, 5, 7 above.
constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename T>
struct PanelEstimate {
  T value;
  double error;
  double l1;
};

template <typename F, typename T = std::invoke_result_t<F, double>>
PanelEstimate<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T k15 = kK15Weights[7] * fc;
  T g7 = kG7Weights[3] * fc;
  double l1 = kK15Weights[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double x = h * kGk15Nodes[i];
    const T lo = f(c - x);
    const T hi = f(c + x);
    k15 += kK15Weights[i] * (lo + hi);
    l1 += kK15Weights[i] * (std::abs(lo) + std::abs(hi));
    if (i % 2 == 1) g7 += kG7Weights[i / 2] * (lo + hi);
  }
  return {h * k15, std::abs(h * (k15 - g7)), h * l1};
}

template <typename T>
struct Panel {
  double a, b;
  T value;
  double error;
  double l1;
};

template <typename T>
struct WorstFirst {
  bool operator()(const Panel<T>& x, const Panel<T>& y) const {
    if (x.error != y.error) return x.error > y.error;
    return x.a < y.a;
  }
};

// Neumaier-compensated summation; works for real and complex terms.
template <typename T>
T neumaier_sum(const std::vector<T>& xs) {
  T s{};
  T comp{};
  for (const T& x : xs) {
    const T t = s + x;
    comp += (std::abs(s) >= std::abs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + comp;
}

// Adaptive worst-panel-first refinement. `base_error` accounts for panels
// handled outside this routine (e.g. double-exponential tips).
template <typename F, typename T = std::invoke_result_t<F, double>>
T adapt(const F& f, const std::vector<double>& boundaries, const QuadratureOptions& opts,
        double base_error, const char* label) {
  std::multiset<Panel<T>, WorstFirst<T>> panels;
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    auto est = gk15(f, boundaries[i], boundaries[i + 1]);
    panels.insert({boundaries[i], boundaries[i + 1], est.value, est.error, est.l1});
  }
  const double eps = std::numeric_limits<double>::epsilon();
  T total{};
  double err_total = 0.0, l1_total = 0.0;
  for (const auto& p : panels) {
    total += p.value;
    err_total += p.error;
    l1_total += p.l1;
  }
  while (true) {
    const double target =
        std::max(opts.rel_tol * std::abs(total), 4.0 * eps * l1_total) + base_error;
    if (err_total <= target) break;
    if (static_cast<int>(panels.size()) >= opts.max_panels) {
      std::vector<T> vals;
      vals.reserve(panels.size());
      for (const auto& p : panels) vals.push_back(p.value);
      throw QuadratureNotConverged(std::string("quadrature did not converge: ") + label,
                                   std::abs(neumaier_sum(vals)), err_total);
    }
    auto worst = panels.begin();
    const Panel<T> p = *worst;
    panels.erase(worst);
    const double mid = 0.5 * (p.a + p.b);
    auto left = gk15(f, p.a, mid);
    auto right = gk15(f, mid, p.b);
    panels.insert({p.a, mid, left.value, left.error, left.l1});
    panels.insert({mid, p.b, right.value, right.error, right.l1});
    total += left.value + right.value - p.value;
    err_total += left.error + right.error - p.error;
    l1_total += left.l1 + right.l1 - p.l1;
  }
  // Final pass: compensated sum in panel order for a reproducible result.
  std::vector<Panel<T>> ordered(panels.begin(), panels.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
  std::vector<T> vals;
  vals.reserve(ordered.size());
  for (const auto& p : ordered) vals.push_back(p.value);
  return neumaier_sum(vals);
}

std::vector<double> make_boundaries(double a, double b, double cap, int min_subdiv,
                                    const std::optional<double>& forced) {
  std::vector<double> bounds;
  bounds.push_back(a);
  int n = std::max(1, min_subdiv);
  if (std::isfinite(cap) && cap > 0.0)
    n = std::max(n, static_cast<int>(std::ceil((b - a) / cap)));
  for (int i = 1; i < n; ++i) bounds.push_back(a + (b - a) * i / n);
  bounds.push_back(b);
  if (forced && *forced > a && *forced < b) bounds.push_back(*forced);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  return bounds;
}

double de_rule(const std::function<double(double)>& f, double a, double b, double rel_tol,
               double* err_abs) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double error = 0.0, l1 = 0.0;
  const double v = ts.integrate(f, a, b, std::max(rel_tol, 1e-14), &error, &l1);
  if (err_abs) *err_abs = error * std::max(std::abs(v), l1);
  return v;
}

} // namespace

double integrate_gk_adaptive(const std::function<double(double)>& f,
                             std::vector<double> boundaries, const QuadratureOptions& opts) {
  if (boundaries.size() < 2) throw std::invalid_argument("need at least two panel boundaries");
  if (!std::is_sorted(boundaries.begin(), boundaries.end()))
    throw std::invalid_argument("panel boundaries must be sorted");
  if (opts.forced_split && *opts.forced_split > boundaries.front() &&
      *opts.forced_split < boundaries.back()) {
    boundaries.push_back(*opts.forced_split);
    std::sort(boundaries.begin(), boundaries.end());
    boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());
  }
  return adapt(f, boundaries, opts, 0.0, "real integrand");
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double rel_tol) {
  return de_rule(f, a, b, rel_tol, nullptr);
}

namespace {

// Structure markers of the spectral density: the floor discontinuity and the
// rational surrogate's support points, mirrored to the negative axis. Seeding
// panel boundaries there keeps narrow tabulated features visible to the
// error estimate.
std::vector<double> sd_knots(const Qnsd& q, double a, double b) {
  std::vector<double> knots;
  auto add = [&](double x) {
    if (x > a && x < b) knots.push_back(x);
  };
  const double floor = q.spectral_density().omega_floor_cm1();
  if (floor > 0.0) {
    add(floor);
    add(-floor);
  }
  if (const auto* interp = q.spectral_density().interpolant()) {
    for (double x : interp->support_points()) {
      add(x);
      add(-x);
    }
  }
  return knots;
}

// Shared assembly for the QNSD integrals: splits [a, b] at 0, applies the
// oscillation cap, and peels off double-exponential tip panels around a
// singular origin. `eval` maps omega to the (possibly complex) integrand.
template <typename F, typename T = std::invoke_result_t<F, double>>
T qnsd_integral_impl(const Qnsd& q, double a, double b, double cap, const F& eval,
                     const std::function<double(double)>& eval_re,
                     const std::function<double(double)>& eval_im, bool has_im,
                     const QuadratureOptions& opts, const char* label) {
  if (!(a < b)) throw std::invalid_argument("integration interval must satisfy a < b");
  const bool singular = q.singular_at_zero() && a <= 0.0 && b >= 0.0;
  T de_total{};
  double de_error = 0.0;
  std::vector<double> segments; // non-singular segment boundaries
  segments.push_back(a);
  if (a < 0.0 && b > 0.0) segments.push_back(0.0);
  segments.push_back(b);

  std::vector<std::pair<double, double>> gk_segments;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    double lo = segments[i], hi = segments[i + 1];
    if (singular) {
      const double tip = std::isfinite(cap) ? cap : hi - lo;
      if (lo == 0.0) {
        const double split = std::min(hi, tip);
        double e1 = 0.0, e2 = 0.0;
        de_total += T(de_rule(eval_re, 0.0, split, opts.rel_tol * 0.1, &e1));
        if (has_im) {
          if constexpr (std::is_same_v<T, cplx>)
            de_total += cplx(0.0, de_rule(eval_im, 0.0, split, opts.rel_tol * 0.1, &e2));
        }
        de_error += e1 + e2;
        lo = split;
      } else if (hi == 0.0) {
        const double split = std::max(lo, -tip);
        double e1 = 0.0, e2 = 0.0;
        de_total += T(de_rule(eval_re, split, 0.0, opts.rel_tol * 0.1, &e1));
        if (has_im) {
          if constexpr (std::is_same_v<T, cplx>)
            de_total += cplx(0.0, de_rule(eval_im, split, 0.0, opts.rel_tol * 0.1, &e2));
        }
        de_error += e1 + e2;
        hi = split;
      }
    }
    if (lo < hi) gk_segments.emplace_back(lo, hi);
  }

  const std::vector<double> knots = sd_knots(q, a, b);
  const double total_len = b - a;
  std::vector<double> boundaries;
  for (auto [lo, hi] : gk_segments) {
    const int min_subdiv =
        std::max(1, static_cast<int>(std::ceil(opts.min_panels * (hi - lo) / total_len)));
    auto bs = make_boundaries(lo, hi, cap, min_subdiv, opts.forced_split);
    boundaries.insert(boundaries.end(), bs.begin(), bs.end());
    for (double k : knots)
      if (k > lo && k < hi) boundaries.push_back(k);
  }
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());
  if (boundaries.size() < 2) return de_total;

  // Each segment is refined separately so no panel ever spans the
  // de-handled gap around the origin.
  T total = de_total;
  double carried_error = de_error;
  for (auto [lo, hi] : gk_segments) {
    std::vector<double> local;
    for (double x : boundaries)
      if (x >= lo && x <= hi) local.push_back(x);
    if (local.size() < 2) continue;
    total += adapt(eval, local, opts, carried_error, label);
  }
  return total;
}

} // namespace

namespace {

// The double-exponential rule may round an abscissa onto the singular origin
// itself; the point carries zero measure, so evaluate it as 0.
double qnsd_value_or_zero(const Qnsd& q, double w) {
  return q.try_value(w).value_or(0.0);
}

} // namespace

double qnsd_weighted_integral(const Qnsd& q, double a, double b,
                              const std::function<double(double)>& g,
                              const QuadratureOptions& opts) {
  auto eval = [&](double w) { return qnsd_value_or_zero(q, w) * g(w); };
  return qnsd_integral_impl(q, a, b, std::numeric_limits<double>::infinity(), eval, eval,
                            eval, false, opts, "QNSD weighted integral");
}

std::complex<double> qnsd_fourier_integral(const Qnsd& q, double lo, double hi, double t_fs,
                                           const QuadratureOptions& opts) {
  const double kappa = constants::phase_per_cm1_fs;
  const double cap = t_fs > 0.0 ? std::numbers::pi / (kappa * t_fs)
                                : std::numeric_limits<double>::infinity();
  auto eval = [&, t_fs](double w) -> cplx {
    const double phase = -kappa * w * t_fs;
    return qnsd_value_or_zero(q, w) * cplx(std::cos(phase), std::sin(phase));
  };
  auto eval_re = [&, t_fs](double w) {
    return qnsd_value_or_zero(q, w) * std::cos(kappa * w * t_fs);
  };
  auto eval_im = [&, t_fs](double w) {
    return -qnsd_value_or_zero(q, w) * std::sin(kappa * w * t_fs);
  };
  return qnsd_integral_impl(q, lo, hi, cap, eval, eval_re, eval_im, true, opts,
                            "QNSD Fourier integral");
}

} // namespace bathdisc
