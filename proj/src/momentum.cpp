#include "fista/momentum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fista {

MomentumParams MomentumParams::cd(double d) {
  if (!(d > 0.0)) throw std::invalid_argument("cd: d must be > 0");
  MomentumParams m;
  m.scheme_ = Scheme::CD;
  m.d_ = d;
  return m;
}

MomentumParams MomentumParams::mod(double p, double q, double r) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("mod: p must be in ]0,1]");
  if (!(q >= 0.0)) throw std::invalid_argument("mod: q must be >= 0");
  if (!(r > 0.0) || r > 4.0)
    throw std::invalid_argument("mod: r must be in ]0,4]");
  MomentumParams m;
  m.scheme_ = Scheme::Mod;
  m.p_ = p;
  m.q_ = q;
  m.r_ = r;
  return m;
}

std::string MomentumParams::label() const {
  switch (scheme_) {
    case Scheme::BT:
      return "bt";
    case Scheme::CD:
      return "cd(d=" + std::to_string(d_) + ")";
    case Scheme::Mod:
      return "mod(p=" + std::to_string(p_) + ",q=" + std::to_string(q_) +
             ",r=" + std::to_string(r_) + ")";
  }
  return "?";
}

double mod_t_update(double p, double q, double r, double t_prev) {
  return (p + std::sqrt(q + r * t_prev * t_prev)) / 2.0;
}

MomentumStep momentum_step(const MomentumParams& params,
                           const MomentumState& state) {
  double t;
  if (params.scheme() == Scheme::CD) {
    t = (static_cast<double>(state.k) + params.d()) / params.d();
  } else {
    t = mod_t_update(params.p(), params.q(), params.r(), state.t_prev);
  }
  const double a = (state.t_prev - 1.0) / t;
  return {t, a, {state.k + 1, t}};
}

InertiaLimit limit_inertia(double p, double q, double r) {
  if (!(p > 0.0)) throw std::invalid_argument("limit_inertia: p must be > 0");
  if (!(q >= 0.0)) throw std::invalid_argument("limit_inertia: q must be >= 0");
  if (!(r > 0.0) || r > 4.0)
    throw std::invalid_argument("limit_inertia: r must be in ]0,4]");
  if (r == 4.0)
    return {1.0, std::numeric_limits<double>::infinity(), true};
  const double delta = std::sqrt(r * p * p + (4.0 - r) * q);
  return {1.0 - (4.0 - r) / (2.0 * p + delta), (2.0 * p + delta) / (4.0 - r),
          false};
}

InequalityReport check_key_inequality(double p, double q, long k_max) {
  if (k_max < 1)
    throw std::invalid_argument("check_key_inequality: k_max must be >= 1");
  const double slack = 1e-9;
  double t_prev = 1.0;
  double worst = -std::numeric_limits<double>::infinity();
  long worst_k = 0;
  bool holds = true;
  for (long k = 1; k <= k_max; ++k) {
    const double t = mod_t_update(p, q, 4.0, t_prev);
    const double excess = (t * t - t - t_prev * t_prev) / (t * t);
    if (excess > worst) {
      worst = excess;
      worst_k = k;
    }
    if (excess > slack) holds = false;
    t_prev = t;
  }
  return {holds, worst, worst_k};
}

InequalityReport check_little_o_inequalities(double p, double q, long k_max) {
  if (k_max < 1)
    throw std::invalid_argument(
        "check_little_o_inequalities: k_max must be >= 1");
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument(
        "check_little_o_inequalities: p must be in ]0,1]");
  if (!(q >= 0.0))
    throw std::invalid_argument(
        "check_little_o_inequalities: q must be >= 0");
  const double slack = 1e-9;
  const double offset = (q - p * p) / 4.0;
  double t_prev = 1.0;
  double worst = -std::numeric_limits<double>::infinity();
  long worst_k = 0;
  bool holds = true;
  for (long k = 1; k <= k_max; ++k) {
    const double t = mod_t_update(p, q, 4.0, t_prev);
    // Cancellation in t_{k-1}^2 - (t_k^2 - t_k) is O(t^2 eps), so violations
    // are measured against max(1, t^2).
    const double scale = std::max(1.0, t * t);
    const double lower = p * (1.0 - p) * static_cast<double>(k + 1) / 2.0;
    const double mid = (1.0 - p) * t;
    const double upper = t_prev * t_prev - (t * t - t);
    const double bound = static_cast<double>(k + 1) * p / 2.0;
    double excess = (lower - mid) / scale;
    excess = std::max(excess, std::abs(mid - upper - offset) / scale);
    excess = std::max(excess, (bound - t) / scale);
    if (excess > worst) {
      worst = excess;
      worst_k = k;
    }
    if (excess > slack) holds = false;
    t_prev = t;
  }
  return {holds, worst, worst_k};
}

}  // namespace fista
