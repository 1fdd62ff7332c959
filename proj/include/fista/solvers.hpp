#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fista/momentum.hpp"
#include "fista/problems.hpp"
#include "fista/trace.hpp"

// Iteration drivers. All share one loop:
//
//   y_k     = x_k + a_k (x_k - x_{k-1})        (a_k = 0 for plain FBS)
//   x_{k+1} = prox_{gamma R}(y_k - gamma grad F(y_k))
//
// with x_{-1} = x_0, so the first step is a plain forward-backward step.
// The adaptive variant refreshes the momentum growth rate r from a strong
// convexity estimate every kappa iterations and leaves t_k untouched across
// refreshes.

namespace fista {

enum class TerminationReason { Tolerance, MaxIters };

struct SolverConfig {
  double gamma = 0.0;  // 0 selects 1/L; FBS accepts ]0, 2/L[
  long max_iters = 100000;
  double tol = 1e-9;  // stop when ||x_k - x_{k-1}|| <= tol; 0 never stops early
  bool record_objective = false;
  std::optional<MomentumParams> schedule;  // unset = driver default
  // Accelerated schedules assume gamma = 1/L; setting another value without
  // this flag is rejected.
  bool allow_gamma_override = false;
};

struct SolverResult {
  std::vector<double> x;
  long iterations = 0;
  TerminationReason reason = TerminationReason::MaxIters;
  Trace trace;  // one row per iteration taken
};

// Ring of the two most recent (point, gradient) pairs seen by the adaptive
// loop. A push identical to the newest stored point is dropped, so the two
// slots hold distinct points whenever two exist.
class EstimatorWindow {
 public:
  struct Pair {
    std::vector<double> x, g;
  };

  void push(std::span<const double> x, std::span<const double> g);
  std::size_t size() const { return count_; }
  const Pair& newest() const;
  const Pair& previous() const;

 private:
  Pair slot_[2];
  std::size_t count_ = 0;
  std::size_t head_ = 0;
};

// alpha_k estimate consumed at each refresh. Must be a pure function of the
// window; returning values above 1/gamma breaks the refresh map's domain.
using Estimator =
    std::function<double(const EstimatorWindow& window, double prev_alpha)>;

// Default estimator: the secant quotient
//   <g_a - g_b, x_a - x_b> / ||x_a - x_b||^2
// over the window's two pairs, clamped to [floor, ceiling]; falls back to
// prev_alpha when fewer than two pairs exist or ||x_a - x_b|| < 1e-14.
// Exact on quadratics.
double estimate_strong_convexity(const EstimatorWindow& window,
                                 double prev_alpha, double floor,
                                 double ceiling);

struct AdaConfig {
  long kappa = 30;             // refresh period, >= 1
  double alpha_floor = 1e-12;  // clamp bounds for the default estimator
  double alpha_ceiling = 0.0;  // 0 selects (1 - 1e-6) / gamma
  Estimator estimator;         // unset = estimate_strong_convexity
};

// Constant inertia that is optimal under strong convexity alpha:
//   a* = (1 - sqrt(gamma alpha)) / (1 + sqrt(gamma alpha)),
// the singularity-free form of (1 - sqrt(ga))^2 / (1 - ga). Requires
// 0 <= gamma alpha <= 1; a*(0) = 1, a*(1) = 0, strictly decreasing.
double optimal_inertia(double alpha, double gamma);

// Momentum growth rate targeting a*: f(alpha) = 4 * optimal_inertia.
double f_of_alpha(double alpha, double gamma);

// Plain forward-backward splitting; config.schedule must be unset.
SolverResult solve_fbs(const Problem& problem, const SolverConfig& config,
                       std::span<const double> x0 = {});

// Inertial loop driven by config.schedule (default BT).
SolverResult solve_fista(const Problem& problem, const SolverConfig& config,
                         std::span<const double> x0 = {});

// Adaptive variant: p = q = 1, r_0 = 4, r refreshed to f(alpha_k) at
// k = 1, 1 + kappa, 1 + 2 kappa, ... With the estimate pinned at 0 the
// iterate stream is identical to solve_fista with the BT schedule.
SolverResult solve_ada_fista(const Problem& problem,
                             const SolverConfig& config, const AdaConfig& ada,
                             std::span<const double> x0 = {});

}  // namespace fista
