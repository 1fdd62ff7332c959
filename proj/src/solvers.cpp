#include "fista/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fista/errors.hpp"
#include "fista/kernels.hpp"

namespace fista {
namespace {

bool same_vector(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

struct AdaState {
  const AdaConfig* cfg = nullptr;
  EstimatorWindow window;
  double r = 4.0;
  double alpha = 0.0;
  double ceiling = 0.0;
};

SolverResult run_loop(const Problem& problem, const SolverConfig& config,
                      std::span<const double> x0,
                      const MomentumParams* params, const AdaConfig* ada_cfg) {
  const std::size_t n = problem.dim();
  if (!x0.empty() && x0.size() != n)
    throw std::invalid_argument("x0 dimension mismatch");
  if (config.max_iters < 1)
    throw std::invalid_argument("max_iters must be at least 1");
  if (config.tol < 0) throw std::invalid_argument("tol must be nonnegative");

  const double L = problem.lipschitz();
  if (!(L > 0) || !std::isfinite(L))
    throw std::invalid_argument("problem must supply a positive Lipschitz constant");
  double gamma = config.gamma;
  if (gamma == 0.0) gamma = 1.0 / L;
  if (!(gamma > 0) || !std::isfinite(gamma))
    throw std::invalid_argument("step size must be positive");
  if (params || ada_cfg) {
    if (config.gamma != 0.0 && config.gamma != 1.0 / L &&
        !config.allow_gamma_override)
      throw std::invalid_argument(
          "accelerated schedules assume step size 1/L; set "
          "allow_gamma_override to use another value");
  } else {
    if (!(gamma < 2.0 / L))
      throw std::invalid_argument("step size must lie in ]0, 2/L[");
  }

  AdaState ada;
  if (ada_cfg) {
    if (ada_cfg->kappa < 1) throw std::invalid_argument("kappa must be >= 1");
    ada.cfg = ada_cfg;
    ada.ceiling = ada_cfg->alpha_ceiling > 0 ? ada_cfg->alpha_ceiling
                                             : (1.0 - 1e-6) / gamma;
    if (!(ada_cfg->alpha_floor > 0) || ada_cfg->alpha_floor > ada.ceiling ||
        !(ada.ceiling < 1.0 / gamma))
      throw std::invalid_argument(
          "estimator clamp bounds must satisfy 0 < floor <= ceiling < 1/gamma");
  }

  std::vector<double> x(n, 0.0);
  if (!x0.empty()) x.assign(x0.begin(), x0.end());
  std::vector<double> x_prev = x;
  std::vector<double> y(n), g(n), x_next(n);

  SolverResult result;
  result.trace.reserve(static_cast<std::size_t>(
      std::min<long>(config.max_iters, 4096)));
  MomentumState mstate;
  const auto start = std::chrono::steady_clock::now();

  for (long k = 1; k <= config.max_iters; ++k) {
    TraceRow row;
    row.k = k;

    if (ada.cfg) {
      if ((k - 1) % ada.cfg->kappa == 0) {
        ada.alpha = ada.cfg->estimator
                        ? ada.cfg->estimator(ada.window, ada.alpha)
                        : estimate_strong_convexity(ada.window, ada.alpha,
                                                    ada.cfg->alpha_floor,
                                                    ada.ceiling);
        ada.r = f_of_alpha(ada.alpha, gamma);
      }
      const double t = mod_t_update(1.0, 1.0, ada.r, mstate.t_prev);
      row.a = (mstate.t_prev - 1.0) / t;
      row.t = t;
      row.alpha = ada.alpha;
      row.r = ada.r;
      mstate = {mstate.k + 1, t};
    } else if (params) {
      const MomentumStep step = momentum_step(*params, mstate);
      row.a = step.a;
      row.t = step.t;
      mstate = step.next;
    }

    if (row.a) {
      kernels::extrapolate(x, x_prev, *row.a, y);
    } else {
      std::copy(x.begin(), x.end(), y.begin());
    }

    problem.grad_smooth(y, g);
    if (ada.cfg) ada.window.push(y, g);

    kernels::gradient_step(y, gamma, g, y);  // reuse y as the forward point
    problem.prox_step(y, gamma, x_next);

    row.norm_dx = kernels::diff_norm2(x_next, x);
    if (!std::isfinite(row.norm_dx))
      throw NumericalFailure("non-finite iterate displacement", k);
    if (config.record_objective) {
      row.obj = problem.objective(x_next);
      if (!std::isfinite(*row.obj))
        throw NumericalFailure("non-finite objective", k);
    }
    row.time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    result.trace.push_back(row);

    x_prev.swap(x);
    x.swap(x_next);
    result.iterations = k;

    if (config.tol > 0 && row.norm_dx <= config.tol) {
      result.reason = TerminationReason::Tolerance;
      break;
    }
  }

  result.x = std::move(x);
  return result;
}

}  // namespace

void EstimatorWindow::push(std::span<const double> x,
                           std::span<const double> g) {
  if (count_ > 0 && same_vector(x, slot_[head_].x)) return;
  const std::size_t next = count_ == 0 ? head_ : 1 - head_;
  slot_[next].x.assign(x.begin(), x.end());
  slot_[next].g.assign(g.begin(), g.end());
  head_ = next;
  count_ = std::min<std::size_t>(count_ + 1, 2);
}

const EstimatorWindow::Pair& EstimatorWindow::newest() const {
  if (count_ == 0) throw std::out_of_range("empty estimator window");
  return slot_[head_];
}

const EstimatorWindow::Pair& EstimatorWindow::previous() const {
  if (count_ < 2) throw std::out_of_range("estimator window holds one pair");
  return slot_[1 - head_];
}

double estimate_strong_convexity(const EstimatorWindow& window,
                                 double prev_alpha, double floor,
                                 double ceiling) {
  if (window.size() < 2) return prev_alpha;
  const auto& a = window.newest();
  const auto& b = window.previous();
  double dx2 = 0.0, num = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const double dx = a.x[i] - b.x[i];
    dx2 += dx * dx;
    num += (a.g[i] - b.g[i]) * dx;
  }
  if (std::sqrt(dx2) < 1e-14) return prev_alpha;
  return std::clamp(num / dx2, floor, ceiling);
}

double optimal_inertia(double alpha, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("step size must be positive");
  if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
  const double ga = gamma * alpha;
  if (ga > 1.0)
    throw std::invalid_argument("gamma * alpha must not exceed 1");
  const double s = std::sqrt(ga);
  return (1.0 - s) / (1.0 + s);
}

double f_of_alpha(double alpha, double gamma) {
  return 4.0 * optimal_inertia(alpha, gamma);
}

SolverResult solve_fbs(const Problem& problem, const SolverConfig& config,
                       std::span<const double> x0) {
  if (config.schedule)
    throw std::invalid_argument("solve_fbs takes no momentum schedule");
  return run_loop(problem, config, x0, nullptr, nullptr);
}

SolverResult solve_fista(const Problem& problem, const SolverConfig& config,
                         std::span<const double> x0) {
  const MomentumParams params =
      config.schedule ? *config.schedule : MomentumParams::bt();
  return run_loop(problem, config, x0, &params, nullptr);
}

SolverResult solve_ada_fista(const Problem& problem,
                             const SolverConfig& config, const AdaConfig& ada,
                             std::span<const double> x0) {
  if (config.schedule)
    throw std::invalid_argument(
        "the adaptive solver owns its schedule; leave config.schedule unset");
  return run_loop(problem, config, x0, nullptr, &ada);
}

}  // namespace fista
