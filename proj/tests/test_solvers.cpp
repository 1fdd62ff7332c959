#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fista/errors.hpp"
#include "fista/kernels.hpp"
#include "fista/problems.hpp"
#include "fista/prox.hpp"
#include "fista/rng.hpp"
#include "fista/solvers.hpp"

using namespace fista;

namespace {

// F(x) = (alpha/2) ||x||^2, R = 0; minimizer 0, Lipschitz constant alpha.
class Quadratic final : public Problem {
 public:
  Quadratic(std::size_t n, double alpha) : n_(n), alpha_(alpha) {}
  std::size_t dim() const override { return n_; }
  double lipschitz() const override { return alpha_; }
  double objective(std::span<const double> x) const override {
    return 0.5 * alpha_ * kernels::dot(x, x);
  }
  void grad_smooth(std::span<const double> x,
                   std::span<double> g) const override {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = alpha_ * x[i];
  }
  void prox_step(std::span<const double> v, double,
                 std::span<double> out) const override {
    std::copy(v.begin(), v.end(), out.begin());
  }

 private:
  std::size_t n_;
  double alpha_;
};

LinearInverseInstance identity_lasso() {
  LinearInverseInstance inst;
  inst.m = inst.n = 4;
  inst.K.assign(16, 0.0);
  for (int i = 0; i < 4; ++i) inst.K[static_cast<std::size_t>(i) * 4 + i] = 1.0;
  inst.f = {1.2, -0.4, 0.1, -2.0};
  inst.x_ob.assign(4, 0.0);
  inst.lambda = 0.5;
  inst.reg = Regularizer::L1;
  inst.lipschitz = 1.0;
  return inst;
}

}  // namespace

TEST_CASE("gradient descent lands on the quadratic minimizer in one step") {
  const Quadratic problem(1, 1.0);
  SolverConfig config;  // gamma = 1/L = 1
  const std::vector<double> x0{1.0};
  const SolverResult res = solve_fbs(problem, config, x0);
  CHECK(res.x == std::vector<double>{0.0});
  CHECK(res.iterations <= 2);
  CHECK(res.reason == TerminationReason::Tolerance);
  CHECK(res.trace.size() == static_cast<std::size_t>(res.iterations));

  // every schedule does the same: the first step carries no inertia
  SolverConfig one;
  one.max_iters = 1;
  one.tol = 0.0;
  for (const auto& params : {MomentumParams::bt(), MomentumParams::cd(2.0),
                             MomentumParams::lazy()}) {
    one.schedule = params;
    CHECK(solve_fista(problem, one, x0).x == std::vector<double>{0.0});
  }
}

TEST_CASE("infinite tolerance stops after one iteration") {
  const Quadratic problem(3, 2.0);
  SolverConfig config;
  config.tol = std::numeric_limits<double>::infinity();
  const std::vector<double> x0{5.0, -1.0, 0.5};
  const SolverResult res = solve_fbs(problem, config, x0);
  CHECK(res.iterations == 1);
  CHECK(res.reason == TerminationReason::Tolerance);
}

TEST_CASE("identity operator reduces the problem to one soft threshold") {
  const LinearInverseInstance inst = identity_lasso();
  const LinearInverseProblem problem(inst);
  std::vector<double> closed(4);
  prox_l1(inst.f, inst.lambda, closed);

  SolverConfig config;
  const SolverResult fbs = solve_fbs(problem, config);
  REQUIRE(fbs.reason == TerminationReason::Tolerance);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(fbs.x[i] - closed[i]) <= 1e-8);

  const SolverResult fista = solve_fista(problem, config);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(fista.x[i] - closed[i]) <= 1e-8);
    CHECK(std::abs(fista.x[i] - fbs.x[i]) <= 1e-8);
  }
}

TEST_CASE("BT schedule equals Mod(1,1,4) iterate for iterate") {
  const auto inst = gen_linear_inverse(SignalKind::Sparse, 20, 50, 5, 17, 0.01);
  const LinearInverseProblem problem(inst);
  SolverConfig config;
  config.max_iters = 300;
  config.tol = 0.0;

  config.schedule = MomentumParams::bt();
  const SolverResult bt = solve_fista(problem, config);
  config.schedule = MomentumParams::mod(1.0, 1.0, 4.0);
  const SolverResult mod = solve_fista(problem, config);

  CHECK(bt.x == mod.x);
  REQUIRE(bt.trace.size() == mod.trace.size());
  for (std::size_t i = 0; i < bt.trace.size(); ++i) {
    CHECK(bt.trace[i].t == mod.trace[i].t);
    CHECK(bt.trace[i].a == mod.trace[i].a);
    CHECK(bt.trace[i].norm_dx == mod.trace[i].norm_dx);
  }
}

TEST_CASE("tolerance termination implies an approximate fixed point") {
  const auto inst = gen_linear_inverse(SignalKind::Sparse, 30, 80, 6, 4, 0.01);
  const LinearInverseProblem problem(inst);
  SolverConfig config;  // tol 1e-9
  const SolverResult res = solve_fista(problem, config);
  REQUIRE(res.reason == TerminationReason::Tolerance);
  CHECK(res.trace.back().norm_dx <= config.tol);

  const double gamma = 1.0 / inst.lipschitz;
  std::vector<double> g(problem.dim()), z(problem.dim());
  problem.grad_smooth(res.x, g);
  kernels::gradient_step(res.x, gamma, g, z);
  problem.prox_step(z, gamma, z);
  CHECK(kernels::diff_norm2(res.x, z) <= 10.0 * config.tol);
}

TEST_CASE("plain splitting decreases the objective monotonically") {
  const auto inst = gen_linear_inverse(SignalKind::Group, 24, 32, 2, 6, 0.01);
  const LinearInverseProblem problem(inst);
  SolverConfig config;
  config.record_objective = true;
  config.max_iters = 400;
  const SolverResult res = solve_fbs(problem, config);
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    const double prev = *res.trace[i - 1].obj;
    CHECK(*res.trace[i].obj <= prev + 1e-12 * std::abs(prev));
  }
}

TEST_CASE("estimator window keeps two distinct pairs") {
  EstimatorWindow w;
  CHECK(w.size() == 0);
  const std::vector<double> x1{1.0, 2.0}, g1{0.1, 0.2};
  const std::vector<double> x2{1.0, 3.0}, g2{0.1, 0.3};
  w.push(x1, g1);
  CHECK(w.size() == 1);
  w.push(x1, g1);  // bitwise duplicate is dropped
  CHECK(w.size() == 1);
  w.push(x2, g2);
  CHECK(w.size() == 2);
  CHECK(w.newest().x == x2);
  CHECK(w.previous().x == x1);
  w.push(x2, g2);
  CHECK(w.newest().x == x2);
  CHECK(w.previous().x == x1);
  const std::vector<double> x3{0.0, 0.0}, g3{0.0, 0.0};
  w.push(x3, g3);
  CHECK(w.newest().x == x3);
  CHECK(w.previous().x == x2);
}

TEST_CASE("secant estimator is exact on quadratics") {
  EstimatorWindow w;
  Rng rng(8);
  std::vector<double> xa(5), xb(5), ga(5), gb(5);
  for (int i = 0; i < 5; ++i) {
    xa[i] = rng.normal();
    xb[i] = rng.normal();
    ga[i] = 0.3 * xa[i];
    gb[i] = 0.3 * xb[i];
  }
  w.push(xa, ga);
  w.push(xb, gb);
  CHECK(estimate_strong_convexity(w, 0.7, 1e-12, 10.0) ==
        doctest::Approx(0.3).epsilon(1e-12));

  // clamping
  CHECK(estimate_strong_convexity(w, 0.7, 0.5, 10.0) == 0.5);
  CHECK(estimate_strong_convexity(w, 0.7, 1e-12, 0.1) == 0.1);

  // degenerate window falls back to the previous estimate
  EstimatorWindow single;
  single.push(xa, ga);
  CHECK(estimate_strong_convexity(single, 0.7, 1e-12, 10.0) == 0.7);
}

TEST_CASE("secant estimate respects the Hessian eigenvalue range") {
  // least squares with K = diag(2,1): Hessian K^T K has spectrum {1, 4}
  LinearInverseInstance inst;
  inst.m = inst.n = 2;
  inst.K = {2.0, 0.0, 0.0, 1.0};
  inst.f = {1.0, -1.0};
  inst.x_ob = {0.0, 0.0};
  inst.lambda = 0.1;
  inst.reg = Regularizer::L1;
  inst.lipschitz = 4.0;
  const LinearInverseProblem problem(inst);

  Rng rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> xa{rng.normal(), rng.normal()};
    std::vector<double> xb{rng.normal(), rng.normal()};
    std::vector<double> ga(2), gb(2);
    problem.grad_smooth(xa, ga);
    problem.grad_smooth(xb, gb);
    EstimatorWindow w;
    w.push(xa, ga);
    w.push(xb, gb);
    const double est = estimate_strong_convexity(w, 0.0, 1e-12, 100.0);
    CHECK(est >= 1.0 - 1e-9);
    CHECK(est <= 4.0 + 1e-9);
  }
}

TEST_CASE("optimal inertia and the growth-rate map") {
  CHECK(optimal_inertia(0.0, 1.0) == 1.0);
  CHECK(optimal_inertia(1.0, 1.0) == 0.0);
  CHECK(optimal_inertia(0.25, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(f_of_alpha(0.0, 1.0) == 4.0);
  CHECK(f_of_alpha(1.0, 1.0) == 0.0);
  CHECK(f_of_alpha(0.25, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  double last = optimal_inertia(0.0, 1.0);
  for (double ga = 0.1; ga <= 1.0; ga += 0.1) {
    const double a = optimal_inertia(ga, 1.0);
    CHECK(a < last);
    last = a;
  }
  CHECK_THROWS_AS(optimal_inertia(1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(optimal_inertia(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("adaptive solver with the estimate pinned at zero is plain FISTA") {
  const auto inst = gen_linear_inverse(SignalKind::Sparse, 25, 60, 4, 12, 0.01);
  const LinearInverseProblem problem(inst);
  SolverConfig config;
  config.max_iters = 1000;
  config.tol = 0.0;

  AdaConfig ada;
  ada.kappa = 7;
  ada.estimator = [](const EstimatorWindow&, double) { return 0.0; };
  const SolverResult adaptive = solve_ada_fista(problem, config, ada);

  config.schedule = MomentumParams::bt();
  const SolverResult bt = solve_fista(problem, config);

  CHECK(adaptive.x == bt.x);
  REQUIRE(adaptive.trace.size() == bt.trace.size());
  for (std::size_t i = 0; i < bt.trace.size(); ++i) {
    CHECK(adaptive.trace[i].t == bt.trace[i].t);
    CHECK(adaptive.trace[i].a == bt.trace[i].a);
    CHECK(adaptive.trace[i].norm_dx == bt.trace[i].norm_dx);
    CHECK(adaptive.trace[i].r == 4.0);
    CHECK(adaptive.trace[i].alpha == 0.0);
  }
}

TEST_CASE("adaptive momentum dies on a perfectly conditioned quadratic") {
  // gamma * alpha = 1, so the refresh maps r to nearly zero and the inertia
  // collapses right after the first informed refresh
  const Quadratic problem(4, 2.0);
  SolverConfig config;
  config.max_iters = 50;
  config.tol = 0.0;
  AdaConfig ada;
  ada.kappa = 2;  // refreshes at k = 1, 3, 5, ...
  const std::vector<double> x0{1.0, -2.0, 0.5, 3.0};
  const SolverResult res = solve_ada_fista(problem, config, ada, x0);
  REQUIRE(res.trace.size() == 50);
  // k = 3 is the first refresh with two stored pairs; its own a_k spikes
  // (t collapses while t_prev is still large), everything after is tiny
  for (std::size_t i = 3; i < res.trace.size(); ++i) {
    CHECK(*res.trace[i].a <= 1e-5);
    CHECK(*res.trace[i].r <= 1e-5);
  }
  // the exact secant value 2.0 clamps to the ceiling (1 - 1e-6) / gamma
  CHECK(*res.trace.back().alpha == doctest::Approx(2.0 * (1.0 - 1e-6)));
}

TEST_CASE("step size guards") {
  const auto inst = gen_linear_inverse(SignalKind::Sparse, 10, 20, 2, 3, 0.01);
  const LinearInverseProblem problem(inst);
  const double L = inst.lipschitz;

  SolverConfig config;
  config.gamma = 0.5 / L;
  CHECK_THROWS_AS(solve_fista(problem, config), std::invalid_argument);
  config.allow_gamma_override = true;
  CHECK_NOTHROW(solve_fista(problem, config));

  SolverConfig fbs;
  fbs.gamma = 2.0 / L;
  CHECK_THROWS_AS(solve_fbs(problem, fbs), std::invalid_argument);
  fbs.gamma = 1.9 / L;
  CHECK_NOTHROW(solve_fbs(problem, fbs));
  fbs.gamma = -1.0;
  CHECK_THROWS_AS(solve_fbs(problem, fbs), std::invalid_argument);

  SolverConfig sched;
  sched.schedule = MomentumParams::bt();
  CHECK_THROWS_AS(solve_fbs(problem, sched), std::invalid_argument);
  AdaConfig ada;
  CHECK_THROWS_AS(solve_ada_fista(problem, sched, ada), std::invalid_argument);
}

TEST_CASE("a wildly long step blows up and is reported") {
  const Quadratic problem(2, 1.0);
  SolverConfig config;
  config.gamma = 10.0;  // far outside ]0, 2/L[
  config.allow_gamma_override = true;
  config.max_iters = 100000;
  config.tol = 0.0;
  const std::vector<double> x0{1.0, 1.0};
  try {
    solve_fista(problem, config, x0);
    FAIL("expected a numerical failure");
  } catch (const NumericalFailure& e) {
    CHECK(e.iteration >= 1);
  }
}

TEST_CASE("config validation") {
  const Quadratic problem(2, 1.0);
  SolverConfig config;
  config.max_iters = 0;
  CHECK_THROWS_AS(solve_fbs(problem, config), std::invalid_argument);
  config.max_iters = 10;
  config.tol = -1.0;
  CHECK_THROWS_AS(solve_fbs(problem, config), std::invalid_argument);
  config.tol = 1e-9;
  CHECK_THROWS_AS(solve_fbs(problem, config, std::vector<double>{1.0, 2.0, 3.0}),
                  std::invalid_argument);

  AdaConfig bad;
  bad.kappa = 0;
  CHECK_THROWS_AS(solve_ada_fista(problem, SolverConfig{}, bad),
                  std::invalid_argument);
  bad.kappa = 1;
  bad.alpha_floor = 0.5;
  bad.alpha_ceiling = 0.1;
  CHECK_THROWS_AS(solve_ada_fista(problem, SolverConfig{}, bad),
                  std::invalid_argument);
  bad.alpha_floor = 1e-12;
  bad.alpha_ceiling = 1.0;  // not < 1/gamma = L = 1
  CHECK_THROWS_AS(solve_ada_fista(problem, SolverConfig{}, bad),
                  std::invalid_argument);
}
