#include "fista/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>

#include "fista/kernels.hpp"
#include "fista/momentum.hpp"
#include "fista/oracles.hpp"
#include "fista/prox.hpp"
#include "fista/rng.hpp"

namespace fista::verify {
namespace {

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

std::vector<double> random_vector(std::size_t n, Rng& rng, double scale) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

bool Suite::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

Suite key_inequality_suite(long k_max) {
  Suite suite{"key-inequality", {}};
  const double ps[] = {0.02, 0.1, 0.5, 1.0};
  for (const double p : ps) {
    const double qs[] = {0.0, p * p, (2.0 - p) * (2.0 - p)};
    for (const double q : qs) {
      const InequalityReport rep = check_key_inequality(p, q, k_max);
      suite.checks.push_back(
          {fmt("t_k^2 - t_k <= t_(k-1)^2 at p=%g q=%g", p, q), rep.holds,
           fmt("max relative excess %.3g at k=%.0f", rep.max_violation,
               static_cast<double>(rep.worst_k))});
      if (p < 1.0 && q >= p * p) {
        const InequalityReport chain = check_little_o_inequalities(p, q, k_max);
        suite.checks.push_back(
            {fmt("o(1/k^2) relations at p=%g q=%g", p, q), chain.holds,
             fmt("max relative excess %.3g at k=%.0f", chain.max_violation,
                 static_cast<double>(chain.worst_k))});
      }
    }
  }
  return suite;
}

Suite limit_suite(long k_max) {
  Suite suite{"limits", {}};
  struct Sample {
    double p, q, r;
  };
  const Sample samples[] = {{1.0, 1.0, 2.0},  {1.0, 1.0, 3.0},
                            {1.0, 1.0, 3.9},  {0.5, 1.0, 3.0},
                            {0.02, 0.1, 3.5}, {1.0, 0.0, 2.0},
                            {0.1, 3.61, 3.0}};
  for (const auto& s : samples) {
    const InertiaLimit lim = limit_inertia(s.p, s.q, s.r);
    double t_prev = 1.0, a = 0.0;
    for (long k = 1; k <= k_max; ++k) {
      const double t = mod_t_update(s.p, s.q, s.r, t_prev);
      a = (t_prev - 1.0) / t;
      t_prev = t;
    }
    const double err = std::abs(a - lim.a_inf);
    bool pass = err <= 1e-6;
    std::string name = fmt("a_k -> limit at p=%g q=%g r=%g", s.p, s.q, s.r);
    if (s.p == 1.0 && s.q == 1.0) {
      // Special case: the limit collapses to r/4.
      pass = pass && std::abs(lim.a_inf - s.r / 4.0) <= 1e-12;
      name += " (= r/4)";
    }
    suite.checks.push_back(
        {std::move(name), pass, fmt("|a - a_inf| = %.3g", err)});
  }
  return suite;
}

Suite prox_suite(std::uint64_t seed) {
  Suite suite{"prox", {}};
  Rng rng(seed);
  constexpr double kTol = 1e-6;

  {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = random_vector(5, rng, 2.0);
      const double tau = 0.1 + rng.uniform01();
      std::vector<double> got(x.size());
      prox_l1(x, tau, got);
      worst = std::max(worst, max_abs_diff(got, oracle::prox_l1(x, tau)));
    }
    suite.checks.push_back({"soft threshold vs scalar search", worst <= kTol,
                            fmt("max |diff| = %.3g", worst)});
  }

  {
    double worst = 0.0;
    const GroupStructure groups(4, 2);
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = random_vector(4, rng, 2.0);
      const double tau = 0.1 + rng.uniform01();
      std::vector<double> got(x.size());
      prox_group_l12(x, groups, tau, got);
      worst = std::max(
          worst, max_abs_diff(got, oracle::prox_group_l12(x, tau, groups)));
    }
    suite.checks.push_back({"block threshold vs radial search", worst <= kTol,
                            fmt("max |diff| = %.3g", worst)});
  }

  {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = random_vector(5, rng, 2.0);
      const double radius = 0.2 + 2.0 * rng.uniform01();
      std::vector<double> got(x.size());
      project_l1_ball(x, radius, got);
      worst = std::max(worst,
                       max_abs_diff(got, oracle::project_l1_ball(x, radius)));
    }
    suite.checks.push_back({"l1 ball projection vs bisection", worst <= kTol,
                            fmt("max |diff| = %.3g", worst)});
  }

  {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = random_vector(5, rng, 2.0);
      const double tau = 0.1 + rng.uniform01();
      std::vector<double> got(x.size());
      prox_linf(x, tau, got);
      worst = std::max(worst, max_abs_diff(got, oracle::prox_linf(x, tau)));
    }
    suite.checks.push_back({"max-norm prox vs clamp-level search",
                            worst <= kTol, fmt("max |diff| = %.3g", worst)});
  }

  {
    // Singular values of the prox output must equal max(sigma - tau, 0),
    // with sigma from an independent Gram-matrix eigendecomposition.
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t rows = 3 + rep % 2, cols = 4 - rep % 2;
      const auto X = random_vector(rows * cols, rng, 1.0);
      const auto sv_in = oracle::singular_values(rows, cols, X);
      const double tau = 0.2 + 0.5 * rng.uniform01();
      std::vector<double> Z(X.size());
      prox_nuclear(rows, cols, X, tau, Z);
      const auto sv_out = oracle::singular_values(rows, cols, Z);
      for (std::size_t i = 0; i < sv_out.size(); ++i) {
        const double want = std::max(sv_in[i] - tau, 0.0);
        worst = std::max(worst, std::abs(sv_out[i] - want));
      }
    }
    suite.checks.push_back({"singular value shrinkage vs Gram eigenvalues",
                            worst <= kTol, fmt("max |diff| = %.3g", worst)});
  }

  {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = random_vector(50, rng, 3.0);
      const double tau = 0.1 + 2.0 * rng.uniform01();
      std::vector<double> p(x.size()), b(x.size());
      prox_linf(x, tau, p);
      project_l1_ball(x, tau, b);
      for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(p[i] + b[i] - x[i]));
    }
    suite.checks.push_back({"prox + projection adds back to the input",
                            worst == 0.0, fmt("max |residual| = %.3g", worst)});
  }

  {
    // Central differences on the envelope value, skipping coordinates
    // within 1e-4 of the |u_i| = lam kinks where the difference quotient
    // itself degrades.
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const double lam = 0.7;
      auto u = random_vector(6, rng, 1.5);
      const double h = 1e-6;
      const MoreauEnvelope env = moreau_env_l1(u, lam);
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::abs(std::abs(u[i]) - lam) < 1e-4) continue;
        auto up = u, dn = u;
        up[i] += h;
        dn[i] -= h;
        const double fd = (moreau_env_l1(up, lam).value -
                           moreau_env_l1(dn, lam).value) /
                          (2.0 * h);
        worst = std::max(worst, std::abs(fd - env.grad[i]));
      }
    }
    suite.checks.push_back({"envelope gradient vs central differences",
                            worst <= kTol, fmt("max |diff| = %.3g", worst)});
  }

  return suite;
}

std::vector<Suite> all_suites() {
  return {key_inequality_suite(), limit_suite(), prox_suite()};
}

void print(std::ostream& out, const Suite& suite) {
  for (const CheckResult& c : suite.checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << suite.name << '/' << c.name
        << ": " << c.detail << '\n';
  }
}

}  // namespace fista::verify
