#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Self-contained check suites behind the `verify` CLI subcommand. The same
// functions back the momentum and prox acceptance gates, so the command line
// and the test binary cannot drift apart.

namespace fista::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Suite {
  std::string name;
  std::vector<CheckResult> checks;
  bool ok() const;
};

// t_k^2 - t_k <= t_{k-1}^2 (relative slack 1e-9) over the grid
// p in {0.02, 0.1, 0.5, 1} x q in {0, p^2, (2-p)^2}, r = 4, k <= 10^4, plus
// the o(1/k) chain p(1-p)(k+1)/2 <= (1-p) t_k <= t_{k-1}^2 - (t_k^2 - t_k)
// and t_k >= (k+1) p / 2 wherever p < 1 and q >= p^2.
Suite key_inequality_suite(long k_max = 10000);

// |a_k - limit| <= 1e-6 after 10^6 recurrence steps for r < 4 samples,
// including the p = q = 1 special case a_inf = r / 4.
Suite limit_suite(long k_max = 1000000);

// Prox operators against the independent searches in oracles.hpp (1e-6),
// the exact prox_linf + l1-ball-projection identity, and envelope gradients
// against central differences away from kinks.
Suite prox_suite(std::uint64_t seed = 1234);

std::vector<Suite> all_suites();

// One line per check: "[PASS|FAIL] <suite>/<name>: <detail>".
void print(std::ostream& out, const Suite& suite);

}  // namespace fista::verify
