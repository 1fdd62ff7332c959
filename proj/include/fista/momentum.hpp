#pragma once

#include <string>

// The (t_k, a_k) inertia sequences behind every scheme:
//
//   BT        t_k = (1 + sqrt(1 + 4 t_{k-1}^2)) / 2
//   CD        t_k = (k + d) / d
//   Mod       t_k = (p + sqrt(q + r t_{k-1}^2)) / 2
//
// with t_0 = 1 and a_k = (t_{k-1} - 1) / t_k throughout. BT is represented
// as Mod with (p,q,r) = (1,1,4) and shares its code path, so the two emit
// identical streams bit for bit.

namespace fista {

enum class Scheme { BT, CD, Mod };

class MomentumParams {
 public:
  // d > 0; the sequence-convergence theory wants d > 2 while d = 2 is the
  // common experimental choice, see cd_outside_theory().
  static MomentumParams cd(double d);
  // p in ]0,1], q >= 0, r in ]0,4].
  static MomentumParams mod(double p, double q, double r);
  static MomentumParams bt() { return with_scheme(Scheme::BT, mod(1.0, 1.0, 4.0)); }
  // Slow-momentum preset (p,q) = (1/50, 1/10), r = 4.
  static MomentumParams lazy() { return mod(1.0 / 50.0, 1.0 / 10.0, 4.0); }

  Scheme scheme() const { return scheme_; }
  double p() const { return p_; }
  double q() const { return q_; }
  double r() const { return r_; }
  double d() const { return d_; }

  // True for CD with d <= 2: runs fine, but outside the regime the
  // sequence-convergence results cover.
  bool cd_outside_theory() const { return scheme_ == Scheme::CD && d_ <= 2.0; }

  std::string label() const;

 private:
  MomentumParams() = default;
  static MomentumParams with_scheme(Scheme s, MomentumParams m) {
    m.scheme_ = s;
    return m;
  }
  Scheme scheme_ = Scheme::Mod;
  double p_ = 1.0, q_ = 1.0, r_ = 4.0, d_ = 0.0;
};

struct MomentumState {
  long k = 1;          // index of the next update
  double t_prev = 1.0; // t_{k-1}
};

struct MomentumStep {
  double t;
  double a;
  MomentumState next;
};

// One step of the Mod recurrence. Shared by momentum_step() and the
// adaptive solver so that equal parameters give equal doubles.
double mod_t_update(double p, double q, double r, double t_prev);

MomentumStep momentum_step(const MomentumParams& params,
                           const MomentumState& state);

struct InertiaLimit {
  double a_inf;
  double t_inf;      // +inf when t diverges
  bool t_divergent;  // r == 4
};

// Limiting inertia for the Mod recurrence: for r < 4,
//   a_inf = 1 - (4-r)/(2p + Delta),  Delta = sqrt(r p^2 + (4-r) q),
// and for r = 4 the t sequence diverges with a_k -> 1.
InertiaLimit limit_inertia(double p, double q, double r);

struct InequalityReport {
  bool holds;
  double max_violation;  // largest relative excess seen, <= slack when holds
  long worst_k;
};

// With r = 4, checks t_k^2 - t_k <= t_{k-1}^2 for k <= k_max (relative slack
// 1e-9). Exact equality when q = (2-p)^2; expected to fail for larger q.
InequalityReport check_key_inequality(double p, double q, long k_max);

// With r = 4, checks the relations behind the o(1/k^2) analysis:
//   p(1-p)(k+1)/2  <=  (1-p) t_k,
//   (1-p) t_k - (t_{k-1}^2 - (t_k^2 - t_k))  =  (q - p^2)/4,
//   t_k  >=  (k+1) p / 2,
// for k <= k_max with relative slack 1e-9. The middle line is an exact
// algebraic identity of the recurrence; at q = p^2 its right side vanishes
// and the first two lines chain into
//   p(1-p)(k+1)/2 <= (1-p) t_k <= t_{k-1}^2 - (t_k^2 - t_k),
// while at p = 1 everything degenerates to 0 <= 0.
InequalityReport check_little_o_inequalities(double p, double q, long k_max);

}  // namespace fista
