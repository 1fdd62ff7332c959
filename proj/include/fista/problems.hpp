#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fista/prox.hpp"

// Seeded generators for the experiment instances, plus the objective /
// gradient / Lipschitz machinery the solvers consume. Instances regenerate
// bit-identically from (kind, dims, structure, seed, noise_level); the draw
// order is documented at each generator.

namespace fista {

enum class Regularizer { L1, GroupL12, LInf };
enum class SignalKind { Sparse, Group, Saturated };

// min_x 1/2 ||Kx - f||^2 + lambda R(x), with f = K x_ob + w.
struct LinearInverseInstance {
  std::size_t m = 0, n = 0;
  std::vector<double> K;     // row-major m x n, iid standard normal
  std::vector<double> f;     // observation
  std::vector<double> x_ob;  // ground truth
  double lambda = 0.0;
  Regularizer reg = Regularizer::L1;
  std::size_t block_size = 8;  // GroupL12 partition width
  double lipschitz = 0.0;      // >= ||K||_op^2
  std::uint64_t seed = 0;
  double noise_level = 0.0;
  std::size_t structure = 0;  // nonzeros / active blocks / saturated entries
};

// min_{x_l} env_{lambda1 ||.||_1}(y - x_l) + lambda2 ||x_l||_*, the
// principal component pursuit problem after eliminating the sparse part.
// The smooth part has Lipschitz constant 1.
struct PcpInstance {
  std::size_t m = 0, n = 0;
  std::vector<double> y;       // x_l_ob + x_s_ob + w, row-major
  std::vector<double> x_l_ob;  // low rank part
  std::vector<double> x_s_ob;  // sparse part
  double lambda1 = 0.0, lambda2 = 0.0;
  std::uint64_t seed = 0;
  double noise_level = 0.0;
  std::size_t rank = 0;
  double sparse_fraction = 0.0;
};

// Draw order from Rng(seed): K row by row; then x_ob (sparse: support via
// partial Fisher-Yates then one normal per selected index; group: active
// blocks via partial Fisher-Yates then one normal per entry; saturated: one
// uniform in [-1,1] per entry, then the saturated positions via partial
// Fisher-Yates with one sign bit each); then m normals for the noise
// direction, scaled to noise_level * ||K x_ob|| / sqrt(m).
//
// lambda defaults to 0.1 ||K^T f||_inf (L1, GroupL12) or 0.1 ||K^T f||_1
// (LInf, the dual-norm analogue); pass lambda_override to pin it.
LinearInverseInstance gen_linear_inverse(
    SignalKind kind, std::size_t m, std::size_t n, std::size_t structure,
    std::uint64_t seed, double noise_level,
    std::optional<double> lambda_override = std::nullopt,
    std::size_t block_size = 8);

// Draw order from Rng(seed): A (m x rank) row by row, B (n x rank) row by
// row, x_l_ob = A B^T; then per entry of x_s_ob a support coin, and for
// active entries a sign bit and a magnitude 1 + uniform01(); then mn normals
// for the noise direction, scaled to noise_level * ||x_l+x_s||_F / sqrt(mn).
// lambda1 defaults to 1/sqrt(max(m,n)), lambda2 to 1.
PcpInstance gen_pcp(std::size_t m, std::size_t n, std::size_t rank,
                    double sparse_fraction, std::uint64_t seed,
                    double noise_level,
                    std::optional<double> lambda1 = std::nullopt,
                    std::optional<double> lambda2 = std::nullopt);

struct PowerMethodResult {
  double value = 0.0;  // ||K||_op^2 estimate, inflated by 1 + 1e-6
  bool converged = false;
  long iterations = 0;
};

// Power iteration on K^T K from the all-ones start, to relative tolerance
// tol on the Rayleigh quotient. The returned value is the final quotient
// inflated by 1 + 1e-6 so it upper-bounds the true constant at convergence.
PowerMethodResult lipschitz_power_method(std::size_t m, std::size_t n,
                                         std::span<const double> K,
                                         double tol = 1e-9,
                                         long max_iters = 50000);

// What a solver needs from (P): dimensions, the Lipschitz constant of the
// smooth part, Phi = F + lambda R, grad F, and prox_{gamma lambda R}.
// Adapters keep per-run scratch, so give each concurrent run its own.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual std::size_t dim() const = 0;
  virtual double lipschitz() const = 0;
  virtual double objective(std::span<const double> x) const = 0;
  virtual void grad_smooth(std::span<const double> x,
                           std::span<double> g) const = 0;
  virtual void prox_step(std::span<const double> v, double gamma,
                         std::span<double> out) const = 0;
};

class LinearInverseProblem final : public Problem {
 public:
  explicit LinearInverseProblem(const LinearInverseInstance& inst);
  std::size_t dim() const override { return inst_.n; }
  double lipschitz() const override { return inst_.lipschitz; }
  double objective(std::span<const double> x) const override;
  void grad_smooth(std::span<const double> x,
                   std::span<double> g) const override;
  void prox_step(std::span<const double> v, double gamma,
                 std::span<double> out) const override;
  double smooth_value(std::span<const double> x) const;  // 1/2 ||Kx-f||^2
  double reg_value(std::span<const double> x) const;     // R(x), unweighted

 private:
  const LinearInverseInstance& inst_;
  GroupStructure groups_;
  mutable std::vector<double> resid_;
};

class PcpProblem final : public Problem {
 public:
  explicit PcpProblem(const PcpInstance& inst);
  std::size_t dim() const override { return inst_.m * inst_.n; }
  double lipschitz() const override { return 1.0; }
  double objective(std::span<const double> x_l) const override;
  void grad_smooth(std::span<const double> x_l,
                   std::span<double> g) const override;
  void prox_step(std::span<const double> v, double gamma,
                 std::span<double> out) const override;

 private:
  const PcpInstance& inst_;
  mutable std::vector<double> u_, z_;
};

// Free-function forms used by tests and the finite-difference checks.
double objective(const LinearInverseInstance& inst, std::span<const double> x);
std::vector<double> grad_f(const LinearInverseInstance& inst,
                           std::span<const double> x);
double objective(const PcpInstance& inst, std::span<const double> x_l);
std::vector<double> grad_f(const PcpInstance& inst,
                           std::span<const double> x_l);

}  // namespace fista
