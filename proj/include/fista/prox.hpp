#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

// Proximity operators for the regularizers the experiments use. All scales
// accept tau >= 0 (tau = 0 is the identity); outputs may alias inputs.

namespace fista {

// Uniform contiguous partition of {0..n-1} into blocks of block_size; the
// last block is shorter when block_size does not divide n.
class GroupStructure {
 public:
  GroupStructure(std::size_t n, std::size_t block_size);

  std::size_t size() const { return n_; }
  std::size_t block_size() const { return block_size_; }
  std::size_t block_count() const { return count_; }
  // [begin, end) index range of block b
  std::pair<std::size_t, std::size_t> block(std::size_t b) const;

 private:
  std::size_t n_, block_size_, count_;
};

// Soft thresholding, prox of tau ||.||_1.
void prox_l1(std::span<const double> x, double tau, std::span<double> out);

// Block soft thresholding, prox of tau sum_b ||x_b||_2. A zero-norm block
// stays zero.
void prox_group_l12(std::span<const double> x, const GroupStructure& groups,
                    double tau, std::span<double> out);

// Euclidean projection onto {z : ||z||_1 <= radius}, by sort and threshold.
void project_l1_ball(std::span<const double> x, double radius,
                     std::span<double> out);

// Prox of tau ||.||_inf via the Moreau decomposition
//   prox_{tau ||.||_inf}(x) = x - project_l1_ball(x, tau).
void prox_linf(std::span<const double> x, double tau, std::span<double> out);

// Singular value soft thresholding, prox of tau ||.||_* for a row-major
// rows x cols matrix. Throws NumericalFailure if the SVD does not converge.
void prox_nuclear(std::size_t rows, std::size_t cols,
                  std::span<const double> X, double tau,
                  std::span<double> out);

struct MoreauEnvelope {
  double value;
  std::vector<double> grad;
};

// Moreau envelope of lam ||.||_1 of index 1, evaluated entrywise on a flat
// vector or matrix: value = min_z 1/2 ||u-z||^2 + lam ||z||_1 and
// grad = u - z* with z* = prox_l1(u, lam). The gradient is 1-Lipschitz.
MoreauEnvelope moreau_env_l1(std::span<const double> u, double lam);

// Regularizer values, for objective evaluation.
double group_l12_norm(std::span<const double> x, const GroupStructure& groups);
double nuclear_norm(std::size_t rows, std::size_t cols,
                    std::span<const double> X);

}  // namespace fista
