#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fista/prox.hpp"

// Slow, independent solutions of the same minimization problems the prox
// operators solve in closed form. Golden-section and bisection searches over
// one-dimensional reformulations, plus Gram-matrix singular values; none of
// them share code with the production operators. Intended for small inputs
// (n <= a few dozen) inside tests and the verification suites.

namespace fista::oracle {

// argmin_z 1/2 (x - z)^2 + tau |z|, one golden-section search per entry.
std::vector<double> prox_l1(std::span<const double> x, double tau);

// Per block: minimize over the scaling beta in [0,1] of z = beta x_b,
// evaluating 1/2 ||x_b - z||^2 + tau ||z|| directly.
std::vector<double> prox_group_l12(std::span<const double> x, double tau,
                                   const GroupStructure& groups);

// Bisection on the threshold theta with sum_i max(|x_i| - theta, 0) = radius.
std::vector<double> project_l1_ball(std::span<const double> x, double radius);

// Golden-section search on the clamp level s >= 0 minimizing
//   1/2 sum_i max(|x_i| - s, 0)^2 + tau s,  z_i = clamp(x_i, -s, s).
std::vector<double> prox_linf(std::span<const double> x, double tau);

// Descending singular values via the eigenvalues of X^T X (or X X^T,
// whichever is smaller).
std::vector<double> singular_values(std::size_t rows, std::size_t cols,
                                    std::span<const double> X);

// 1/2 ||x - z||^2 + tau R(z) evaluated honestly; used by candidate-beating
// checks.
double prox_objective_l1(std::span<const double> x, std::span<const double> z,
                         double tau);
double prox_objective_group(std::span<const double> x,
                            std::span<const double> z, double tau,
                            const GroupStructure& groups);
double prox_objective_linf(std::span<const double> x,
                           std::span<const double> z, double tau);
double prox_objective_nuclear(std::size_t rows, std::size_t cols,
                              std::span<const double> X,
                              std::span<const double> Z, double tau);

}  // namespace fista::oracle
