#pragma once

#include <cstddef>
#include <span>

// Dense vector/matrix kernels used by the solvers. The parallel versions
// accumulate each output element in the same order as the serial reference,
// so for a fixed binary the two produce bit-identical results; tests in
// tests/test_kernels.cpp and the bench/ target compare them.
//
// Matrices are row-major, size m*n, passed as flat spans.

namespace fista::kernels {

// Caps the number of OpenMP threads used by all kernels. No-op when built
// without OpenMP.
void set_threads(int n);
int max_threads();

// y = K x
void gemv(std::size_t m, std::size_t n, std::span<const double> K,
          std::span<const double> x, std::span<double> y);

// r = K x - f
void gemv_residual(std::size_t m, std::size_t n, std::span<const double> K,
                   std::span<const double> x, std::span<const double> f,
                   std::span<double> r);

// g = K^T r
void gemv_t(std::size_t m, std::size_t n, std::span<const double> K,
            std::span<const double> r, std::span<double> g);

// y = x + a (x - x_prev)
void extrapolate(std::span<const double> x, std::span<const double> x_prev,
                 double a, std::span<double> y);

// out = x - s g
void gradient_step(std::span<const double> x, double s,
                   std::span<const double> g, std::span<double> out);

// out_i = sign(x_i) max(|x_i| - tau, 0)
void soft_threshold(std::span<const double> x, double tau,
                    std::span<double> out);

// Reductions are kept serial: they are O(n) next to the O(mn) matvecs and a
// fixed summation order keeps every run of a given binary deterministic.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm1(std::span<const double> a);
double norm_inf(std::span<const double> a);
double diff_norm2(std::span<const double> a, std::span<const double> b);

namespace serial {

// Plain-loop reference implementations.
void gemv(std::size_t m, std::size_t n, std::span<const double> K,
          std::span<const double> x, std::span<double> y);
void gemv_residual(std::size_t m, std::size_t n, std::span<const double> K,
                   std::span<const double> x, std::span<const double> f,
                   std::span<double> r);
void gemv_t(std::size_t m, std::size_t n, std::span<const double> K,
            std::span<const double> r, std::span<double> g);
void extrapolate(std::span<const double> x, std::span<const double> x_prev,
                 double a, std::span<double> y);
void soft_threshold(std::span<const double> x, double tau,
                    std::span<double> out);

}  // namespace serial

}  // namespace fista::kernels
