#include "fista/kernels.hpp"

#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fista::kernels {

namespace {
// Work below these sizes is not worth a parallel region.
constexpr std::int64_t kMatvecCutoff = 1 << 14;
constexpr std::int64_t kVectorCutoff = 1 << 13;
// gemv_t sweeps rows once per column block; the block fits in L1.
constexpr std::int64_t kColBlock = 256;
}  // namespace

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void gemv(std::size_t m, std::size_t n, std::span<const double> K,
          std::span<const double> x, std::span<double> y) {
  const auto im = static_cast<std::int64_t>(m);
  const auto in = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (im * in > kMatvecCutoff)
  for (std::int64_t i = 0; i < im; ++i) {
    const double* row = K.data() + i * in;
    double acc = 0.0;
    for (std::int64_t j = 0; j < in; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void gemv_residual(std::size_t m, std::size_t n, std::span<const double> K,
                   std::span<const double> x, std::span<const double> f,
                   std::span<double> r) {
  const auto im = static_cast<std::int64_t>(m);
  const auto in = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (im * in > kMatvecCutoff)
  for (std::int64_t i = 0; i < im; ++i) {
    const double* row = K.data() + i * in;
    double acc = 0.0;
    for (std::int64_t j = 0; j < in; ++j) acc += row[j] * x[j];
    r[i] = acc - f[i];
  }
}

void gemv_t(std::size_t m, std::size_t n, std::span<const double> K,
            std::span<const double> r, std::span<double> g) {
  const auto im = static_cast<std::int64_t>(m);
  const auto in = static_cast<std::int64_t>(n);
  const std::int64_t nblocks = (in + kColBlock - 1) / kColBlock;
  // Each block of output columns is owned by one thread and accumulated in
  // row order, matching the serial reference exactly.
#pragma omp parallel for schedule(static) if (im * in > kMatvecCutoff)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t j0 = b * kColBlock;
    const std::int64_t j1 = std::min(j0 + kColBlock, in);
    for (std::int64_t j = j0; j < j1; ++j) g[j] = 0.0;
    for (std::int64_t i = 0; i < im; ++i) {
      const double* row = K.data() + i * in;
      const double ri = r[i];
      for (std::int64_t j = j0; j < j1; ++j) g[j] += row[j] * ri;
    }
  }
}

void extrapolate(std::span<const double> x, std::span<const double> x_prev,
                 double a, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (n > kVectorCutoff)
  for (std::int64_t i = 0; i < n; ++i) y[i] = x[i] + a * (x[i] - x_prev[i]);
}

void gradient_step(std::span<const double> x, double s,
                   std::span<const double> g, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (n > kVectorCutoff)
  for (std::int64_t i = 0; i < n; ++i) out[i] = x[i] - s * g[i];
}

void soft_threshold(std::span<const double> x, double tau,
                    std::span<double> out) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (n > kVectorCutoff)
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = x[i];
    const double mag = std::fabs(v) - tau;
    out[i] = mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm1(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += std::fabs(v);
  return acc;
}

double norm_inf(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc = std::max(acc, std::fabs(v));
  return acc;
}

double diff_norm2(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

namespace serial {

void gemv(std::size_t m, std::size_t n, std::span<const double> K,
          std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = K.data() + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void gemv_residual(std::size_t m, std::size_t n, std::span<const double> K,
                   std::span<const double> x, std::span<const double> f,
                   std::span<double> r) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = K.data() + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    r[i] = acc - f[i];
  }
}

void gemv_t(std::size_t m, std::size_t n, std::span<const double> K,
            std::span<const double> r, std::span<double> g) {
  for (std::size_t j = 0; j < n; ++j) g[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = K.data() + i * n;
    const double ri = r[i];
    for (std::size_t j = 0; j < n; ++j) g[j] += row[j] * ri;
  }
}

void extrapolate(std::span<const double> x, std::span<const double> x_prev,
                 double a, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = x[i] + a * (x[i] - x_prev[i]);
}

void soft_threshold(std::span<const double> x, double tau,
                    std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    const double mag = std::fabs(v) - tau;
    out[i] = mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
  }
}

}  // namespace serial

}  // namespace fista::kernels
