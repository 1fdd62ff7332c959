#include "fista/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fista/kernels.hpp"

namespace fista::oracle {
namespace {

// Golden-section minimization of a unimodal function on [lo, hi].
double golden_min(double lo, double hi, const std::function<double(double)>& f) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> prox_l1(std::span<const double> x, double tau) {
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double span = std::abs(xi) + tau + 1.0;
    z[i] = golden_min(-span, span, [&](double v) {
      return 0.5 * (xi - v) * (xi - v) + tau * std::abs(v);
    });
  }
  return z;
}

std::vector<double> prox_group_l12(std::span<const double> x, double tau,
                                   const GroupStructure& groups) {
  std::vector<double> z(x.begin(), x.end());
  for (std::size_t b = 0; b < groups.block_count(); ++b) {
    const auto [begin, end] = groups.block(b);
    const double beta = golden_min(0.0, 1.0, [&](double s) {
      double fit = 0.0, nrm = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const double zi = s * x[i];
        fit += (x[i] - zi) * (x[i] - zi);
        nrm += zi * zi;
      }
      return 0.5 * fit + tau * std::sqrt(nrm);
    });
    for (std::size_t i = begin; i < end; ++i) z[i] = beta * x[i];
  }
  return z;
}

std::vector<double> project_l1_ball(std::span<const double> x, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
  std::vector<double> z(x.begin(), x.end());
  if (kernels::norm1(x) <= radius) return z;
  double lo = 0.0, hi = kernels::norm_inf(x);
  const auto excess = [&](double theta) {
    double s = 0.0;
    for (const double xi : x) s += std::max(std::abs(xi) - theta, 0.0);
    return s - radius;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0 ? lo : hi) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < x.size(); ++i)
    z[i] = std::copysign(std::max(std::abs(x[i]) - theta, 0.0), x[i]);
  return z;
}

std::vector<double> prox_linf(std::span<const double> x, double tau) {
  const double top = kernels::norm_inf(x);
  const auto value = [&](double s) {
    double fit = 0.0;
    for (const double xi : x) {
      const double over = std::max(std::abs(xi) - s, 0.0);
      fit += over * over;
    }
    return 0.5 * fit + tau * s;
  };
  const double s = std::max(golden_min(0.0, top + 1.0, value), 0.0);
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    z[i] = std::clamp(x[i], -s, s);
  return z;
}

std::vector<double> singular_values(std::size_t rows, std::size_t cols,
                                    std::span<const double> X) {
  if (X.size() != rows * cols) throw std::invalid_argument("shape mismatch");
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> M(X.data(), static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols));
  Eigen::MatrixXd gram;
  if (cols <= rows)
    gram = M.transpose() * M;
  else
    gram = M * M.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  std::vector<double> sv(static_cast<std::size_t>(gram.rows()));
  for (std::size_t i = 0; i < sv.size(); ++i)
    sv[i] = std::sqrt(std::max(eig.eigenvalues()[static_cast<Eigen::Index>(i)],
                               0.0));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

double prox_objective_l1(std::span<const double> x, std::span<const double> z,
                         double tau) {
  double fit = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    fit += (x[i] - z[i]) * (x[i] - z[i]);
  return 0.5 * fit + tau * kernels::norm1(z);
}

double prox_objective_group(std::span<const double> x,
                            std::span<const double> z, double tau,
                            const GroupStructure& groups) {
  double fit = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    fit += (x[i] - z[i]) * (x[i] - z[i]);
  return 0.5 * fit + tau * group_l12_norm(z, groups);
}

double prox_objective_linf(std::span<const double> x,
                           std::span<const double> z, double tau) {
  double fit = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    fit += (x[i] - z[i]) * (x[i] - z[i]);
  return 0.5 * fit + tau * kernels::norm_inf(z);
}

double prox_objective_nuclear(std::size_t rows, std::size_t cols,
                              std::span<const double> X,
                              std::span<const double> Z, double tau) {
  double fit = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i)
    fit += (X[i] - Z[i]) * (X[i] - Z[i]);
  const auto sv = singular_values(rows, cols, Z);
  double nuc = 0.0;
  for (const double s : sv) nuc += s;
  return 0.5 * fit + tau * nuc;
}

}  // namespace fista::oracle
