#include "fista/prox.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fista/errors.hpp"
#include "fista/kernels.hpp"

namespace fista {

namespace {

void require_scale(double tau, const char* who) {
  if (!(tau >= 0.0)) throw std::invalid_argument(std::string(who) + ": negative scale");
}

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMajorMatrix>;
using MatrixMap = Eigen::Map<RowMajorMatrix>;

}  // namespace

GroupStructure::GroupStructure(std::size_t n, std::size_t block_size)
    : n_(n), block_size_(block_size) {
  if (n == 0) throw std::invalid_argument("GroupStructure: empty index set");
  if (block_size == 0)
    throw std::invalid_argument("GroupStructure: bad block size");
  count_ = (n + block_size - 1) / block_size;
}

std::pair<std::size_t, std::size_t> GroupStructure::block(std::size_t b) const {
  const std::size_t begin = b * block_size_;
  return {begin, std::min(begin + block_size_, n_)};
}

void prox_l1(std::span<const double> x, double tau, std::span<double> out) {
  require_scale(tau, "prox_l1");
  kernels::soft_threshold(x, tau, out);
}

void prox_group_l12(std::span<const double> x, const GroupStructure& groups,
                    double tau, std::span<double> out) {
  require_scale(tau, "prox_group_l12");
  if (x.size() != groups.size())
    throw std::invalid_argument("prox_group_l12: size mismatch");
  for (std::size_t b = 0; b < groups.block_count(); ++b) {
    const auto [begin, end] = groups.block(b);
    double nrm = 0.0;
    for (std::size_t i = begin; i < end; ++i) nrm += x[i] * x[i];
    nrm = std::sqrt(nrm);
    const double factor = nrm > tau ? 1.0 - tau / nrm : 0.0;
    for (std::size_t i = begin; i < end; ++i) out[i] = factor * x[i];
  }
}

void project_l1_ball(std::span<const double> x, double radius,
                     std::span<double> out) {
  if (!(radius > 0.0))
    throw std::invalid_argument("project_l1_ball: radius must be > 0");
  if (kernels::norm1(x) <= radius) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  std::vector<double> mags(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mags[i] = std::fabs(x[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumulative += mags[j];
    const double candidate = (cumulative - radius) / static_cast<double>(j + 1);
    if (mags[j] - candidate > 0.0)
      theta = candidate;
    else
      break;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double mag = std::fabs(x[i]) - theta;
    out[i] = mag > 0.0 ? (x[i] > 0.0 ? mag : -mag) : 0.0;
  }
}

void prox_linf(std::span<const double> x, double tau, std::span<double> out) {
  require_scale(tau, "prox_linf");
  if (tau == 0.0) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  std::vector<double> proj(x.size());
  project_l1_ball(x, tau, proj);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - proj[i];
}

void prox_nuclear(std::size_t rows, std::size_t cols,
                  std::span<const double> X, double tau,
                  std::span<double> out) {
  require_scale(tau, "prox_nuclear");
  ConstMatrixMap mat(X.data(), static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(cols));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(mat,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw NumericalFailure("prox_nuclear: SVD did not converge");
  Eigen::VectorXd sigma = svd.singularValues();
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    sigma[i] = std::max(sigma[i] - tau, 0.0);
  MatrixMap result(out.data(), static_cast<Eigen::Index>(rows),
                   static_cast<Eigen::Index>(cols));
  result = svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();
}

MoreauEnvelope moreau_env_l1(std::span<const double> u, double lam) {
  if (!(lam > 0.0))
    throw std::invalid_argument("moreau_env_l1: lam must be > 0");
  MoreauEnvelope env;
  env.grad.resize(u.size());
  double value = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = u[i];
    const double mag = std::fabs(v) - lam;
    const double z = mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
    const double d = v - z;
    value += 0.5 * d * d + lam * std::fabs(z);
    env.grad[i] = d;
  }
  env.value = value;
  return env;
}

double group_l12_norm(std::span<const double> x, const GroupStructure& groups) {
  double total = 0.0;
  for (std::size_t b = 0; b < groups.block_count(); ++b) {
    const auto [begin, end] = groups.block(b);
    double nrm = 0.0;
    for (std::size_t i = begin; i < end; ++i) nrm += x[i] * x[i];
    total += std::sqrt(nrm);
  }
  return total;
}

double nuclear_norm(std::size_t rows, std::size_t cols,
                    std::span<const double> X) {
  ConstMatrixMap mat(X.data(), static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(cols));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(mat);
  if (svd.info() != Eigen::Success)
    throw NumericalFailure("nuclear_norm: SVD did not converge");
  return svd.singularValues().sum();
}

}  // namespace fista
