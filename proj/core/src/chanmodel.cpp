// Copyright 2026 The OSO Bandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oso/chanmodel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "oso/errors.hpp"
#include "oso/quadrature.hpp"

namespace oso::chanmodel {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEigenCutoff = 1e-10;

void check_finite(const CovarianceMatrix& r) {
  if (!r.allFinite()) {
    throw NumericalError("covariance quadrature produced a non-finite entry");
  }
}

// Fills the strict upper triangle from phase(m, p, angle) and mirrors it.
template <typename Phase>
CovarianceMatrix integrate_ring(std::size_t m, const RingScatter& ring, int nodes,
                                Phase&& phase) {
  const GaussLegendreRule& rule = gauss_legendre(nodes);
  CovarianceMatrix r = CovarianceMatrix::Zero(m, m);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double angle = ring.angular_spread * rule.nodes[i] + ring.nominal_aoa;
    const double w = rule.weights[i];
    for (std::size_t col = 1; col < m; ++col) {
      for (std::size_t row = 0; row < col; ++row) {
        r(row, col) += w * std::polar(1.0, phase(row, col, angle));
      }
    }
  }
  // (a / 2 delta) * delta * sum_i w_i f(.) with the change of variable
  // alpha = delta * x.
  const double scale = 0.5 * ring.mean_gain;
  for (std::size_t col = 0; col < m; ++col) {
    r(col, col) = ring.mean_gain;
    for (std::size_t row = 0; row < col; ++row) {
      r(row, col) *= scale;
      r(col, row) = std::conj(r(row, col));
    }
  }
  check_finite(r);
  return r;
}

}  // namespace

void ArrayGeometry::validate() const {
  if (antenna_positions.empty()) throw DomainError("array needs at least one antenna");
  if (!(carrier_wavelength > 0.0) || !std::isfinite(carrier_wavelength)) {
    throw DomainError("carrier wavelength must be positive");
  }
  for (std::size_t i = 0; i < antenna_positions.size(); ++i) {
    if (!antenna_positions[i].allFinite()) throw DomainError("antenna position not finite");
    for (std::size_t j = 0; j < i; ++j) {
      if (antenna_positions[i] == antenna_positions[j]) {
        throw DomainError("antenna positions must be pairwise distinct");
      }
    }
  }
}

ArrayGeometry ArrayGeometry::reference_four(double wavelength) {
  ArrayGeometry g;
  g.carrier_wavelength = wavelength;
  for (double y : {-0.02, -0.01, 0.01, 0.02}) g.antenna_positions.emplace_back(0.0, y);
  return g;
}

ArrayGeometry ArrayGeometry::uniform_line(std::size_t m, double spacing_over_wavelength,
                                          double wavelength) {
  ArrayGeometry g;
  g.carrier_wavelength = wavelength;
  for (std::size_t i = 0; i < m; ++i) {
    g.antenna_positions.emplace_back(
        0.0, -static_cast<double>(i) * spacing_over_wavelength * wavelength);
  }
  return g;
}

void RingScatter::validate() const {
  if (!(angular_spread > 0.0 && angular_spread <= std::numbers::pi)) {
    throw DomainError("angular spread must lie in (0, pi]");
  }
  if (!(mean_gain > 0.0) || !std::isfinite(mean_gain)) {
    throw DomainError("mean gain must be positive");
  }
  if (!(nominal_aoa >= -std::numbers::pi && nominal_aoa < std::numbers::pi)) {
    throw DomainError("nominal angle of arrival must lie in [-pi, pi)");
  }
}

double LargeScaleFading::pathloss_db(double d_km) const {
  if (!(d_km > 0.0)) throw DomainError("distance must be positive");
  return intercept_db + slope_db * std::log10(d_km);
}

double LargeScaleFading::mean_gain(double d_km) const {
  return std::pow(10.0, -pathloss_db(d_km) / 10.0);
}

void LargeScaleFading::validate() const {
  if (!(slope_db > 0.0)) throw DomainError("path-loss slope must be positive");
  if (!(shadowing_sigma_db >= 0.0)) throw DomainError("shadowing sigma must be >= 0");
}

CovarianceMatrix covariance(const ArrayGeometry& geom, const RingScatter& ring,
                            int nodes) {
  geom.validate();
  ring.validate();
  const double k = kTwoPi / geom.carrier_wavelength;
  const auto& u = geom.antenna_positions;
  return integrate_ring(geom.size(), ring, nodes,
                        [&](std::size_t m, std::size_t p, double angle) {
                          const Eigen::Vector2d d = u[m] - u[p];
                          // -j k(angle)^T d with k(angle) = -k (cos, sin).
                          return k * (std::cos(angle) * d.x() + std::sin(angle) * d.y());
                        });
}

CovarianceMatrix covariance_ula(std::size_t m, double spacing_over_wavelength,
                                const RingScatter& ring, int nodes) {
  if (m < 1) throw DomainError("ULA needs at least one antenna");
  if (!(spacing_over_wavelength > 0.0)) throw DomainError("ULA spacing must be positive");
  ring.validate();
  return integrate_ring(m, ring, nodes, [&](std::size_t row, std::size_t col, double angle) {
    const double diff = static_cast<double>(row) - static_cast<double>(col);
    return -kTwoPi * spacing_over_wavelength * diff * std::sin(angle);
  });
}

bool is_valid_covariance(const CovarianceMatrix& r, double tol) {
  if (r.rows() != r.cols() || r.rows() == 0 || !r.allFinite()) return false;
  const double scale = r.cwiseAbs().maxCoeff();
  if ((r - r.adjoint()).cwiseAbs().maxCoeff() > tol * std::max(scale, 1e-300)) return false;
  Eigen::SelfAdjointEigenSolver<CovarianceMatrix> eig(r, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return false;
  const Eigen::VectorXd& ev = eig.eigenvalues();
  return ev.minCoeff() >= -tol * std::max(ev.maxCoeff(), 0.0);
}

ChannelSampler::ChannelSampler(const CovarianceMatrix& r) {
  if (r.rows() != r.cols() || r.rows() == 0) {
    throw DomainError("covariance must be a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<CovarianceMatrix> eig(r);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
  const double top = ev(ev.size() - 1);
  if (!(top > 0.0) || !std::isfinite(top)) {
    throw NumericalError("covariance has no positive eigenvalue");
  }
  Eigen::Index first = 0;
  while (ev(first) < kEigenCutoff * top) ++first;
  const Eigen::Index rank = ev.size() - first;
  factor_.resize(r.rows(), rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    factor_.col(c) = eig.eigenvectors().col(first + c) * std::sqrt(ev(first + c));
  }
}

ChannelVector ChannelSampler::draw(RandomStream& rng) const {
  Eigen::VectorXcd white(factor_.cols());
  for (Eigen::Index i = 0; i < white.size(); ++i) white(i) = rng.complex_normal();
  return factor_ * white;
}

ChannelVector sample_channel(const CovarianceMatrix& r, RandomStream& rng) {
  return ChannelSampler(r).draw(rng);
}

double large_scale_gain(double d_km, const LargeScaleFading& fading, RandomStream& rng) {
  const double pl = fading.pathloss_db(d_km);
  const double shadow =
      fading.shadowing_sigma_db > 0.0 ? fading.shadowing_sigma_db * rng.normal() : 0.0;
  return std::pow(10.0, -(pl + shadow) / 10.0);
}

ChannelVector sample_rayleigh(std::size_t m, RandomStream& rng) {
  if (m < 1) throw DomainError("channel needs at least one antenna");
  ChannelVector h(m);
  for (std::size_t i = 0; i < m; ++i) h(i) = rng.complex_normal();
  return h;
}

}  // namespace oso::chanmodel
