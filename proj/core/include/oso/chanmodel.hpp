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

#pragma once

// One-ring spatial correlation, large-scale fading, and channel draws.
//
// Angles are radians measured from the +x axis. A plane wave arriving from
// angle phi has wave vector k(phi) = -(2 pi / wavelength) (cos phi, sin phi)
// and the covariance between antennas m and p is
//
//   R[m,p] = a / (2 delta) * integral_{-delta}^{delta}
//              exp(-j k(alpha + theta)^T (u_m - u_p)) d alpha.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "oso/random.hpp"

namespace oso::chanmodel {

using ChannelVector = Eigen::VectorXcd;
using CovarianceMatrix = Eigen::MatrixXcd;

inline constexpr int kDefaultQuadratureNodes = 129;

struct ArrayGeometry {
  std::vector<Eigen::Vector2d> antenna_positions;  // meters
  double carrier_wavelength = 0.02;                // meters

  std::size_t size() const { return antenna_positions.size(); }
  void validate() const;

  // Four antennas on the y-axis at -0.02, -0.01, 0.01, 0.02 m.
  static ArrayGeometry reference_four(double wavelength = 0.02);
  // Antennas on the y-axis at y_m = -m * spacing * wavelength, m = 0..M-1.
  // This orientation makes covariance() agree with covariance_ula().
  static ArrayGeometry uniform_line(std::size_t m, double spacing_over_wavelength,
                                    double wavelength);
};

struct RingScatter {
  double nominal_aoa = 0.0;     // theta, radians in [-pi, pi)
  double angular_spread = 0.0;  // half-width, radians in (0, pi]
  double mean_gain = 1.0;       // linear power a_i

  void validate() const;
};

// Path loss PL(d) = intercept + slope * log10(d_km) in dB, plus log-normal
// shadowing with the given standard deviation in dB.
struct LargeScaleFading {
  double intercept_db = 128.1;
  double slope_db = 36.7;
  double shadowing_sigma_db = 10.0;

  double pathloss_db(double d_km) const;
  // Deterministic part of the gain, 10^(-PL/10).
  double mean_gain(double d_km) const;
  void validate() const;
};

CovarianceMatrix covariance(const ArrayGeometry& geom, const RingScatter& ring,
                            int nodes = kDefaultQuadratureNodes);

// Uniform linear array specialization with exponent
// -j 2 pi (d/lambda) (m - p) sin(alpha + theta).
CovarianceMatrix covariance_ula(std::size_t m, double spacing_over_wavelength,
                                const RingScatter& ring,
                                int nodes = kDefaultQuadratureNodes);

// True when R is Hermitian (relative tol) and its smallest eigenvalue is not
// below -tol times the largest.
bool is_valid_covariance(const CovarianceMatrix& r, double tol = 1e-10);

// Precomputed colouring factor U Lambda^{1/2} of a covariance matrix, with
// eigenvalues below 1e-10 of the largest discarded. Drawing from a fixed
// covariance many times should go through this.
class ChannelSampler {
 public:
  explicit ChannelSampler(const CovarianceMatrix& r);

  ChannelVector draw(RandomStream& rng) const;
  std::size_t rank() const { return static_cast<std::size_t>(factor_.cols()); }
  std::size_t dimension() const { return static_cast<std::size_t>(factor_.rows()); }
  const Eigen::MatrixXcd& factor() const { return factor_; }

 private:
  Eigen::MatrixXcd factor_;
};

ChannelVector sample_channel(const CovarianceMatrix& r, RandomStream& rng);

// a_i = 10^(-(PL(d) + X)/10), X ~ N(0, sigma^2) in dB.
double large_scale_gain(double d_km, const LargeScaleFading& fading, RandomStream& rng);

// i.i.d. CN(0, 1) entries.
ChannelVector sample_rayleigh(std::size_t m, RandomStream& rng);

}  // namespace oso::chanmodel
