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

#include <functional>
#include <vector>

namespace oso {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Returns the n-point rule, computed once per n by Newton iteration on the
// Legendre recurrence and cached for the lifetime of the process.
// Thread-safe.
const GaussLegendreRule& gauss_legendre(int n);

// Adaptive Gauss-Kronrod integration of f over [a, b] with the given
// absolute error target. b may be +infinity; the range is then truncated
// where the integrand has fallen below 1e-16 of its observed peak.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

}  // namespace oso
