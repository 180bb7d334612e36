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

#include "oso/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>
#include <string>

#include "oso/errors.hpp"

namespace oso {
namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  if (n == 1) return {{0.0}, {2.0}};
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double l1;

  bool operator<(const Segment& o) const { return error < o.error; }
};

// Globally adaptive Gauss-Kronrod: always bisect the segment with the
// largest error estimate.
double integrate_finite(const std::function<double(double)>& f, double a,
                        double b, double abs_tol) {
  if (a == b) return 0.0;
  // 7-point Gauss embedded in 15-point Kronrod; nodes and weights on [0, 1].
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  auto eval = [&f](double lo, double hi) {
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double f0 = f(mid);
    double k = f0 * wk[0];
    double g = f0 * wg[0];
    double l1 = std::abs(f0) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double fp = f(mid + half * x[i]);
      const double fm = f(mid - half * x[i]);
      k += (fp + fm) * wk[i];
      l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
      if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
    }
    if (!std::isfinite(k)) throw NumericalError("quadrature produced a non-finite value");
    const double err = std::max(std::abs(k - g), 2.0 * std::numeric_limits<double>::epsilon() * std::abs(k));
    return Segment{lo, hi, half * k, half * err, half * l1};
  };
  constexpr int kMaxSegments = 4000;
  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  std::priority_queue<Segment> heap;
  heap.push(eval(a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  double l1 = heap.top().l1;
  for (int n = 1;; ++n) {
    if (error <= abs_tol || error <= kRoundoff * l1) return value;
    if (n >= kMaxSegments) break;
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Segment left = eval(worst.a, mid);
    const Segment right = eval(mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  std::ostringstream msg;
  msg << "quadrature did not reach tolerance " << abs_tol << " on [" << a << ", " << b
      << "]: error estimate " << error;
  throw NumericalError(msg.str());
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
  return *slot;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (b < a) return -integrate(f, b, a, abs_tol);
  if (std::isfinite(b)) return integrate_finite(f, a, b, abs_tol);

  // Semi-infinite range: integrate over geometrically growing panels and stop
  // once the integrand has decayed below 1e-16 of the largest value seen.
  constexpr double kDecay = 1e-16;
  double peak = std::abs(f(a));
  double total = 0.0;
  double lo = a;
  double width = 1e-9;
  int quiet_panels = 0;
  for (int panel = 0; panel < 200; ++panel) {
    const double hi = lo + width;
    total += integrate_finite(f, lo, hi, abs_tol / 64.0);
    const double tail = std::abs(f(hi));
    peak = std::max(peak, tail);
    if (tail < kDecay * peak && total != 0.0) {
      if (++quiet_panels >= 2) return total;
    } else {
      quiet_panels = 0;
    }
    lo = hi;
    width *= 2.0;
  }
  throw NumericalError("integrand did not decay on the semi-infinite range");
}

}  // namespace oso
