#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/precision.hpp>

#include "landau/error.hpp"

namespace landau {

/// Unit roundoff of Real at the current working precision (mpfr precision is a
/// runtime setting, so numeric_limits is not trusted here).
template <class Real>
Real working_epsilon() {
  using std::ldexp;
  return ldexp(Real(1), 1 - boost::math::tools::digits<Real>());
}

template <class Real>
struct QuadratureRule {
  std::vector<Real> nodes;    // on [-1, 1]
  std::vector<Real> weights;
};

/// Gauss–Legendre rule of order n computed by Newton iteration on the
/// three-term recurrence, carried out in the precision of Real.
template <class Real>
QuadratureRule<Real> gauss_legendre(int n) {
  using std::abs;
  using std::cos;
  if (n < 1) throw invalid_argument("quadrature", "Gauss-Legendre order must be >= 1");
  QuadratureRule<Real> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Real eps = working_epsilon<Real>();
  const Real pi = boost::math::constants::pi<Real>();
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real x = cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= 4 * eps * abs(x) || abs(dx) <= eps) {
        // one more recurrence to refresh the derivative at the final x
        Real q0 = 1, q1 = x;
        for (int k = 2; k <= n; ++k) {
          Real q2 = ((2 * k - 1) * x * q1 - (k - 1) * q0) / k;
          q0 = q1;
          q1 = q2;
        }
        if (n == 1) q0 = 1;
        dp = n * (x * q1 - q0) / (x * x - 1);
        break;
      }
    }
    const Real w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0;
  return rule;
}

/// Rule order used by the adaptive integrator for a given working precision.
template <class Real>
int default_gauss_order() {
  const int digits10 = static_cast<int>(boost::math::tools::digits<Real>() * 0.30103);
  return std::max(20, static_cast<int>(0.6 * digits10) + 10);
}

template <class Real>
struct QuadratureResult {
  Real value{0};
  Real error{0};
  int panels{0};
};

template <class Real>
struct AdaptiveOptions {
  Real rel_tol = Real(64) * working_epsilon<Real>();
  Real abs_tol = Real(0);
  int max_panels = 4000;
};

/// Fixed rule applied on [a, b].
template <class Real, class F>
Real apply_rule(const QuadratureRule<Real>& rule, F&& f, const Real& a, const Real& b) {
  const Real mid = (a + b) / 2;
  const Real half = (b - a) / 2;
  Real sum = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

/// Globally adaptive Gauss–Legendre integration. Each panel's error is the
/// difference between the rule on the panel and on its two halves; the panel
/// with the largest error is bisected until the total error meets
/// max(abs_tol, rel_tol * |value|).
template <class Real, class F>
QuadratureResult<Real> integrate_adaptive(F&& f, const Real& a, const Real& b,
                                          const QuadratureRule<Real>& rule,
                                          const AdaptiveOptions<Real>& opt = {}) {
  using std::abs;
  struct Panel {
    Real a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto make_panel = [&](const Real& lo, const Real& hi) {
    const Real mid = (lo + hi) / 2;
    const Real whole = apply_rule(rule, f, lo, hi);
    const Real halves = apply_rule(rule, f, lo, mid) + apply_rule(rule, f, mid, hi);
    return Panel{lo, hi, halves, Real(abs(halves - whole))};
  };

  std::priority_queue<Panel> queue;
  queue.push(make_panel(a, b));
  Real value = queue.top().value;
  Real error = queue.top().error;
  int panels = 1;
  while (error > std::max(opt.abs_tol, Real(opt.rel_tol * abs(value)))) {
    if (panels >= opt.max_panels)
      throw numerical_error("quadrature", "adaptive integration did not converge");
    Panel worst = queue.top();
    queue.pop();
    const Real mid = (worst.a + worst.b) / 2;
    Panel left = make_panel(worst.a, mid);
    Panel right = make_panel(mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
    ++panels;
  }
  // re-sum to shed the drift of the running updates
  Real total = 0, total_err = 0;
  while (!queue.empty()) {
    total += queue.top().value;
    total_err += queue.top().error;
    queue.pop();
  }
  return {total, total_err, panels};
}

template <class Real, class F>
QuadratureResult<Real> integrate_adaptive(F&& f, const Real& a, const Real& b,
                                          const AdaptiveOptions<Real>& opt = {}) {
  if constexpr (std::is_same_v<Real, double>) {
    static const QuadratureRule<double> rule = gauss_legendre<double>(default_gauss_order<double>());
    return integrate_adaptive(std::forward<F>(f), a, b, rule, opt);
  } else {
    const auto rule = gauss_legendre<Real>(default_gauss_order<Real>());
    return integrate_adaptive(std::forward<F>(f), a, b, rule, opt);
  }
}

}  // namespace landau
