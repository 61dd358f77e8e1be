#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "landau/curve.hpp"
#include "landau/error.hpp"

namespace landau {

/// Equilibrium measure of the compact set bounded by a curve: density μ with
/// respect to arc length and the constant value V of its log potential on the curve.
struct EquilibriumMeasure {
  std::vector<double> density;
  double robin_constant = 0;
  double total_mass = 0;      // ∫ μ dS by the trapezoid rule; 1 up to solver error
  double residual = 0;        // max-norm residual of the bordered linear system
  bool nonnegative = true;    // μ >= 0 everywhere (expected for convex sets)
  bool rescaled = false;      // solved on the doubled curve to avoid a degenerate system
};

namespace detail {

// Bordered Nyström system for φ(t) = μ(x(t))|x'(t)|:
//   ∫ log(1/|x(t)-x(τ)|) φ(τ) dτ - V = 0,   ∫ φ dτ = 1.
// log(1/|x-y|) = -½ log(4 sin²((t-τ)/2)) - ½ log(|x-y|² / 4 sin²((t-τ)/2)).
inline Eigen::MatrixXd equilibrium_system(const SmoothCurve& c) {
  const int n = c.size();
  const double h = 2 * boost::math::constants::pi<double>() / n;
  const auto w = log_kernel_weights(n);
  Eigen::MatrixXd m(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    const double ti = c.parameter(i);
    for (int j = 0; j < n; ++j) {
      double smooth;
      if (i == j) {
        smooth = -std::log(c.speeds()[i]);
      } else {
        const double s = std::sin(0.5 * (ti - c.parameter(j)));
        smooth = -0.5 * std::log((c.points()[i] - c.points()[j]).squaredNorm() / (4 * s * s));
      }
      m(i, j) = -0.5 * w[(i - j + n) % n] + h * smooth;
    }
    m(i, n) = -1;
    m(n, i) = h;
  }
  m(n, n) = 0;
  return m;
}

}  // namespace detail

/// Solves for the equilibrium measure. The bordered system becomes
/// ill-conditioned for curves of capacity near 1 only through round-off in
/// the log kernel; if the LU reciprocal condition estimate drops below 1e-12
/// the curve is doubled, solved, and mapped back by the scaling law.
inline EquilibriumMeasure solve_equilibrium(const SmoothCurve& curve) {
  auto attempt = [](const SmoothCurve& c, double& rcond, Eigen::VectorXd& sol, Eigen::MatrixXd& m) {
    m = detail::equilibrium_system(c);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    rcond = lu.rcond();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m.rows());
    rhs(m.rows() - 1) = 1;
    sol = lu.solve(rhs);
    return rhs;
  };
  double rcond;
  Eigen::VectorXd sol;
  Eigen::MatrixXd m;
  Eigen::VectorXd rhs = attempt(curve, rcond, sol, m);
  bool rescaled = false;
  const double threshold = 1e-12;
  if (!(rcond > threshold) || !sol.allFinite()) {
    rescaled = true;
    rhs = attempt(curve.transformed(2.0, 0.0, Vec2::Zero()), rcond, sol, m);
    if (!(rcond > threshold) || !sol.allFinite())
      throw numerical_error("capacity", "singular equilibrium system (degenerate curve discretization)");
  }
  const int n = curve.size();
  const double h = 2 * boost::math::constants::pi<double>() / n;
  EquilibriumMeasure out;
  out.rescaled = rescaled;
  out.residual = (m * sol - rhs).lpNorm<Eigen::Infinity>();
  out.density.resize(n);
  // on the doubled curve φ is unchanged as a function of t, V shifts by -log 2
  out.robin_constant = sol(n) + (rescaled ? std::log(2.0) : 0.0);
  for (int i = 0; i < n; ++i) {
    out.density[i] = sol(i) / curve.speeds()[i];
    out.total_mass += h * sol(i);
    if (out.density[i] < -1e-10) out.nonnegative = false;
  }
  return out;
}

/// Logarithmic capacity exp(-V).
inline double capacity(const SmoothCurve& curve) { return std::exp(-solve_equilibrium(curve).robin_constant); }

}  // namespace landau
