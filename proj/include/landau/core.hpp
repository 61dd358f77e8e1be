#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Core>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/laguerre.hpp>

#include "landau/error.hpp"

namespace landau {

using Vec2 = Eigen::Vector2d;
using cplx = std::complex<double>;

/// Field strength b > 0 and half-dimension d >= 1 (configuration space R^{2d}).
struct MagneticSetup {
  double b = 1.0;
  int d = 1;

  MagneticSetup() = default;
  MagneticSetup(double field, int half_dim) : b(field), d(half_dim) {
    if (!(b > 0) || !std::isfinite(b)) throw invalid_argument("landau-core", "field strength b must be positive");
    if (d < 1) throw invalid_argument("landau-core", "half-dimension d must be >= 1");
  }
};

/// Landau level index q >= 1.
struct LandauIndex {
  int q = 1;

  LandauIndex() = default;
  explicit LandauIndex(int level) : q(level) {
    if (q < 1) throw invalid_argument("landau-core", "Landau index q must be >= 1");
  }
};

/// Λ_q = (2(q-1) + d) b.
inline double landau_level(const MagneticSetup& setup, LandauIndex q) {
  return (2.0 * (q.q - 1) + setup.d) * setup.b;
}

/// Symmetric-gauge potential A0(x) = (-x2, x1) / 2 of a unit field.
inline Vec2 vector_potential(const Vec2& x) { return {-0.5 * x.y(), 0.5 * x.x()}; }

/// x ∧ y = x1 y2 - x2 y1.
inline double wedge(const Vec2& x, const Vec2& y) { return x.x() * y.y() - x.y() * y.x(); }

/// Gauge factor of every kernel commuting with magnetic translations for
/// L = -(∇ - i b A0)^2: K(x, y) = exp(-i b (x ∧ y) / 2) k(|x - y|).
inline cplx magnetic_phase(double b, const Vec2& x, const Vec2& y) {
  const double theta = -0.5 * b * wedge(x, y);
  return {std::cos(theta), std::sin(theta)};
}

inline Vec2 to_vec(cplx z) { return {z.real(), z.imag()}; }

/// Integral kernel of the projection P_q onto the q-th Landau level (d = 1):
/// (b / 2π) L_{q-1}(b|z-w|²/2) exp(-b|z-w|²/4) exp(-i b (z ∧ w)/2).
/// The diagonal equals b / 2π.
inline cplx projection_kernel(const MagneticSetup& setup, LandauIndex q, cplx z, cplx w) {
  if (setup.d != 1) throw invalid_argument("landau-core", "projection_kernel is only available for d = 1");
  const double b = setup.b;
  const double r2 = std::norm(z - w);
  const double radial = b / (2 * boost::math::constants::pi<double>()) *
                        boost::math::laguerre(static_cast<unsigned>(q.q - 1), 0.5 * b * r2) *
                        std::exp(-0.25 * b * r2);
  return radial * magnetic_phase(b, to_vec(z), to_vec(w));
}

/// Centered second-order finite-difference application of
/// L = -(∇ - i b A0)^2 = -Δ + 2 i b A0·∇ + b²|A0|² (A0 is divergence free)
/// to a callable u : Vec2 -> complex at the point x.
template <class F>
cplx magnetic_laplacian_fd(double b, F&& u, const Vec2& x, double h) {
  const Vec2 ex{h, 0.0}, ey{0.0, h};
  const cplx u0 = u(x);
  const cplx uxp = u(Vec2(x + ex)), uxm = u(Vec2(x - ex));
  const cplx uyp = u(Vec2(x + ey)), uym = u(Vec2(x - ey));
  const cplx laplacian = (uxp + uxm + uyp + uym - 4.0 * u0) / (h * h);
  const cplx dx = (uxp - uxm) / (2 * h);
  const cplx dy = (uyp - uym) / (2 * h);
  const Vec2 a = vector_potential(x);
  const cplx i{0.0, 1.0};
  return -laplacian + 2.0 * i * b * (a.x() * dx + a.y() * dy) + b * b * a.squaredNorm() * u0;
}

}  // namespace landau
