#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>
#include <boost/math/constants/constants.hpp>

#include "landau/core.hpp"
#include "landau/error.hpp"

namespace landau {

namespace detail {

inline bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) { return wedge(b - a, c - a); };
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

// Fourier coefficients of z_i = x1 + i x2 sampled at t_i = 2πi/n.
inline std::vector<cplx> fourier(const std::vector<Vec2>& pts) {
  std::vector<cplx> z(pts.size()), zh;
  for (std::size_t i = 0; i < pts.size(); ++i) z[i] = {pts[i].x(), pts[i].y()};
  Eigen::FFT<double> fft;
  fft.fwd(zh, z);
  return zh;
}

inline std::vector<Vec2> inverse_fourier(const std::vector<cplx>& zh) {
  std::vector<cplx> z;
  Eigen::FFT<double> fft;
  fft.inv(z, zh);
  std::vector<Vec2> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = {z[i].real(), z[i].imag()};
  return out;
}

// signed wavenumber of FFT slot k
inline int wavenumber(int k, int n) { return k <= n / 2 ? k : k - n; }

}  // namespace detail

/// Closed curve x(t), t ∈ [0, 2π), sampled at t_i = 2πi/n (n even), oriented
/// counter-clockwise. normals() are ν_Ω: unit normals pointing out of the
/// exterior domain Ω, i.e. into the enclosed compact set K.
class SmoothCurve {
 public:
  /// From samples only; derivatives are obtained spectrally.
  static SmoothCurve from_samples(std::vector<Vec2> pts) {
    check_count(pts.size());
    const int n = static_cast<int>(pts.size());
    auto zh = detail::fourier(pts);
    std::vector<cplx> d1(n), d2(n);
    for (int k = 0; k < n; ++k) {
      const int m = detail::wavenumber(k, n);
      // the Nyquist mode has no consistent first derivative
      d1[k] = (2 * k == n) ? cplx{} : cplx(0, m) * zh[k];
      d2[k] = -double(m) * m * zh[k];
    }
    return SmoothCurve(std::move(pts), detail::inverse_fourier(d1), detail::inverse_fourier(d2));
  }

  /// From exact derivatives.
  static SmoothCurve from_derivatives(std::vector<Vec2> pts, std::vector<Vec2> d1, std::vector<Vec2> d2) {
    check_count(pts.size());
    if (d1.size() != pts.size() || d2.size() != pts.size())
      throw invalid_argument("capacity", "derivative arrays must match the node count");
    return SmoothCurve(std::move(pts), std::move(d1), std::move(d2));
  }

  /// Samples x, x', x'' from callables of t.
  template <class F, class G, class H>
  static SmoothCurve from_parameterization(int n, F&& x, G&& dx, H&& ddx) {
    check_count(n);
    std::vector<Vec2> p(n), d1(n), d2(n);
    for (int i = 0; i < n; ++i) {
      const double t = parameter(i, n);
      p[i] = x(t);
      d1[i] = dx(t);
      d2[i] = ddx(t);
    }
    return SmoothCurve(std::move(p), std::move(d1), std::move(d2));
  }

  static double parameter(int i, int n) { return 2 * boost::math::constants::pi<double>() * i / n; }

  int size() const { return static_cast<int>(x_.size()); }
  double parameter(int i) const { return parameter(i, size()); }
  const std::vector<Vec2>& points() const { return x_; }
  const std::vector<Vec2>& tangents() const { return dx_; }        // x'(t_i)
  const std::vector<Vec2>& second_derivatives() const { return ddx_; }
  const std::vector<Vec2>& normals() const { return nu_; }          // ν_Ω, into K
  const std::vector<double>& speeds() const { return speed_; }     // |x'(t_i)|

  /// Trapezoid weights for ∫ f dS.
  double arc_weight(int i) const { return 2 * boost::math::constants::pi<double>() / size() * speed_[i]; }

  double length() const {
    double l = 0;
    for (int i = 0; i < size(); ++i) l += arc_weight(i);
    return l;
  }

  /// Enclosed area, ½∮ x ∧ dx (spectrally accurate).
  double area() const {
    double a = 0;
    for (int i = 0; i < size(); ++i) a += wedge(x_[i], dx_[i]);
    return 0.5 * a * 2 * boost::math::constants::pi<double>() / size();
  }

  /// Point-in-polygon test on the node polygon.
  bool contains(const Vec2& p) const {
    bool inside = false;
    const int n = size();
    for (int i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 &a = x_[i], &b = x_[j];
      if ((a.y() > p.y()) != (b.y() > p.y()) && p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
        inside = !inside;
    }
    return inside;
  }

  /// Distance from p to the node polygon.
  double distance(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    const int n = size();
    for (int i = 0; i < n; ++i) {
      const Vec2 a = x_[i], e = x_[(i + 1) % n] - a;
      const double t = std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (a + t * e - p).norm());
    }
    return best;
  }

  /// Trigonometric interpolation onto m nodes (m even). When refining, the
  /// input Nyquist mode is split evenly between ±n/2; when coarsening, modes
  /// with |k| >= m/2 are dropped.
  SmoothCurve resampled(int m) const {
    check_count(m);
    const int n = size();
    if (m == n) return *this;
    auto resample = [&](const std::vector<Vec2>& v) {
      const auto zh = detail::fourier(v);
      std::vector<cplx> out(m);
      const double scale = double(m) / n;
      for (int k = 0; k < n; ++k) {
        const int w = detail::wavenumber(k, n);
        if (2 * w == n) {
          if (m > n) {
            out[w] += 0.5 * scale * zh[k];
            out[m - w] += 0.5 * scale * zh[k];
          }
          continue;
        }
        if (2 * std::abs(w) >= m) continue;
        out[(w + m) % m] += scale * zh[k];
      }
      return detail::inverse_fourier(out);
    };
    return from_derivatives(resample(x_), resample(dx_), resample(ddx_));
  }

  /// x ↦ scale · R(angle) x + shift.
  SmoothCurve transformed(double scale, double angle, const Vec2& shift) const {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    if (!(scale > 0)) throw invalid_argument("capacity", "scale must be positive");
    std::vector<Vec2> p(size()), d1(size()), d2(size());
    for (int i = 0; i < size(); ++i) {
      p[i] = scale * (r * x_[i]) + shift;
      d1[i] = scale * (r * dx_[i]);
      d2[i] = scale * (r * ddx_[i]);
    }
    return from_derivatives(std::move(p), std::move(d1), std::move(d2));
  }

  /// Sampled curvature-type quantity (ν_Ω · x'') / |x'|², the diagonal of the
  /// double-layer kernel's smooth part.
  double normal_curvature_term(int i) const { return nu_[i].dot(ddx_[i]) / (speed_[i] * speed_[i]); }

 private:
  SmoothCurve(std::vector<Vec2> pts, std::vector<Vec2> d1, std::vector<Vec2> d2)
      : x_(std::move(pts)), dx_(std::move(d1)), ddx_(std::move(d2)) {
    const int n = size();
    double signed_area = 0;
    for (int i = 0; i < n; ++i) signed_area += wedge(x_[i], dx_[i]);
    if (signed_area < 0) reverse();
    speed_.resize(n);
    nu_.resize(n);
    for (int i = 0; i < n; ++i) {
      speed_[i] = dx_[i].norm();
      if (!(speed_[i] > 0) || !std::isfinite(speed_[i]))
        throw invalid_argument("capacity", "curve speed must be positive at every node");
      nu_[i] = Vec2(-dx_[i].y(), dx_[i].x()) / speed_[i];
    }
    check_simple();
  }

  static void check_count(std::size_t n) {
    if (n < 4 || n % 2) throw invalid_argument("capacity", "curve node count must be even and at least 4");
  }

  // t ↦ -t keeps node 0 and reverses the rest
  void reverse() {
    const int n = size();
    std::vector<Vec2> p(n), d1(n), d2(n);
    for (int i = 0; i < n; ++i) {
      const int j = (n - i) % n;
      p[i] = x_[j];
      d1[i] = -dx_[j];
      d2[i] = ddx_[j];
    }
    x_ = std::move(p);
    dx_ = std::move(d1);
    ddx_ = std::move(d2);
  }

  void check_simple() const {
    const int n = size();
    for (int i = 0; i < n; ++i)
      for (int j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (detail::segments_intersect(x_[i], x_[(i + 1) % n], x_[j], x_[(j + 1) % n]))
          throw invalid_argument("capacity", "curve is not simple (self-intersection)");
      }
  }

  std::vector<Vec2> x_, dx_, ddx_, nu_;
  std::vector<double> speed_;
};

/// Circle of radius r about c.
inline SmoothCurve circle(int n, double r = 1.0, const Vec2& c = Vec2::Zero()) {
  if (!(r > 0)) throw invalid_argument("capacity", "radius must be positive");
  return SmoothCurve::from_parameterization(
      n, [&](double t) { return Vec2(c + r * Vec2(std::cos(t), std::sin(t))); },
      [&](double t) { return Vec2(r * Vec2(-std::sin(t), std::cos(t))); },
      [&](double t) { return Vec2(-r * Vec2(std::cos(t), std::sin(t))); });
}

/// Ellipse with semi-axes a (along x1) and b (along x2).
inline SmoothCurve ellipse(int n, double a, double b) {
  if (!(a > 0) || !(b > 0)) throw invalid_argument("capacity", "semi-axes must be positive");
  return SmoothCurve::from_parameterization(
      n, [&](double t) { return Vec2(a * std::cos(t), b * std::sin(t)); },
      [&](double t) { return Vec2(-a * std::sin(t), b * std::cos(t)); },
      [&](double t) { return Vec2(-a * std::cos(t), -b * std::sin(t)); });
}

/// Star-shaped curve r(θ) = 1 + amp·cos(kθ).
inline SmoothCurve flower(int n, double amp = 0.2, int k = 3) {
  if (!(std::abs(amp) < 1)) throw invalid_argument("capacity", "flower amplitude must be below 1");
  auto r = [=](double t) { return 1 + amp * std::cos(k * t); };
  auto dr = [=](double t) { return -amp * k * std::sin(k * t); };
  auto ddr = [=](double t) { return -amp * k * k * std::cos(k * t); };
  return SmoothCurve::from_parameterization(
      n, [&](double t) { return Vec2(r(t) * Vec2(std::cos(t), std::sin(t))); },
      [&](double t) { return Vec2(dr(t) * Vec2(std::cos(t), std::sin(t)) + r(t) * Vec2(-std::sin(t), std::cos(t))); },
      [&](double t) {
        return Vec2((ddr(t) - r(t)) * Vec2(std::cos(t), std::sin(t)) + 2 * dr(t) * Vec2(-std::sin(t), std::cos(t)));
      });
}

/// Weights R_j(t_i) of the periodic log-kernel rule (Kress):
/// ∫_0^{2π} log(4 sin²((t_i - τ)/2)) f(τ) dτ ≈ Σ_j R[(i - j) mod n] f(t_j), n = 2m.
inline std::vector<double> log_kernel_weights(int n) {
  if (n < 2 || n % 2) throw invalid_argument("capacity", "log-kernel weights need an even node count");
  const int m = n / 2;
  const double pi = boost::math::constants::pi<double>();
  std::vector<double> w(n);
  for (int d = 0; d < n; ++d) {
    const double t = pi * d / m;
    double s = 0;
    for (int k = 1; k < m; ++k) s += std::cos(k * t) / k;
    w[d] = -2 * pi / m * s - pi / (double(m) * m) * std::cos(m * t);
  }
  return w;
}

/// Error raised for malformed curve files; the message carries the line number.
class curve_parse_error : public invalid_argument {
 public:
  curve_parse_error(int line, const std::string& what)
      : invalid_argument("capacity", "line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Curve file: first line n, then n lines "t x1 x2" with t_i = 2πi/n.
inline SmoothCurve parse_curve(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      const auto p = line.find_first_not_of(" \t\r");
      if (p != std::string::npos && line[p] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw curve_parse_error(lineno + 1, "missing node count");
  int n = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> n) || (ls >> extra)) throw curve_parse_error(lineno, "expected a single integer node count");
    if (n < 4 || n % 2) throw curve_parse_error(lineno, "node count must be even and at least 4");
  }
  std::vector<Vec2> pts(n);
  const double tol = 1e-8;
  for (int i = 0; i < n; ++i) {
    if (!next_line()) throw curve_parse_error(lineno + 1, "expected " + std::to_string(n) + " nodes, found " + std::to_string(i));
    std::istringstream ls(line);
    double t, x1, x2;
    std::string extra;
    if (!(ls >> t >> x1 >> x2) || (ls >> extra)) throw curve_parse_error(lineno, "expected three numbers \"t x1 x2\"");
    if (!std::isfinite(t) || !std::isfinite(x1) || !std::isfinite(x2)) throw curve_parse_error(lineno, "non-finite value");
    if (std::abs(t - SmoothCurve::parameter(i, n)) > tol)
      throw curve_parse_error(lineno, "parameter values must be t_i = 2*pi*i/n");
    pts[i] = {x1, x2};
  }
  if (next_line()) throw curve_parse_error(lineno, "unexpected data after the last node");
  return SmoothCurve::from_samples(std::move(pts));
}

inline SmoothCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument("capacity", "cannot open curve file '" + path + "'");
  return parse_curve(in);
}

inline void write_curve(std::ostream& out, const SmoothCurve& c) {
  std::ostringstream os;
  os.precision(17);
  os << c.size() << '\n';
  for (int i = 0; i < c.size(); ++i) os << c.parameter(i) << ' ' << c.points()[i].x() << ' ' << c.points()[i].y() << '\n';
  out << os.str();
}

}  // namespace landau
