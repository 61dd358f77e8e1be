#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "landau/core.hpp"
#include "landau/curve.hpp"
#include "landau/error.hpp"
#include "landau/precision.hpp"

namespace landau {

// Boundary calculus for d = 1 on a smooth simple curve ∂Ω, oriented
// counter-clockwise, ν = ν_Ω pointing into the enclosed set K.
//   A u(x) = ∫ G0(x, y) u(y) dS(y)
//   B u(x) = ∫ (∂_N)_y G0(x, y) u(y) dS(y),   (∂_N)_y G0(x, y) = conj(ν_y·(∇_y - ibA0(y)) G0(y, x))
// For d = 1, G0 = (1/4π) e^{-ib x∧y/2} K_0(s), s = b|x-y|²/4.

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class OperatorKind { A, B, T_plus, T_minus, DtR_interior, DtR_exterior };

inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::A: return "A";
    case OperatorKind::B: return "B";
    case OperatorKind::T_plus: return "T_plus";
    case OperatorKind::T_minus: return "T_minus";
    case OperatorKind::DtR_interior: return "DtR_interior";
    case OperatorKind::DtR_exterior: return "DtR_exterior";
  }
  return "?";
}

/// Real Robin coefficient τ sampled on the curve nodes.
struct RobinCoefficient {
  std::vector<double> values;

  RobinCoefficient() = default;
  explicit RobinCoefficient(std::vector<double> v) : values(std::move(v)) {
    for (double t : values)
      if (!std::isfinite(t)) throw invalid_argument("boundary-ops", "Robin coefficient must be finite");
  }
  static RobinCoefficient constant(int n, double c) { return RobinCoefficient(std::vector<double>(n, c)); }
  template <class F>
  static RobinCoefficient sampled(const SmoothCurve& c, F&& f) {
    std::vector<double> v(c.size());
    for (int i = 0; i < c.size(); ++i) v[i] = f(c.points()[i]);
    return RobinCoefficient(std::move(v));
  }
  int size() const { return static_cast<int>(values.size()); }
};

struct BoundaryOperatorMatrix {
  OperatorKind kind = OperatorKind::A;
  Matrix matrix;
  SmoothCurve curve;
  double b = 1;
  std::vector<double> tau;

  /// max |(D^{1/2} M D^{-1/2}) - (…)^†| with D = diag(|x'|): the Nyström matrix
  /// carries the arc-length factor of the source node, so Hermitian symmetry
  /// holds after this similarity.
  double hermitian_defect() const {
    const int n = static_cast<int>(matrix.rows());
    Matrix s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s(i, j) = matrix(i, j) * std::sqrt(curve.speeds()[i] / curve.speeds()[j]);
    return (s - s.adjoint()).cwiseAbs().maxCoeff();
  }
};

namespace detail {

constexpr double inv4pi = 0.25 / boost::math::constants::pi<double>();

// Taper applied to the log-coefficient part of the split. I_0 and I_1 grow
// like e^s, so without it the subtraction loses all digits once b|x-y|² is
// large; the leftover (1 - χ) log s is O(s⁸ log s) at the diagonal.
inline double log_taper(double s) {
  const double u = s / 4;
  const double u2 = u * u, u4 = u2 * u2;
  return std::exp(-u4 * u4);
}

inline double k0(double s) { return boost::math::cyl_bessel_k(0, s); }
inline double k1(double s) { return boost::math::cyl_bessel_k(1, s); }
inline double i0(double s) { return boost::math::cyl_bessel_i(0, s); }
inline double i1(double s) { return boost::math::cyl_bessel_i(1, s); }

inline cplx g0(double b, const Vec2& x, const Vec2& y) {
  const double s = 0.25 * b * (x - y).squaredNorm();
  return inv4pi * magnetic_phase(b, x, y) * k0(s);
}

// ν·(∇_x - ibA0(x)) G0(x, y)
inline cplx dn_g0(double b, const Vec2& x, const Vec2& nu, const Vec2& y) {
  const Vec2 r = x - y;
  const double s = 0.25 * b * r.squaredNorm();
  const cplx i{0, 1};
  return inv4pi * magnetic_phase(b, x, y) * (-0.5 * b * nu.dot(r) * k1(s) - i * b * nu.dot(vector_potential(r)) * k0(s));
}

// coefficient of log s in dn_g0
inline cplx dn_g0_log_part(double b, const Vec2& x, const Vec2& nu, const Vec2& y) {
  const Vec2 r = x - y;
  const double s = 0.25 * b * r.squaredNorm();
  const cplx i{0, 1};
  return inv4pi * magnetic_phase(b, x, y) * (-0.5 * b * nu.dot(r) * i1(s) + i * b * nu.dot(vector_potential(r)) * i0(s));
}

// Row i of the Kress-split Nyström matrix:
//   M(i, j) = R_{i-j} M1(t_i, t_j) + h M2(t_i, t_j),
//   kernel(t, τ)|x'(τ)| = M1 log(4 sin²((t-τ)/2)) + M2.
inline Vector operator_row(OperatorKind kind, const SmoothCurve& c, double b, int i, const std::vector<double>& w) {
  const int n = c.size();
  const double h = 2 * boost::math::constants::pi<double>() / n;
  const Vec2& x = c.points()[i];
  Vector row(n);
  for (int j = 0; j < n; ++j) {
    const double sp = c.speeds()[j];
    cplx m1, m2;
    if (i == j) {
      if (kind == OperatorKind::A) {
        m1 = -inv4pi * sp;
        const double c0 = std::log(2.0) - boost::math::constants::euler<double>();
        m2 = inv4pi * sp * (c0 - std::log(0.25 * b) - 2 * std::log(sp));
      } else {
        m1 = 0;
        m2 = inv4pi * sp * c.normal_curvature_term(i);
      }
    } else {
      const Vec2& y = c.points()[j];
      const double s = 0.25 * b * (x - y).squaredNorm();
      const double sn = std::sin(0.5 * (c.parameter(i) - c.parameter(j)));
      const double lg = std::log(4 * sn * sn);
      cplx full;
      if (kind == OperatorKind::A) {
        full = g0(b, x, y) * sp;
        m1 = -inv4pi * magnetic_phase(b, x, y) * i0(s) * log_taper(s) * sp;
      } else {
        const Vec2& nu = c.normals()[j];
        full = std::conj(dn_g0(b, y, nu, x)) * sp;
        m1 = std::conj(dn_g0_log_part(b, y, nu, x)) * log_taper(s) * sp;
      }
      m2 = full - m1 * lg;
    }
    row(j) = w[(i - j + n) % n] * m1 + h * m2;
  }
  return row;
}

inline Matrix assemble(OperatorKind kind, const SmoothCurve& c, double b) {
  const int n = c.size();
  const auto w = log_kernel_weights(n);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.row(i) = operator_row(kind, c, b, i, w).transpose();
  if (!m.allFinite()) throw numerical_error("boundary-ops", "non-finite entries in " + to_string(kind));
  return m;
}

inline SmoothCurve even_nodes(const SmoothCurve& c) {
  std::vector<Vec2> p, d1, d2;
  for (int i = 0; i < c.size(); i += 2) {
    p.push_back(c.points()[i]);
    d1.push_back(c.tangents()[i]);
    d2.push_back(c.second_derivatives()[i]);
  }
  return SmoothCurve::from_derivatives(std::move(p), std::move(d1), std::move(d2));
}

// Relative change of M·1 between the grid and its even-node half grid.
inline double self_convergence_defect(OperatorKind kind, const SmoothCurve& c, double b, const Matrix& m) {
  const int n = c.size();
  if (n % 4 != 0 || n < 16) return 0;
  const Matrix half = assemble(kind, even_nodes(c), b);
  const Vector fine = m * Vector::Ones(n);
  const Vector coarse = half * Vector::Ones(n / 2);
  double diff = 0, scale = 0;
  for (int i = 0; i < n / 2; ++i) {
    diff = std::max(diff, std::abs(fine(2 * i) - coarse(i)));
    scale = std::max(scale, std::abs(fine(2 * i)));
  }
  return diff / std::max(scale, 1e-300);
}

inline void check_field(double b) {
  if (!(b > 0) || !std::isfinite(b)) throw invalid_argument("boundary-ops", "field strength b must be positive");
}

inline SmoothCurve at_resolution(const SmoothCurve& c, int n) { return n > 0 ? c.resampled(n) : c; }

// Periodic trigonometric interpolation of node samples to m nodes.
inline std::vector<cplx> resample_density(const std::vector<cplx>& u, int m) {
  const int n = static_cast<int>(u.size());
  if (m == n) return u;
  Eigen::FFT<double> fft;
  std::vector<cplx> uh, out(m), res;
  fft.fwd(uh, u);
  const double scale = double(m) / n;
  for (int k = 0; k < n; ++k) {
    const int w = wavenumber(k, n);
    if (2 * w == n) {
      out[w] += 0.5 * scale * uh[k];
      out[m - w] += 0.5 * scale * uh[k];
      continue;
    }
    out[(w + m) % m] += scale * uh[k];
  }
  fft.inv(res, out);
  return res;
}

// Neville extrapolation of samples f(h_k) to h = 0.
inline cplx extrapolate_to_zero(const std::vector<double>& h, std::vector<cplx> f) {
  const int k = static_cast<int>(h.size());
  for (int level = 1; level < k; ++level)
    for (int i = 0; i + level < k; ++i)
      f[i] = (h[i + level] * f[i] - h[i] * f[i + 1]) / (h[i + level] - h[i]);
  return f[0];
}

inline void check_density(const SmoothCurve& c, const std::vector<cplx>& u) {
  if (static_cast<int>(u.size()) != c.size())
    throw invalid_argument("boundary-ops", "density must have one sample per curve node");
}

}  // namespace detail

struct AssemblyOptions {
  int n = 0;                          // resample the curve to n nodes; 0 keeps its nodes
  bool check_resolution = true;
  double resolution_tolerance = 1e-3; // tolerated relative change of M·1 against the half grid
};

inline BoundaryOperatorMatrix assemble_operator(OperatorKind kind, const SmoothCurve& curve, double b, AssemblyOptions opt) {
  detail::check_field(b);
  BoundaryOperatorMatrix out{kind, {}, detail::at_resolution(curve, opt.n), b, {}};
  out.matrix = detail::assemble(kind, out.curve, b);
  if (opt.check_resolution) {
    const double defect = detail::self_convergence_defect(kind, out.curve, b, out.matrix);
    if (defect > opt.resolution_tolerance)
      throw invalid_argument("boundary-ops", "nodes too coarse for this curve and field: half-grid defect " +
                                                 to_decimal_string(defect));
  }
  return out;
}

inline BoundaryOperatorMatrix assemble_A(const SmoothCurve& curve, double b, AssemblyOptions opt = {}) {
  return assemble_operator(OperatorKind::A, curve, b, opt);
}

inline BoundaryOperatorMatrix assemble_B(const SmoothCurve& curve, double b, AssemblyOptions opt = {}) {
  return assemble_operator(OperatorKind::B, curve, b, opt);
}

/// True when x lies within one mesh width of the curve, where plain trapezoid
/// evaluation of the potentials loses accuracy.
inline bool accuracy_degraded(const SmoothCurve& curve, const Vec2& x) {
  double mesh = 0;
  for (int i = 0; i < curve.size(); ++i) mesh = std::max(mesh, curve.arc_weight(i));
  return curve.distance(x) < mesh;
}

/// 𝒜u(x) by the trapezoid rule on the curve nodes.
inline cplx single_layer_potential(const SmoothCurve& c, double b, const std::vector<cplx>& u, const Vec2& x) {
  detail::check_field(b);
  detail::check_density(c, u);
  cplx s = 0;
  for (int j = 0; j < c.size(); ++j) s += c.arc_weight(j) * detail::g0(b, x, c.points()[j]) * u[j];
  return s;
}

/// ℬu(x).
inline cplx double_layer_potential(const SmoothCurve& c, double b, const std::vector<cplx>& u, const Vec2& x) {
  detail::check_field(b);
  detail::check_density(c, u);
  cplx s = 0;
  for (int j = 0; j < c.size(); ++j)
    s += c.arc_weight(j) * std::conj(detail::dn_g0(b, c.points()[j], c.normals()[j], x)) * u[j];
  return s;
}

/// ν·(∇ - ibA0) 𝒜u(x) for a fixed direction ν.
inline cplx single_layer_normal_derivative(const SmoothCurve& c, double b, const std::vector<cplx>& u, const Vec2& x,
                                           const Vec2& nu) {
  detail::check_field(b);
  detail::check_density(c, u);
  cplx s = 0;
  for (int j = 0; j < c.size(); ++j) s += c.arc_weight(j) * detail::dn_g0(b, x, nu, c.points()[j]) * u[j];
  return s;
}

struct OneSidedLimits {
  cplx interior, exterior;
  double interior_error = 0, exterior_error = 0;  // change when the farthest distance is dropped
};

struct JumpReport {
  int node = 0;
  Vec2 point;
  cplx density;
  cplx A_u, B_u;  // Nyström matrices applied to the density, row `node`
  OneSidedLimits single, double_layer, normal_derivative;
  // single: ext - int (0); double layer: int - ext (u); normal derivative: ext - int (u)
  cplx single_jump() const { return single.exterior - single.interior; }
  cplx double_jump() const { return double_layer.interior - double_layer.exterior; }
  cplx normal_derivative_jump() const { return normal_derivative.exterior - normal_derivative.interior; }
  double extrapolation_error() const {
    return std::max({single.interior_error, single.exterior_error, double_layer.interior_error,
                     double_layer.exterior_error, normal_derivative.interior_error, normal_derivative.exterior_error});
  }
};

struct JumpOptions {
  std::vector<double> distances{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09};
  double tolerance = 1e-5;  // extrapolation nonconvergence threshold
};

/// One-sided limits of 𝒜u, ℬu and ∂_N𝒜u at node i along ±ν, by polynomial
/// extrapolation in the approach distance. The potentials are evaluated on
/// a trigonometrically refined copy of the curve and density so that the
/// trapezoid rule stays accurate at the smallest distance.
inline JumpReport jump_test(const SmoothCurve& curve, double b, const std::vector<cplx>& density, int i,
                            JumpOptions opt = {}) {
  detail::check_field(b);
  detail::check_density(curve, density);
  if (i < 0 || i >= curve.size()) throw invalid_argument("boundary-ops", "node index out of range");
  if (opt.distances.size() < 3) throw invalid_argument("boundary-ops", "need at least three approach distances");
  std::sort(opt.distances.begin(), opt.distances.end());
  if (!(opt.distances.front() > 0)) throw invalid_argument("boundary-ops", "approach distances must be positive");
  int m = curve.size();
  while (m < 8 * curve.length() / opt.distances.front()) m *= 2;
  const SmoothCurve fine = curve.resampled(m);
  const auto u = detail::resample_density(density, m);
  const Vec2 x0 = curve.points()[i], nu = curve.normals()[i];

  JumpReport rep;
  rep.node = i;
  rep.point = x0;
  rep.density = density[i];
  const auto w = log_kernel_weights(curve.size());
  const Vector uv = Eigen::Map<const Vector>(density.data(), curve.size());
  rep.A_u = detail::operator_row(OperatorKind::A, curve, b, i, w).cwiseProduct(uv).sum();
  rep.B_u = detail::operator_row(OperatorKind::B, curve, b, i, w).cwiseProduct(uv).sum();

  auto limits = [&](auto&& f) {
    OneSidedLimits out;
    for (int side : {+1, -1}) {
      std::vector<cplx> v;
      for (double h : opt.distances) v.push_back(f(Vec2(x0 + side * h * nu)));
      const cplx all = detail::extrapolate_to_zero(opt.distances, v);
      const std::vector<double> hs(opt.distances.begin(), opt.distances.end() - 1);
      const cplx fewer = detail::extrapolate_to_zero(hs, std::vector<cplx>(v.begin(), v.end() - 1));
      (side > 0 ? out.interior : out.exterior) = all;
      (side > 0 ? out.interior_error : out.exterior_error) = std::abs(all - fewer);
    }
    return out;
  };
  rep.single = limits([&](const Vec2& x) { return single_layer_potential(fine, b, u, x); });
  rep.double_layer = limits([&](const Vec2& x) { return double_layer_potential(fine, b, u, x); });
  rep.normal_derivative = limits([&](const Vec2& x) { return single_layer_normal_derivative(fine, b, u, x, nu); });
  if (rep.extrapolation_error() > opt.tolerance)
    throw numerical_error("boundary-ops", "extrapolation to the boundary did not converge (change " +
                                              to_decimal_string(rep.extrapolation_error()) + ")");
  return rep;
}

struct DtrMaps {
  BoundaryOperatorMatrix A, B, T_plus, T_minus, DtR_interior, DtR_exterior;
  double a_rcond = 0;
  /// max-entry residuals of A·DtR - T
  double interior_residual = 0, exterior_residual = 0;
};

/// T_± = B + Aτ ± ½ and the Dirichlet-to-Robin maps A^{-1} T_- (interior, K)
/// and A^{-1} T_+ (exterior, Ω).
inline DtrMaps dtr_maps(const SmoothCurve& curve, double b, const RobinCoefficient& tau, AssemblyOptions opt = {}) {
  auto A = assemble_A(curve, b, opt);
  auto B = assemble_B(curve, b, opt);
  const int n = A.curve.size();
  if (tau.size() != n) throw invalid_argument("boundary-ops", "Robin coefficient must have one sample per node");
  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(tau.values.data(), n);
  const Matrix At = A.matrix * t.cast<cplx>().asDiagonal();
  const Matrix I = Matrix::Identity(n, n);
  DtrMaps out{A, B, B, B, B, B, 0, 0, 0};
  out.T_plus.kind = OperatorKind::T_plus;
  out.T_plus.matrix = B.matrix + At + 0.5 * I;
  out.T_minus.kind = OperatorKind::T_minus;
  out.T_minus.matrix = B.matrix + At - 0.5 * I;
  Eigen::PartialPivLU<Matrix> lu(A.matrix);
  out.a_rcond = lu.rcond();
  if (!(out.a_rcond > 1e3 * std::numeric_limits<double>::epsilon()))
    throw numerical_error("boundary-ops", "single-layer matrix A is numerically singular; A is invertible for smooth "
                                          "curves, so the discretization is at fault");
  out.DtR_interior.kind = OperatorKind::DtR_interior;
  out.DtR_interior.matrix = lu.solve(out.T_minus.matrix);
  out.DtR_exterior.kind = OperatorKind::DtR_exterior;
  out.DtR_exterior.matrix = lu.solve(out.T_plus.matrix);
  for (auto* m : {&out.T_plus, &out.T_minus, &out.DtR_interior, &out.DtR_exterior}) m->tau = tau.values;
  out.interior_residual = (A.matrix * out.DtR_interior.matrix - out.T_minus.matrix).cwiseAbs().maxCoeff();
  out.exterior_residual = (A.matrix * out.DtR_exterior.matrix - out.T_plus.matrix).cwiseAbs().maxCoeff();
  return out;
}

enum class Side { interior, exterior };

inline std::string to_string(Side s) { return s == Side::interior ? "interior" : "exterior"; }

struct ManufacturedReport {
  Side side = Side::interior;
  double max_residual = 0;  // max |DtR γ0 u - ∂_R u| / max |∂_R u|
  double max_robin = 0;
};

/// u = G0(·, y0) solves Lu = 0 away from y0. With y0 on the far side of the
/// curve, the map for `side` must send γ0 u to ν·(∇ - ibA0)u + τu.
inline ManufacturedReport dtr_manufactured_check(const DtrMaps& maps, const Vec2& y0, Side side) {
  const SmoothCurve& c = maps.A.curve;
  const double b = maps.A.b;
  if (c.contains(y0) != (side == Side::exterior))
    throw invalid_argument("boundary-ops", "source point must lie on the side opposite to the tested region");
  const int n = c.size();
  Vector g(n), robin(n);
  for (int i = 0; i < n; ++i) {
    g(i) = detail::g0(b, c.points()[i], y0);
    robin(i) = detail::dn_g0(b, c.points()[i], c.normals()[i], y0) + maps.T_plus.tau[i] * g(i);
  }
  const Matrix& map = side == Side::interior ? maps.DtR_interior.matrix : maps.DtR_exterior.matrix;
  ManufacturedReport out;
  out.side = side;
  out.max_robin = robin.cwiseAbs().maxCoeff();
  out.max_residual = (map * g - robin).cwiseAbs().maxCoeff() / out.max_robin;
  return out;
}

struct GenericEntry {
  double epsilon = 0;
  double cond_plus = 0, cond_minus = 0;
  bool singular = false;
};

struct GenericReport {
  int n = 0;
  double threshold = 1e8;
  std::vector<GenericEntry> entries;
  int singular_count() const {
    return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.singular; }));
  }
  std::vector<double> singular_epsilons() const {
    std::vector<double> out;
    for (const auto& e : entries)
      if (e.singular) out.push_back(e.epsilon);
    return out;
  }
};

/// 2-norm condition numbers of T_{±, τ+ε} over a list of shifts ε.
inline GenericReport generic_sweep(const SmoothCurve& curve, double b, const RobinCoefficient& tau,
                                   const std::vector<double>& epsilons, AssemblyOptions opt = {},
                                   double threshold = 1e8) {
  const auto A = assemble_A(curve, b, opt);
  const auto B = assemble_B(curve, b, opt);
  const int n = A.curve.size();
  if (tau.size() != n) throw invalid_argument("boundary-ops", "Robin coefficient must have one sample per node");
  GenericReport rep;
  rep.n = n;
  rep.threshold = threshold;
  const Matrix I = Matrix::Identity(n, n);
  auto cond = [](const Matrix& m) {
    Eigen::BDCSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double lo = sv(sv.size() - 1);
    return lo > 0 ? sv(0) / lo : std::numeric_limits<double>::infinity();
  };
  for (double eps : epsilons) {
    Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(tau.values.data(), n).array() + eps;
    const Matrix base = B.matrix + A.matrix * t.cast<cplx>().asDiagonal();
    GenericEntry e;
    e.epsilon = eps;
    e.cond_plus = cond(base + 0.5 * I);
    e.cond_minus = cond(base - 0.5 * I);
    e.singular = !(e.cond_plus <= threshold) || !(e.cond_minus <= threshold);
    rep.entries.push_back(e);
  }
  return rep;
}

struct RepresentationReport {
  Side side = Side::interior;
  int points = 0;
  double max_residual = 0;  // absolute
  double max_value = 0;     // max |u| over the test points
};

/// Checks u = ℬγ0u - 𝒜∂_N u in K° (side interior, y0 ∈ Ω) or u = 𝒜∂_N u - ℬγ0u
/// in Ω (side exterior, y0 ∈ K°) for u = G0(·, y0), with exact boundary traces,
/// at points x_i ± δν_i whose distance to the curve is at least min_distance.
inline RepresentationReport representation_check(const SmoothCurve& c, double b, const Vec2& y0, Side side,
                                                 double min_distance = 0.2,
                                                 std::vector<double> offsets = {0.2, 0.35, 0.5, 1.0}) {
  detail::check_field(b);
  if (c.contains(y0) != (side == Side::exterior))
    throw invalid_argument("boundary-ops", "source point must lie on the side opposite to the tested region");
  const int n = c.size();
  std::vector<cplx> g(n), dn(n);
  for (int j = 0; j < n; ++j) {
    g[j] = detail::g0(b, c.points()[j], y0);
    dn[j] = detail::dn_g0(b, c.points()[j], c.normals()[j], y0);
  }
  RepresentationReport rep;
  rep.side = side;
  const int stride = std::max(1, n / 16);
  for (int i = 0; i < n; i += stride)
    for (double delta : offsets) {
      const Vec2 x = c.points()[i] + (side == Side::interior ? delta : -delta) * c.normals()[i];
      if (c.contains(x) != (side == Side::interior) || c.distance(x) < min_distance) continue;
      const cplx sl = single_layer_potential(c, b, dn, x);
      const cplx dl = double_layer_potential(c, b, g, x);
      const cplx rep_u = side == Side::interior ? dl - sl : sl - dl;
      const cplx u = detail::g0(b, x, y0);
      rep.max_residual = std::max(rep.max_residual, std::abs(rep_u - u));
      rep.max_value = std::max(rep.max_value, std::abs(u));
      ++rep.points;
    }
  if (rep.points == 0) throw invalid_argument("boundary-ops", "no test points at the requested distance");
  return rep;
}

}  // namespace landau
