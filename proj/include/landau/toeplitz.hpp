#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>

#include "landau/capacity.hpp"
#include "landau/core.hpp"
#include "landau/curve.hpp"
#include "landau/error.hpp"
#include "landau/precision.hpp"
#include "landau/quadrature.hpp"

namespace landau {

// Level index n = q - 1 and "degeneracy" index m >= 0 label the d = 1
// eigenfunctions; the angular momentum is l = m - n. With t = b r²/2,
//   |φ_{n,m}|² = (b/2π) (n_r! / (n_r + |l|)!) t^{|l|} [L_{n_r}^{|l|}(t)]² e^{-t},   n_r = min(n, m),
// so S_q^U for a centred disk of radius R is diagonal with entries
//   s_m = ∫_0^x (n_r!/(n_r+|l|)!) t^{|l|} [L_{n_r}^{|l|}(t)]² e^{-t} dt,   x = b R²/2.

/// Decreasing eigenvalues of S_q^U. Values are stored at precision_bits; do
/// further arithmetic on them inside a PrecisionScope of the same width.
struct ToeplitzSpectrum {
  int q = 1;
  int d = 1;
  double b = 1;
  std::string domain;
  std::vector<mp_real> eigenvalues;  // s_1 >= s_2 >= …
  std::vector<int> labels;           // m for radial spectra, basis index or packed (m1, m2) otherwise
  unsigned precision_bits = 53;
  mp_real reliable_floor = 0;        // every eigenvalue above this is present in the list
  double truncation_error = 0;       // bound on the omitted part of the trace
};

namespace detail {

template <class Real>
Real generalized_laguerre(int n, int alpha, const Real& t) {
  if (n == 0) return Real(1);
  Real p0 = 1, p1 = Real(1 + alpha) - t;
  for (int k = 1; k < n; ++k) {
    Real p2 = ((Real(2 * k + 1 + alpha) - t) * p1 - Real(k + alpha) * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// n_r! / (n_r + |l|)!
template <class Real>
Real laguerre_norm(int nr, int al) {
  Real r = 1;
  for (int k = nr + 1; k <= nr + al; ++k) r /= k;
  return r;
}

// radial density in t of φ_{n,m}, normalized to unit mass on [0, ∞)
template <class Real>
Real radial_density(int n, int m, const Real& t) {
  using std::exp;
  using std::pow;
  const int nr = std::min(n, m), al = std::abs(m - n);
  const Real lag = generalized_laguerre(nr, al, t);
  return laguerre_norm<Real>(nr, al) * pow(t, al) * lag * lag * exp(-t);
}

template <class Real>
Real radial_mass(int n, int m, const Real& x, const QuadratureRule<Real>& rule) {
  return apply_rule(rule, [&](const Real& t) { return radial_density(n, m, t); }, Real(0), x);
}

// polynomial degree of the density plus room for e^{-t} over [0, x]
inline int radial_rule_order(int n, int m, unsigned bits, double x) {
  const int degree = std::abs(m - n) + 2 * std::min(n, m);
  return degree / 2 + static_cast<int>(0.35 * bits) + 12 + static_cast<int>(std::ceil(2 * x));
}

// Stable decreasing sort with index tie-break.
inline void sort_decreasing(std::vector<mp_real>& v, std::vector<int>& labels) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  std::vector<mp_real> v2;
  std::vector<int> l2;
  v2.reserve(v.size());
  l2.reserve(v.size());
  for (auto i : idx) {
    v2.push_back(v[i]);
    l2.push_back(labels[i]);
  }
  v = std::move(v2);
  labels = std::move(l2);
}

inline void check_level(int q) {
  if (q < 1) throw invalid_argument("toeplitz", "Landau index q must be >= 1");
}

}  // namespace detail

/// Mass of the level-q, index-m eigenfunction inside the centred disk with x = b R²/2.
inline mp_real radial_eigenvalue(int q, int m, const mp_real& x, unsigned bits) {
  PrecisionScope scope(bits);
  const auto rule = gauss_legendre<mp_real>(detail::radial_rule_order(q - 1, m, bits, static_cast<double>(x)));
  return detail::radial_mass(q - 1, m, x, rule);
}

/// Spectrum of S_q^U for the centred disk of radius R, indices m = 0..m_max.
/// Each entry is computed with two Gauss–Legendre orders; a disagreement
/// beyond the square root of the working precision, or a non-monotone tail,
/// means the precision cannot resolve the requested range.
inline ToeplitzSpectrum radial_spectrum(int q, double b, double R, int m_max, unsigned precision_bits) {
  detail::check_level(q);
  if (!(b > 0)) throw invalid_argument("toeplitz", "field strength b must be positive");
  if (!(R > 0)) throw invalid_argument("toeplitz", "disk radius R must be positive");
  if (m_max < 1) throw invalid_argument("toeplitz", "m_max must be >= 1");
  if (precision_bits < 24) throw invalid_argument("toeplitz", "precision must be at least 24 bits");
  PrecisionScope scope(precision_bits);
  const int n = q - 1;
  const mp_real x = mp_real(b) * mp_real(R) * mp_real(R) / 2;
  const mp_real tol = sqrt(working_epsilon<mp_real>());
  ToeplitzSpectrum out;
  out.q = q;
  out.b = b;
  out.precision_bits = precision_bits;
  out.domain = "disk(R=" + to_decimal_string(R) + ")";
  std::vector<mp_real> raw;
  for (int m = 0; m <= m_max + 1; ++m) {
    const int order = detail::radial_rule_order(n, m, precision_bits, 0.5 * b * R * R);
    const mp_real s1 = detail::radial_mass(n, m, x, gauss_legendre<mp_real>(order));
    const mp_real s2 = detail::radial_mass(n, m, x, gauss_legendre<mp_real>(order + 8));
    if (!(s2 > 0) || abs(s1 - s2) > tol * s2)
      throw numerical_error("toeplitz", "precision insufficient for m = " + std::to_string(m) +
                                            " (quadrature orders disagree)");
    raw.push_back(s2);
  }
  // once the radial peak t ≈ m + n + 1 sits well outside [0, x] the masses must fall with m
  for (int m = 1; m <= m_max + 1; ++m)
    if (mp_real(m) > 2 * (x + n) + 4 && !(raw[m] < raw[m - 1]))
      throw numerical_error("toeplitz", "precision insufficient: tail lost monotonicity at m = " + std::to_string(m));
  out.reliable_floor = raw.back();
  raw.pop_back();
  out.eigenvalues = raw;
  out.labels.resize(raw.size());
  std::iota(out.labels.begin(), out.labels.end(), 0);
  detail::sort_decreasing(out.eigenvalues, out.labels);
  // omitted trace: masses past m_max fall at least geometrically once m - n > x
  const mp_real last = out.reliable_floor;
  const mp_real ratio = x / mp_real(m_max + 1 - n);
  out.truncation_error = ratio < 1 ? static_cast<double>(last / (1 - ratio)) : std::numeric_limits<double>::infinity();
  return out;
}

/// Normalized level-q eigenfunction φ_{q,m} at (r, θ) for field b (d = 1).
inline cplx landau_basis_function(int q, int m, double b, const Vec2& p) {
  const int n = q - 1, nr = std::min(n, m), al = std::abs(m - n);
  const double t = 0.5 * b * p.squaredNorm();
  const double theta = std::atan2(p.y(), p.x());
  const double norm = std::sqrt(b / (2 * boost::math::constants::pi<double>()) * detail::laguerre_norm<double>(nr, al));
  const double radial = norm * std::pow(t, 0.5 * al) * detail::generalized_laguerre(nr, al, t) * std::exp(-0.5 * t);
  return radial * std::polar(1.0, double(m - n) * theta);
}

struct GalerkinOptions {
  int angular_nodes = 0;         // 0: chosen from the basis size
  int radial_order = 64;
  double tail_tolerance = 1e-30; // mass of the first omitted basis function in the circumscribing disk
};

/// Eigenvalues of G_{mm'} = ∫_U conj(φ_m) φ_{m'} dx, m, m' < M, for U star-shaped
/// about the origin. U is swept as s·x(t), s ∈ [0, 1], with Jacobian s (x ∧ x').
/// Double precision: reliable for the head of the spectrum only.
inline ToeplitzSpectrum galerkin_spectrum(int q, double b, const SmoothCurve& domain, int M, GalerkinOptions opt = {}) {
  detail::check_level(q);
  if (!(b > 0)) throw invalid_argument("toeplitz", "field strength b must be positive");
  if (M < 1) throw invalid_argument("toeplitz", "basis size M must be >= 1");
  double rc = 0;
  for (const auto& p : domain.points()) rc = std::max(rc, p.norm());
  {
    const mp_real tail = radial_eigenvalue(q, M, mp_real(0.5 * b * rc * rc), 128);
    if (tail > mp_real(opt.tail_tolerance))
      throw invalid_argument("toeplitz", "basis size M too small: tail mass " + to_decimal_string(tail, 3) +
                                             " above tolerance");
  }
  int nt = opt.angular_nodes > 0 ? opt.angular_nodes : std::max(domain.size(), 4 * M + 16);
  nt += nt % 2;
  const SmoothCurve c = domain.resampled(nt);
  for (int i = 0; i < nt; ++i)
    if (!(wedge(c.points()[i], c.tangents()[i]) > 0))
      throw invalid_argument("toeplitz", "domain must be star-shaped about the origin");
  const auto rule = gauss_legendre<double>(opt.radial_order);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(M, M);
  Eigen::VectorXcd phi(M);
  const double ht = 2 * boost::math::constants::pi<double>() / nt;
  for (int i = 0; i < nt; ++i) {
    const Vec2 x = c.points()[i];
    const double jac = wedge(x, c.tangents()[i]) * ht;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = 0.5 * (1 + rule.nodes[k]);
      const double w = 0.5 * rule.weights[k] * s * jac;
      const Vec2 p = s * x;
      for (int m = 0; m < M; ++m) phi(m) = landau_basis_function(q, m, b, p);
      G.noalias() += w * phi.conjugate() * phi.transpose();
    }
  }
  G = 0.5 * (G + G.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numerical_error("toeplitz", "Hermitian eigensolver failed");
  ToeplitzSpectrum out;
  out.q = q;
  out.b = b;
  out.precision_bits = 53;
  out.domain = "curve(n=" + std::to_string(domain.size()) + ")";
  PrecisionScope scope(53);
  for (int k = 0; k < M; ++k) out.eigenvalues.emplace_back(es.eigenvalues()(k));
  out.labels.resize(M);
  std::iota(out.labels.begin(), out.labels.end(), 0);
  detail::sort_decreasing(out.eigenvalues, out.labels);
  out.reliable_floor = mp_real(1e-12);
  out.truncation_error = opt.tail_tolerance;
  return out;
}

/// Σ_j s_j in the spectrum's precision.
inline mp_real spectrum_trace(const ToeplitzSpectrum& sp) {
  PrecisionScope scope(sp.precision_bits);
  mp_real t = 0;
  for (const auto& v : sp.eigenvalues) t += v;
  return t;
}

struct CountingQuery {
  double epsilon = 0;
  long count = 0;
  bool reliable = true;  // false when ε is below the spectrum's reliable floor
};

/// #{j : s_j > ε}.
inline CountingQuery counting(const ToeplitzSpectrum& sp, const mp_real& epsilon) {
  PrecisionScope scope(sp.precision_bits);
  if (!(epsilon > 0) || !(epsilon < 1)) throw invalid_argument("toeplitz", "epsilon must lie in (0, 1)");
  CountingQuery out;
  out.epsilon = static_cast<double>(epsilon);
  // eigenvalues are sorted decreasingly
  auto it = std::partition_point(sp.eigenvalues.begin(), sp.eigenvalues.end(),
                                 [&](const mp_real& v) { return v > epsilon; });
  out.count = it - sp.eigenvalues.begin();
  out.reliable = epsilon >= sp.reliable_floor;
  return out;
}

inline CountingQuery counting(const ToeplitzSpectrum& sp, double epsilon) {
  PrecisionScope scope(sp.precision_bits);
  return counting(sp, mp_real(epsilon));
}

/// ε = 10^{-k} at the spectrum's precision.
inline CountingQuery counting_pow10(const ToeplitzSpectrum& sp, int k) {
  PrecisionScope scope(sp.precision_bits);
  return counting(sp, mp_real(pow(mp_real(10), -k)));
}

/// (b/2) Cap(U)².
inline double capacity_limit_predictor(int q, double b, const SmoothCurve& curve) {
  detail::check_level(q);
  const double c = capacity(curve);
  return 0.5 * b * c * c;
}

struct LimitTerm {
  int j = 0;
  mp_real value;  // (j! s_j)^{1/j}
};

/// (j! s_j)^{1/j} for j = 1..jmax (all when jmax = 0), by log-gamma in the spectrum's precision.
inline std::vector<LimitTerm> limit_sequence(const ToeplitzSpectrum& sp, int jmax = 0) {
  PrecisionScope scope(sp.precision_bits);
  const int n = jmax > 0 ? jmax : static_cast<int>(sp.eigenvalues.size());
  if (n > static_cast<int>(sp.eigenvalues.size()))
    throw invalid_argument("toeplitz", "spectrum holds fewer than jmax eigenvalues");
  std::vector<LimitTerm> out;
  mp_real logfact = 0;
  for (int j = 1; j <= n; ++j) {
    const mp_real& s = sp.eigenvalues[j - 1];
    if (!(s > 0)) throw invalid_argument("toeplitz", "non-positive eigenvalue at j = " + std::to_string(j));
    logfact += log(mp_real(j));
    out.push_back({j, mp_real(exp((logfact + log(s)) / j))});
  }
  return out;
}

/// binom(q+d-1, d-1) / d! · (|log ε| / log|log ε|)^d for 0 < ε < e^{-e}.
inline double counting_predictor(double epsilon, int q, int d) {
  detail::check_level(q);
  if (d < 1) throw invalid_argument("toeplitz", "d must be >= 1");
  if (!(epsilon > 0) || !(epsilon < std::exp(-std::exp(1.0))))
    throw invalid_argument("toeplitz", "epsilon must lie in (0, exp(-e))");
  const double L = -std::log(epsilon);
  double binom = 1, fact = 1;
  for (int i = 1; i <= d - 1; ++i) binom = binom * (q + i) / i;
  for (int i = 2; i <= d; ++i) fact *= i;
  return binom / fact * std::pow(L / std::log(L), d);
}

/// U = D_{R1} × D_{R2} ⊂ R⁴, d = 2. The level-q space splits into blocks
/// q1 + q2 = q + 1 and S_q^U acts on each block as a tensor product, so the
/// spectrum is the merged set of products s^{(q1)}_{m1}(R1) s^{(q2)}_{m2}(R2),
/// m1, m2 <= cutoff. Labels pack (block, m1, m2).
inline ToeplitzSpectrum tensor_spectrum_d2(int q, double b, double R1, double R2, int cutoff, unsigned precision_bits) {
  detail::check_level(q);
  if (cutoff < 1) throw invalid_argument("toeplitz", "cutoff must be >= 1");
  ToeplitzSpectrum out;
  out.q = q;
  out.d = 2;
  out.b = b;
  out.precision_bits = precision_bits;
  out.domain = "disk(R=" + to_decimal_string(R1) + ")xdisk(R=" + to_decimal_string(R2) + ")";
  PrecisionScope scope(precision_bits);
  mp_real floor = 0;
  double trunc = 0;
  for (int q1 = 1; q1 <= q; ++q1) {
    const int q2 = q + 1 - q1;
    const auto a = radial_spectrum(q1, b, R1, cutoff, precision_bits);
    const auto c = radial_spectrum(q2, b, R2, cutoff, precision_bits);
    floor = max(floor, mp_real(max(a.reliable_floor * c.eigenvalues.front(), c.reliable_floor * a.eigenvalues.front())));
    trunc += a.truncation_error * static_cast<double>(spectrum_trace(c)) +
             c.truncation_error * static_cast<double>(spectrum_trace(a));
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
      for (std::size_t k = 0; k < c.eigenvalues.size(); ++k) {
        out.eigenvalues.push_back(a.eigenvalues[i] * c.eigenvalues[k]);
        out.labels.push_back((q1 - 1) * 1000000 + a.labels[i] * 1000 + c.labels[k]);
      }
  }
  detail::sort_decreasing(out.eigenvalues, out.labels);
  out.reliable_floor = floor;
  out.truncation_error = trunc;
  return out;
}

}  // namespace landau
