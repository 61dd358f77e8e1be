#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "landau/core.hpp"
#include "landau/error.hpp"
#include "landau/quadrature.hpp"

namespace landau {

// The resolvent kernel of L at the spectral point 0 is
//   G0(x, y) = b^{d-1} / (4π)^d · exp(-i b Im(x̄·y) / 2) · I(b|x - y|² / 4),
//   I(s) = ∫_0^∞ e^{-s coth t} sinh^{-d} t dt = ∫_1^∞ e^{-su} (u² - 1)^{(d-2)/2} du.
// Every quadrature below runs in the variable u = cosh v, where the integrand
// e^{-s cosh v} sinh^{d-1} v is smooth at v = 0 for every d.

/// a = coth(1), the image of the split point t = 1 under u = coth t.
template <class Real>
Real split_point_u() {
  using std::tanh;
  return Real(1) / tanh(Real(1));
}

/// arccosh(coth 1) = log coth(1/2): the split point in the v variable.
template <class Real>
Real split_point_v() {
  using std::log;
  using std::tanh;
  return log(Real(1) / tanh(Real(1) / 2));
}

namespace detail {

inline void check_half_dimension(int d) {
  if (d < 1) throw invalid_argument("green-kernel", "half-dimension d must be >= 1");
}

template <class Real>
void check_positive_s(const Real& s) {
  using std::isfinite;
  if (!(s > 0)) throw invalid_argument("green-kernel", "I(s) requires s > 0");
}

// cosh^p(v) e^{-s cosh v} sinh^{d-1}(v)
template <class Real>
Real v_integrand(const Real& v, const Real& s, int d, int p) {
  using std::cosh;
  using std::exp;
  using std::sinh;
  const Real c = cosh(v);
  Real r = exp(-s * c);
  if (d > 1) {
    const Real sh = sinh(v);
    for (int k = 1; k < d; ++k) r *= sh;
  }
  for (int k = 0; k < p; ++k) r *= c;
  return r;
}

template <class Real>
const QuadratureRule<Real>& cached_rule() {
  if constexpr (std::is_same_v<Real, double>) {
    static const QuadratureRule<double> rule = gauss_legendre<double>(default_gauss_order<double>());
    return rule;
  } else {
    // the order depends on the runtime precision, so cache per precision
    thread_local std::map<int, QuadratureRule<Real>> rules;
    const int digits = boost::math::tools::digits<Real>();
    auto it = rules.find(digits);
    if (it == rules.end()) it = rules.emplace(digits, gauss_legendre<Real>(default_gauss_order<Real>())).first;
    return it->second;
  }
}

// ∫_start^∞ of the v-integrand in unit panels, stopping once the integrand is
// past its maximum and a panel no longer moves the sum.
template <class Real>
Real tail_integral(const Real& s, int d, int p, const Real& start) {
  using std::abs;
  using std::cosh;
  const auto& rule = cached_rule<Real>();
  const Real eps = working_epsilon<Real>();
  auto f = [&](const Real& v) { return v_integrand(v, s, d, p); };
  Real total = 0;
  Real lo = start;
  for (int k = 0; k < 4000; ++k) {
    const Real hi = lo + 1;
    const Real piece = integrate_adaptive(f, lo, hi, rule).value;
    total += piece;
    if (s * cosh(lo) > Real(d + p) && abs(piece) <= eps * abs(total)) return total;
    lo = hi;
  }
  throw numerical_error("green-kernel", "tail of I(s) did not converge");
}

// C((d-2)/2, k) by the product formula; exact for the half-integer upper index.
template <class Real>
Real half_binomial(int d, int k) {
  const Real nu = Real(d - 2) / 2;
  Real r = 1;
  for (int i = 0; i < k; ++i) r *= (nu - i) / (i + 1);
  return r;
}

template <class Real>
Real factorial(int n) {
  Real r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Falling factorial (x)_l = x(x-1)…(x-l+1); for l < 0 the usual extension
/// 1 / ((x+1)(x+2)…(x-l)). Returns NaN where that extension has a pole.
template <class Real>
Real falling(const Real& x, int l) {
  Real r = 1;
  if (l >= 0) {
    for (int i = 0; i < l; ++i) r *= x - i;
    return r;
  }
  for (int i = 1; i <= -l; ++i) r *= x + i;
  if (r == 0) return std::numeric_limits<Real>::quiet_NaN();
  return Real(1) / r;
}

}  // namespace detail

/// I(s) over the whole half line, s > 0.
template <class Real>
Real eval_I(const Real& s, int d) {
  detail::check_half_dimension(d);
  detail::check_positive_s(s);
  return detail::tail_integral(s, d, 0, Real(0));
}

/// Piece of I from t ∈ (0, 1), i.e. u ∈ (coth 1, ∞). Singular as s → 0⁺.
template <class Real>
Real eval_I0(const Real& s, int d) {
  detail::check_half_dimension(d);
  detail::check_positive_s(s);
  return detail::tail_integral(s, d, 0, split_point_v<Real>());
}

/// Piece of I from t ∈ (1, ∞), i.e. u ∈ (1, coth 1). Entire in s, so any real s is accepted.
template <class Real>
Real eval_Iinf(const Real& s, int d) {
  using std::isfinite;
  detail::check_half_dimension(d);
  auto f = [&](const Real& v) { return detail::v_integrand(v, s, d, 0); };
  return integrate_adaptive(f, Real(0), split_point_v<Real>(), detail::cached_rule<Real>()).value;
}

/// I'(s) = -∫_1^∞ u e^{-su} (u² - 1)^{(d-2)/2} du, by quadrature of the differentiated integrand.
template <class Real>
Real eval_I_derivative(const Real& s, int d) {
  detail::check_half_dimension(d);
  detail::check_positive_s(s);
  return -detail::tail_integral(s, d, 1, Real(0));
}

/// k-th derivatives of I_∞ at s = 0, k = 0..order.
template <class Real>
std::vector<Real> iinf_derivatives_at_zero(int d, int order) {
  detail::check_half_dimension(d);
  std::vector<Real> out;
  for (int k = 0; k <= order; ++k) {
    auto f = [&](const Real& v) {
      Real r = detail::v_integrand(v, Real(0), d, k);
      return (k % 2) ? Real(-r) : r;
    };
    out.push_back(integrate_adaptive(f, Real(0), split_point_v<Real>(), detail::cached_rule<Real>()).value);
  }
  return out;
}

/// g_m(t) = ∫_t^∞ e^{-u} u^m du = Γ(m+1, t) for integer m and t > 0.
/// m >= 0: e^{-t} Σ_{j=0}^m (m)_j t^{m-j}.
/// m = -n-1 < 0: ((-1)^n / n!) [E1(t) - e^{-t} Σ_{i<n} (-1)^i i! t^{-i-1}].
template <class Real>
Real g_m(int m, const Real& t) {
  using std::exp;
  if (!(t > 0)) throw invalid_argument("green-kernel", "g_m requires t > 0");
  const Real et = exp(-t);
  if (m >= 0) {
    Real sum = 0, poch = 1;
    for (int j = 0; j <= m; ++j) {
      Real pw = 1;
      for (int k = 0; k < m - j; ++k) pw *= t;
      sum += poch * pw;
      poch *= (m - j);
    }
    return et * sum;
  }
  const int n = -m - 1;
  Real sum = 0, fact = 1, tp = 1 / t;
  for (int i = 0; i < n; ++i) {
    if (i > 0) fact *= i;
    sum += ((i % 2) ? Real(-fact) : fact) * tp;
    tp /= t;
  }
  const Real e1 = boost::math::expint(1, t);
  const Real bracket = e1 - et * sum;
  return ((n % 2) ? Real(-bracket) : bracket) / detail::factorial<Real>(n);
}

/// Coefficients of I0(s) = Σ_{j>=1-d} (e^{-sa} c_j - c'_j) s^j - Σ_{j>=0} d_j s^j log s, a = coth 1,
/// stored for 1-d <= j <= N (c) and 0 <= j <= N (c', d).
template <class Real>
struct ExpansionCoeffs {
  int d = 1;
  int N = 1;
  std::map<int, Real> c;
  std::map<int, Real> c_prime;
  std::map<int, Real> d_coef;

  Real c_at(int j) const { return lookup(c, j); }
  Real c_prime_at(int j) const { return lookup(c_prime, j); }
  Real d_at(int j) const { return lookup(d_coef, j); }

 private:
  static Real lookup(const std::map<int, Real>& m, int j) {
    auto it = m.find(j);
    return it == m.end() ? Real(0) : it->second;
  }
};

/// Coefficients obtained by inserting g_m into the binomial series of
/// (1 - u^{-2})^{(d-2)/2}. For even d only c_j, j < 0, survive and the
/// expansion is exact; for odd d the c_j are infinite sums with ratio ~ a^{-2}.
template <class Real>
ExpansionCoeffs<Real> expansion_coeffs(int d, int N) {
  using std::abs;
  using std::log;
  using std::pow;
  detail::check_half_dimension(d);
  if (N < 1) throw invalid_argument("green-kernel", "expansion order N must be >= 1");
  ExpansionCoeffs<Real> out;
  out.d = d;
  out.N = N;
  for (int j = 1 - d; j <= N; ++j) out.c[j] = 0;
  for (int j = 0; j <= N; ++j) out.c_prime[j] = out.d_coef[j] = 0;

  const Real a = split_point_u<Real>();
  const Real eps = working_epsilon<Real>();
  auto signed_binom = [&](int k) {
    const Real bk = detail::half_binomial<Real>(d, k);
    return (k % 2) ? Real(-bk) : bk;
  };

  // m = d - 2 - 2k >= 0: closed-form g_m, pure negative powers times e^{-sa}
  for (int k = 0; d - 2 - 2 * k >= 0; ++k) {
    const int m = d - 2 - 2 * k;
    const Real sb = signed_binom(k);
    Real poch = 1;
    for (int j = 0; j <= m; ++j) {
      out.c[-1 - j] += sb * poch * pow(a, m - j);
      poch *= (m - j);
    }
  }
  if (d % 2 == 0) return out;

  // odd d: m = -n-1 with n = 2k + 1 - d = 0, 2, 4, ...
  const Real log_part = boost::math::constants::euler<Real>() + log(a);
  for (int k = (d - 1) / 2;; ++k) {
    const int n = 2 * k + 1 - d;
    if (n > N) break;
    const Real w = signed_binom(k) / detail::factorial<Real>(n);
    out.d_coef[n] += w;
    out.c_prime[n] += w * log_part;
    Real al = 1, lfact = 1;
    for (int l = 1; n + l <= N; ++l) {
      al *= a;
      lfact *= l;
      const Real term = w * al / (l * lfact);
      out.c_prime[n + l] += (l % 2) ? Real(-term) : term;
    }
  }
  for (int j = 0; j <= N; ++j) {
    Real sum = 0;
    int k = (d - 1) / 2;
    while (2 * k + 1 - d < j + 1) ++k;
    for (int iter = 0; iter < 100000; ++iter, ++k) {
      const int n = 2 * k + 1 - d;
      // (n-1-j)! / n! = 1 / (n (n-1) … (n-j))
      Real ratio = 1;
      for (int i = 0; i <= j; ++i) ratio *= (n - i);
      Real term = signed_binom(k) * pow(a, j - n) / ratio;
      if (j % 2) term = -term;
      sum += term;
      if (abs(term) <= eps * abs(sum)) break;
    }
    out.c[j] = sum;
  }
  return out;
}

/// The coefficient formulas exactly as printed in the source lemma, for
/// comparison against expansion_coeffs and the quadrature oracle. Entries
/// whose printed Pochhammer denominator vanishes are NaN.
template <class Real>
ExpansionCoeffs<Real> printed_expansion_coeffs(int d, int N) {
  using std::abs;
  using std::isnan;
  using std::log;
  using std::pow;
  detail::check_half_dimension(d);
  if (N < 1) throw invalid_argument("green-kernel", "expansion order N must be >= 1");
  ExpansionCoeffs<Real> out;
  out.d = d;
  out.N = N;
  const Real a = split_point_u<Real>();
  const Real eps = working_epsilon<Real>();
  const Real gla1 = boost::math::constants::euler<Real>() + log(a) + 1;
  auto sbin = [&](int k) {
    const Real bk = detail::half_binomial<Real>(d, k);
    return (k % 2) ? Real(-bk) : bk;
  };
  auto floor_div2 = [](int x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); };
  auto ceil_div2 = [&](int x) { return -floor_div2(-x); };

  for (int j = 1 - d; j <= N; ++j) {
    Real cj = 0;
    if (j < 0) {
      for (int k = 0; k <= floor_div2(d - j) - 1; ++k)
        cj += sbin(k) * detail::falling(Real(d - 2 * (k + 1)), j + 1) * pow(a, d - 2 * k - 1 - j);
    } else if (j <= d - 2) {
      for (int k = std::max(0, ceil_div2(d - j - 1) - 1), iter = 0; iter < 100000; ++k, ++iter) {
        const Real sb = sbin(k);
        if (sb == 0) break;  // even d: the binomial series terminates
        const Real den = detail::falling(Real(2 * k + 1 - d), j + 1);
        if (den == 0 || isnan(den)) {
          cj = std::numeric_limits<Real>::quiet_NaN();
          break;
        }
        const Real term = sb * pow(a, d - 2 * k - 1 + j) / den;
        cj += term;
        if (abs(term) <= eps * abs(cj)) break;
      }
    }
    out.c[j] = cj;
  }

  for (int j = 0; j <= N; ++j) {
    Real s = 0;
    for (int k = 1; k <= j; ++k) {
      if (((j - k - d) % 2 + 2) % 2 != 1) continue;
      const int e = (j + k + d - 1) / 2;
      Real ak = pow(a, k) / (detail::factorial<Real>(j - k) * k * detail::factorial<Real>(k));
      const Real term = ((e % 2) ? Real(-ak) : ak) * detail::half_binomial<Real>(d, (j - k + d - 1) / 2);
      s += term;
    }
    out.d_coef[j] = s;
    Real cp = s;
    if (j == 0) {
      cp = (d % 2) ? gla1 : Real(0);
    } else if (((j - d) % 2 + 2) % 2 == 1) {
      const int e = (j + d - 1) / 2;
      const Real t = detail::half_binomial<Real>(d, (j + d - 1) / 2) / detail::factorial<Real>(j) * gla1;
      cp += (e % 2) ? Real(-t) : t;
    }
    out.c_prime[j] = cp;
  }
  return out;
}

/// Truncated expansion of I0 at 0 < s < 1; the remainder is O(s^{N+1} log s).
template <class Real>
Real eval_I0_expansion(const Real& s, int d, const ExpansionCoeffs<Real>& coeffs) {
  using std::exp;
  using std::log;
  detail::check_half_dimension(d);
  if (coeffs.d != d) throw invalid_argument("green-kernel", "coefficient table is for a different d");
  if (!(s > 0) || !(s < 1)) throw invalid_argument("green-kernel", "expansion is valid for 0 < s < 1 only");
  const Real esa = exp(-s * split_point_u<Real>());
  const Real ls = log(s);
  Real sum = 0;
  Real sp = 1;
  for (int j = 0; j < d - 1; ++j) sp /= s;  // s^{1-d}
  for (int j = 1 - d; j <= coeffs.N; ++j) {
    sum += (esa * coeffs.c_at(j) - coeffs.c_prime_at(j)) * sp;
    if (j >= 0) sum -= coeffs.d_at(j) * sp * ls;
    sp *= s;
  }
  return sum;
}

/// D(s) = Σ d_j s^j and D'(s): the coefficient of -log s in I(s). Zero for even d.
template <class Real>
std::pair<Real, Real> log_coefficient(const Real& s, int d) {
  using std::abs;
  detail::check_half_dimension(d);
  if (d % 2 == 0) return {Real(0), Real(0)};
  const Real eps = working_epsilon<Real>();
  Real D = 0, Dp = 0;
  for (int k = (d - 1) / 2; k < 100000; ++k) {
    const int n = 2 * k + 1 - d;
    Real w = detail::half_binomial<Real>(d, k) / detail::factorial<Real>(n);
    if (k % 2) w = -w;
    Real sn = 1;
    for (int i = 0; i < n - 1; ++i) sn *= s;  // s^{n-1}
    const Real dterm = n > 0 ? Real(w * n * sn) : Real(0);
    const Real term = n > 0 ? Real(w * sn * s) : w;
    D += term;
    Dp += dterm;
    if (n > 0 && abs(term) <= eps * abs(D) && abs(dterm) <= eps * (abs(Dp) + eps)) break;
  }
  return {D, Dp};
}

/// Coefficient of s^0 in the log-free part of I(s): c_0 - c'_0 + I_∞(0).
template <class Real>
Real constant_term(int d) {
  const auto co = expansion_coeffs<Real>(d, 1);
  return co.c_at(0) - co.c_prime_at(0) + eval_Iinf(Real(0), d);
}

namespace detail {

inline void check_points(int d, std::span<const cplx> z, std::span<const cplx> zeta) {
  if (static_cast<int>(z.size()) != d || static_cast<int>(zeta.size()) != d)
    throw invalid_argument("green-kernel", "points must have d complex coordinates");
}

inline double green_prefactor(const MagneticSetup& setup) {
  return std::pow(setup.b, setup.d - 1) / std::pow(4 * boost::math::constants::pi<double>(), setup.d);
}

// exp(-i b Σ_j Im(conj(z_j) ζ_j) / 2)
inline cplx green_phase(double b, std::span<const cplx> z, std::span<const cplx> zeta) {
  double w = 0;
  for (std::size_t j = 0; j < z.size(); ++j) w += std::imag(std::conj(z[j]) * zeta[j]);
  const double theta = -0.5 * b * w;
  return {std::cos(theta), std::sin(theta)};
}

inline double separation2(std::span<const cplx> z, std::span<const cplx> zeta) {
  double r2 = 0;
  for (std::size_t j = 0; j < z.size(); ++j) r2 += std::norm(z[j] - zeta[j]);
  return r2;
}

}  // namespace detail

/// G0(z, ζ) on C^d; the diagonal is rejected.
inline cplx green_g0(const MagneticSetup& setup, std::span<const cplx> z, std::span<const cplx> zeta) {
  detail::check_points(setup.d, z, zeta);
  const double r2 = detail::separation2(z, zeta);
  if (r2 == 0) throw invalid_argument("green-kernel", "G0 is singular on the diagonal z = zeta");
  return detail::green_prefactor(setup) * detail::green_phase(setup.b, z, zeta) *
         eval_I(0.5 * 0.5 * setup.b * r2, setup.d);
}

/// d = 1 convenience overload on real coordinates.
inline cplx green_g0(const MagneticSetup& setup, const Vec2& x, const Vec2& y) {
  const cplx z[1] = {cplx(x.x(), x.y())}, w[1] = {cplx(y.x(), y.y())};
  return green_g0(setup, std::span<const cplx>(z), std::span<const cplx>(w));
}

/// ν·(∇_x - i b A0(x)) G0(x, y) for d = 1:
/// (1/4π) e^{-ib x∧y/2} [ (b/2) ν·(x-y) I'(s) - i b ν·A0(x-y) I(s) ], s = b|x-y|²/4.
inline cplx normal_derivative_g0(const MagneticSetup& setup, const Vec2& x, const Vec2& nu, const Vec2& y) {
  if (setup.d != 1) throw invalid_argument("green-kernel", "normal_derivative_g0 requires d = 1");
  const Vec2 r = x - y;
  if (r.squaredNorm() == 0) throw invalid_argument("green-kernel", "normal derivative is singular at x = y");
  const double b = setup.b;
  const double s = 0.25 * b * r.squaredNorm();
  const double c = 1 / (4 * boost::math::constants::pi<double>());
  const cplx i{0, 1};
  return c * magnetic_phase(b, x, y) *
         (0.5 * b * nu.dot(r) * eval_I_derivative(s, 1) - i * b * nu.dot(vector_potential(r)) * eval_I(s, 1));
}

/// Diagonal-singularity expansion of G0 truncated after order N:
/// G0 = phase · b^{d-1}/(4π)^d · [ Σ_{j=1-d}^{N-d} (e^{-sa} c_j - c'_j) s^j
///        - Σ_{j=0}^{N-d} d_j s^j log s + Σ_{k=0}^{N-d} I_∞^{(k)}(0) s^k / k! ] + O(r^{2N-2d+2} |log r|).
struct KernelExpansion {
  MagneticSetup setup;
  int N = 1;
  double leading_constant = 0;  // 1/2π for d = 1, Γ(d-1)/(4π^d) for d > 1
  ExpansionCoeffs<double> coeffs;
  std::vector<double> iinf_taylor;
  int remainder_power = 0;       // the remainder is O(r^remainder_power |log r|)
  bool remainder_has_log = true;  // false when the first dropped log coefficient vanishes

  /// Leading singular term at separation r.
  double leading(double r) const {
    if (setup.d == 1) return leading_constant * std::log(1 / r);
    return leading_constant * std::pow(r, 2 - 2 * setup.d);
  }

  /// Truncated expansion without the phase, at separation r > 0.
  double radial(double r) const {
    if (!(r > 0)) throw invalid_argument("green-kernel", "expansion requires a positive separation");
    const int d = setup.d;
    const double s = 0.25 * setup.b * r * r;
    const double esa = std::exp(-s * split_point_u<double>());
    const double ls = std::log(s);
    double sum = 0, fact = 1;
    for (int j = 1 - d; j <= N - d; ++j) {
      const double sp = std::pow(s, j);
      sum += (esa * coeffs.c_at(j) - coeffs.c_prime_at(j)) * sp;
      if (j >= 0) {
        sum -= coeffs.d_at(j) * sp * ls;
        if (j > 0) fact *= j;
        sum += iinf_taylor[j] * sp / fact;
      }
    }
    return detail::green_prefactor(setup) * sum;
  }

  cplx evaluate(std::span<const cplx> z, std::span<const cplx> zeta) const {
    detail::check_points(setup.d, z, zeta);
    return detail::green_phase(setup.b, z, zeta) * radial(std::sqrt(detail::separation2(z, zeta)));
  }
};

inline KernelExpansion singular_expansion(const MagneticSetup& setup, int N) {
  if (N < setup.d) throw invalid_argument("green-kernel", "singular_expansion needs N >= d");
  KernelExpansion e;
  e.setup = setup;
  e.N = N;
  const double pi = boost::math::constants::pi<double>();
  e.leading_constant = setup.d == 1 ? 1 / (2 * pi) : std::tgamma(setup.d - 1) / (4 * std::pow(pi, setup.d));
  e.coeffs = expansion_coeffs<double>(setup.d, N - setup.d + 1);
  e.iinf_taylor = iinf_derivatives_at_zero<double>(setup.d, N - setup.d);
  e.remainder_power = 2 * N - 2 * setup.d + 2;
  e.remainder_has_log = e.coeffs.d_at(N - setup.d + 1) != 0;
  return e;
}

}  // namespace landau
