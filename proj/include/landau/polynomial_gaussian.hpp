#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "landau/core.hpp"
#include "landau/error.hpp"

namespace landau {

/// Exact complex number with rational parts.
struct GaussianRational {
  using rational = boost::multiprecision::cpp_rational;
  rational re{0}, im{0};

  GaussianRational() = default;
  GaussianRational(rational r, rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(int r) : re(r) {}
  /// Exact: every finite double is a dyadic rational.
  explicit GaussianRational(double r) : re(r) {}

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  bool is_zero() const { return re == 0 && im == 0; }
};

inline GaussianRational conj(const GaussianRational& a) { return {a.re, -a.im}; }
inline cplx to_complex(const GaussianRational& a) {
  return {static_cast<double>(a.re), static_cast<double>(a.im)};
}
inline bool is_zero(const GaussianRational& a) { return a.is_zero(); }

inline cplx to_complex(const cplx& a) { return a; }
inline bool is_zero(const cplx& a) { return a == cplx{}; }

namespace detail {
template <class Scalar>
Scalar imaginary_unit() {
  if constexpr (std::is_same_v<Scalar, GaussianRational>) return GaussianRational(0, 1);
  else return Scalar(0, 1);
}
template <class Scalar>
Scalar from_real(double x) {
  if constexpr (std::is_same_v<Scalar, GaussianRational>) return GaussianRational(x);
  else return Scalar(x);
}
}  // namespace detail

/// p(z, z̄) e^{-Ψ}, Ψ = b|z|²/4, stored as its polynomial part.
/// A monomial is keyed by exponents (α_1..α_d, β_1..β_d) of z^α z̄^β.
template <class Scalar>
class PolynomialGaussian {
 public:
  using Exponents = std::vector<int>;

  explicit PolynomialGaussian(int d) : d_(d) {
    if (d < 1) throw invalid_argument("landau-core", "PolynomialGaussian needs d >= 1");
  }

  static PolynomialGaussian constant(int d, Scalar c) {
    PolynomialGaussian p(d);
    p.add_term(Exponents(2 * d, 0), std::move(c));
    return p;
  }

  int dimension() const { return d_; }
  const std::map<Exponents, Scalar>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds c z^α z̄^β; `exponents` holds α followed by β.
  void add_term(const Exponents& exponents, const Scalar& c) {
    if (static_cast<int>(exponents.size()) != 2 * d_)
      throw invalid_argument("landau-core", "monomial exponent vector has wrong length");
    for (int e : exponents)
      if (e < 0) throw invalid_argument("landau-core", "negative monomial exponent");
    if (is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(exponents, c);
    if (!inserted) {
      it->second += c;
      if (is_zero(it->second)) terms_.erase(it);
    }
  }

  PolynomialGaussian& operator+=(const PolynomialGaussian& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  PolynomialGaussian& operator-=(const PolynomialGaussian& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, Scalar(0) - c);
    return *this;
  }
  friend PolynomialGaussian operator+(PolynomialGaussian a, const PolynomialGaussian& b) { return a += b; }
  friend PolynomialGaussian operator-(PolynomialGaussian a, const PolynomialGaussian& b) { return a -= b; }
  friend PolynomialGaussian operator*(const Scalar& s, const PolynomialGaussian& p) {
    PolynomialGaussian r(p.d_);
    for (const auto& [e, c] : p.terms_) r.add_term(e, s * c);
    return r;
  }
  friend bool operator==(const PolynomialGaussian& a, const PolynomialGaussian& b) {
    return a.d_ == b.d_ && a.terms_ == b.terms_;
  }

  /// Value of p(z, z̄) e^{-b|z|²/4} at z ∈ C^d.
  cplx evaluate(double b, std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != d_) throw invalid_argument("landau-core", "point has wrong dimension");
    cplx sum{};
    double r2 = 0;
    for (int j = 0; j < d_; ++j) r2 += std::norm(z[j]);
    for (const auto& [e, c] : terms_) {
      cplx mono = to_complex(c);
      for (int j = 0; j < d_; ++j) mono *= std::pow(z[j], e[j]) * std::pow(std::conj(z[j]), e[d_ + j]);
      sum += mono;
    }
    return sum * std::exp(-0.25 * b * r2);
  }

 private:
  void check_same(const PolynomialGaussian& o) const {
    if (o.d_ != d_) throw invalid_argument("landau-core", "dimension mismatch");
  }

  int d_;
  std::map<Exponents, Scalar> terms_;
};

namespace detail {
inline void check_axis(int d, int j) {
  if (j < 1 || j > d) throw invalid_argument("landau-core", "axis index out of range");
}
}  // namespace detail

// Orientation: with A0 = (-x2, x1)/2 and L = -(∇ - i b A0)², the lowest level
// consists of holomorphic polynomials times e^{-Ψ}, so the annihilation
// operator is Q_j = -2i e^{-Ψ} ∂_{z̄_j} e^{Ψ} and Q̄_j = -2i e^{Ψ} ∂_{z_j} e^{-Ψ}.

/// Q_j: on the polynomial part, p ↦ -2i ∂p/∂z̄_j.
template <class Scalar>
PolynomialGaussian<Scalar> apply_annihilation(const MagneticSetup& setup, int j,
                                              const PolynomialGaussian<Scalar>& f) {
  const int d = f.dimension();
  detail::check_axis(d, j);
  (void)setup;
  const Scalar minus_2i = Scalar(0) - detail::imaginary_unit<Scalar>() * Scalar(2);
  PolynomialGaussian<Scalar> out(d);
  const int beta = d + j - 1;
  for (const auto& [e, c] : f.terms()) {
    if (e[beta] == 0) continue;
    auto e2 = e;
    e2[beta] -= 1;
    out.add_term(e2, minus_2i * Scalar(e[beta]) * c);
  }
  return out;
}

/// Q̄_j: on the polynomial part, p ↦ -2i (∂p/∂z_j - (b/2) z̄_j p).
template <class Scalar>
PolynomialGaussian<Scalar> apply_creation(const MagneticSetup& setup, int j,
                                          const PolynomialGaussian<Scalar>& f) {
  const int d = f.dimension();
  detail::check_axis(d, j);
  const Scalar minus_2i = Scalar(0) - detail::imaginary_unit<Scalar>() * Scalar(2);
  const Scalar half_b = detail::from_real<Scalar>(0.5 * setup.b);
  PolynomialGaussian<Scalar> out(d);
  const int alpha = j - 1, beta = d + j - 1;
  for (const auto& [e, c] : f.terms()) {
    if (e[alpha] > 0) {
      auto e2 = e;
      e2[alpha] -= 1;
      out.add_term(e2, minus_2i * Scalar(e[alpha]) * c);
    }
    auto e3 = e;
    e3[beta] += 1;
    out.add_term(e3, Scalar(0) - minus_2i * half_b * c);
  }
  return out;
}

/// (Σ_j Q̄_j Q_j + b d) f.
template <class Scalar>
PolynomialGaussian<Scalar> apply_landau_hamiltonian(const MagneticSetup& setup,
                                                    const PolynomialGaussian<Scalar>& f) {
  const int d = f.dimension();
  PolynomialGaussian<Scalar> out = detail::from_real<Scalar>(setup.b * d) * f;
  for (int j = 1; j <= d; ++j) out += apply_creation(setup, j, apply_annihilation(setup, j, f));
  return out;
}

/// Exact L² inner product ⟨f, g⟩ = ∫ conj(f) g dx over R^{2d}, returned as the
/// coefficient of π^d. Uses ∫_C z^m z̄^n e^{-b|z|²/2} dA = δ_{mn} π m! (2/b)^{m+1}.
inline GaussianRational inner_product_over_pi_d(const MagneticSetup& setup,
                                                const PolynomialGaussian<GaussianRational>& f,
                                                const PolynomialGaussian<GaussianRational>& g) {
  const int d = f.dimension();
  if (g.dimension() != d) throw invalid_argument("landau-core", "dimension mismatch");
  using rational = GaussianRational::rational;
  const rational two_over_b = rational(2) / rational(setup.b);
  GaussianRational total;
  for (const auto& [ef, cf] : f.terms()) {
    for (const auto& [eg, cg] : g.terms()) {
      rational moment = 1;
      for (int j = 0; j < d && moment != 0; ++j) {
        const int m = ef[d + j] + eg[j];  // power of z
        const int n = ef[j] + eg[d + j];  // power of z̄
        if (m != n) {
          moment = 0;
          break;
        }
        rational fact = 1;
        for (int k = 2; k <= m; ++k) fact *= k;
        rational pw = 1;
        for (int k = 0; k <= m; ++k) pw *= two_over_b;
        moment *= fact * pw;
      }
      if (moment != 0) total += conj(cf) * cg * GaussianRational(moment);
    }
  }
  return total;
}

}  // namespace landau
