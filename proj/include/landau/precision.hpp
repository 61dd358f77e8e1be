#pragma once

#include <cmath>
#include <mutex>
#include <sstream>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

namespace landau {

/// Variable-precision binary float used wherever double runs out of range or digits.
using mp_real = boost::multiprecision::mpfr_float;

namespace detail {
inline std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace detail

inline unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398119521));
}

/// Sets the working precision of newly created mp_real values for the
/// lifetime of the scope. The mpfr default is process-global, so scopes are
/// serialized across threads.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits)
      : lock_(detail::precision_mutex()), saved_(mp_real::default_precision()) {
    mp_real::default_precision(bits_to_digits10(bits));
  }
  ~PrecisionScope() { mp_real::default_precision(saved_); }

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_;
};

/// Decimal rendering with `digits` significant digits, scientific notation.
inline std::string to_decimal_string(const mp_real& x, unsigned digits) {
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

inline std::string to_decimal_string(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace landau
