#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <charconv>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

namespace qtrace {

// Variable-precision MPFR real; precision is taken from the thread default at
// construction time, so build every value of a computation inside one scope.
using Extended = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

template <class R>
using Cplx = std::complex<R>;
using cdouble = std::complex<double>;

template <class R>
inline constexpr bool is_extended_v = std::is_same_v<R, Extended>;

// Doubles are routed through their shortest decimal form, so 0.3 becomes the
// extended value nearest to 3/10 rather than the binary64 neighbour.
template <class R>
R from_double(double x) {
  if constexpr (std::is_floating_point_v<R>) {
    return R(x);
  } else {
    if (!std::isfinite(x)) return R(x);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return R(std::string(buf, res.ptr));
  }
}

template <class R>
Cplx<R> from_double(cdouble z) {
  return {from_double<R>(z.real()), from_double<R>(z.imag())};
}

template <class R>
double to_double(const R& x) {
  if constexpr (std::is_floating_point_v<R>) {
    return double(x);
  } else {
    return x.template convert_to<double>();
  }
}

template <class R>
cdouble to_cdouble(const Cplx<R>& z) {
  return {to_double(z.real()), to_double(z.imag())};
}

template <class R>
R pi_v() {
  using std::acos;
  return acos(R(-1));
}

// RAII guard for the Extended default precision (decimal digits).
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits10) : saved_(Extended::default_precision()) {
    Extended::default_precision(digits10);
  }
  ~PrecisionScope() { Extended::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

}  // namespace qtrace
