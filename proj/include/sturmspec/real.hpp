#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace sturm {

// All numeric work runs on mpfr floats with a per-thread default precision.
// Expression templates are off so Real behaves like a plain value type.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

using BigInt = boost::multiprecision::cpp_int;

// Precision is requested in bits but mpfr's runtime knob is decimal digits;
// the conversion rounds up so the mantissa never falls short of the request.
// Returns the digits10 value actually applied to the calling thread.
unsigned set_precision_bits(unsigned bits);

// Mantissa bits a freshly constructed Real carries on this thread.
unsigned precision_bits();

// Current per-thread decimal precision (digits10).
unsigned precision_digits();

// Significant digits used for serialization: digits10 + 3 guarantees that
// parsing the decimal string back reproduces the identical mantissa.
unsigned serial_digits();

// 10^{-(digits10 - guard_digits)}: absolute tolerance floor tied to the
// working precision, used as the hard stop for bisections.
Real precision_floor(unsigned guard_digits);

// pi at the current thread precision.
Real real_pi();

// Scientific-notation decimal string at serial_digits() significant digits.
std::string to_serial(const Real& x);

// Parse at the current thread precision. Throws InvalidConfig on garbage.
Real real_from_serial(const std::string& s);

// Restores the calling thread's precision on scope exit; used by oracles
// that temporarily need a much longer mantissa.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits_;
};

}  // namespace sturm
