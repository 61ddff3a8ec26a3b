#include "sturmspec/real.hpp"

#include "sturmspec/errors.hpp"

#include <mpfr.h>

#include <cmath>
#include <ios>

namespace sturm {

unsigned set_precision_bits(unsigned bits) {
  // log10(2); digits round up so the implied bit count is at least `bits`
  const double d = std::ceil(static_cast<double>(bits) * 0.30102999566398120);
  const unsigned digits = static_cast<unsigned>(d);
  Real::default_precision(digits);
  return digits;
}

unsigned precision_bits() {
  Real probe{0};
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

unsigned precision_digits() {
  return static_cast<unsigned>(Real::default_precision());
}

unsigned serial_digits() { return precision_digits() + 3; }

Real precision_floor(unsigned guard_digits) {
  const unsigned digits = precision_digits();
  const unsigned drop = digits > guard_digits + 1 ? digits - guard_digits : 1;
  return Real("1e-" + std::to_string(drop));
}

Real real_pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

std::string to_serial(const Real& x) {
  return x.str(serial_digits(), std::ios_base::scientific);
}

Real real_from_serial(const std::string& s) {
  try {
    return Real(s);
  } catch (const std::exception&) {
    throw Error(errc::invalid_config, "not a decimal number: '" + s + "'");
  }
}

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_digits_(precision_digits()) {
  set_precision_bits(bits);
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_digits_); }

}  // namespace sturm
