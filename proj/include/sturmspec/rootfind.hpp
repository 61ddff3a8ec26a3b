#pragma once

#include "sturmspec/errors.hpp"
#include "sturmspec/real.hpp"

#include <utility>

namespace sturm {

// Bisection on a sign change of f over [lo, hi]. Returns the bracket
// midpoint once the bracket is narrower than stop_width; an exact zero is
// returned immediately. Throws BracketFailure when the endpoints do not
// straddle a sign change and PrecisionExhausted when the bracket stops
// shrinking (or the iteration cap trips) above stop_width.
template <class F>
Real bisect(F&& f, Real lo, Real hi, const Real& stop_width, int max_iter = 600) {
  Real flo = f(lo);
  if (flo == 0) return lo;
  Real fhi = f(hi);
  if (fhi == 0) return hi;
  const bool lo_pos = flo > 0;
  if (lo_pos == (fhi > 0))
    throw Error(errc::bracket_failure, "bisect: endpoints have equal sign");
  for (int it = 0; it < max_iter; ++it) {
    Real mid = lo + (hi - lo) / 2;
    if (hi - lo <= stop_width) return mid;
    if (mid <= lo || mid >= hi)
      throw Error(errc::precision_exhausted,
                  "bisect: bracket below representable spacing");
    Real fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == lo_pos)
      lo = std::move(mid);
    else
      hi = std::move(mid);
  }
  throw Error(errc::precision_exhausted, "bisect: iteration cap reached");
}

}  // namespace sturm
