#include "sturmspec/tracemap.hpp"

#include "sturmspec/errors.hpp"
#include "sturmspec/rootfind.hpp"

#include <string>
#include <utility>

namespace sturm {

SpectralParams::SpectralParams(Real coupling, unsigned bits)
    : V(std::move(coupling)), precision_bits(bits) {
  if (!(V > 20))
    throw Error(errc::coupling_too_small,
                "band machinery needs coupling V > 20, got " + V.str(8));
  if (bits < 64)
    throw Error(errc::invalid_config, "precision must be at least 64 bits");
}

ChebyshevEval chebyshev(long p, const Real& t) {
  switch (p) {
    case -2: return {-t, Real(-1)};
    case -1: return {Real(-1), Real(0)};
    case 0: return {Real(0), Real(0)};
    case 1: return {Real(1), Real(0)};
    default: break;
  }
  if (p < -2)
    throw Error(errc::invalid_label, "Chebyshev order below -2");
  Real s_prev = 0, s_cur = 1;    // S_0, S_1
  Real d_prev = 0, d_cur = 0;
  for (long j = 1; j < p; ++j) {
    Real s_next = t * s_cur - s_prev;
    Real d_next = s_cur + t * d_cur - d_prev;
    s_prev = std::move(s_cur);
    s_cur = std::move(s_next);
    d_prev = std::move(d_cur);
    d_cur = std::move(d_next);
  }
  return {std::move(s_cur), std::move(d_cur)};
}

TraceState seed_state(const Real& x, const SpectralParams& params) {
  TraceState s;
  s.k = 0;
  s.x = x;
  s.u = 2;
  s.v = x;
  s.w = x - params.V;
  s.du = 0;
  s.dv = 1;
  s.dw = 1;
  return s;
}

TraceState advance(const TraceState& s, unsigned a) {
  if (a == 0)
    throw Error(errc::invalid_quotient, "renormalization step needs a >= 1");
  // one recurrence pass yields S_a, S_{a+1} at t = v; S_{a-1} falls out of
  // the recurrence run backwards
  Real s_prev = 0, s_cur = 1;
  Real d_prev = 0, d_cur = 0;
  for (unsigned j = 1; j <= a; ++j) {
    Real s_next = s.v * s_cur - s_prev;
    Real d_next = s_cur + s.v * d_cur - d_prev;
    s_prev = std::move(s_cur);
    s_cur = std::move(s_next);
    d_prev = std::move(d_cur);
    d_cur = std::move(d_next);
  }
  const Real& S_a = s_prev;
  const Real& S_a1 = s_cur;
  const Real& dS_a = d_prev;
  const Real& dS_a1 = d_cur;
  Real S_am1 = s.v * S_a - S_a1;
  Real dS_am1 = S_a + s.v * dS_a - dS_a1;

  TraceState n;
  n.k = s.k + 1;
  n.x = s.x;
  n.u = s.v;
  n.du = s.dv;
  n.v = s.w * S_a - s.u * S_am1;
  n.dv = s.dw * S_a + s.w * dS_a * s.dv - s.du * S_am1 - s.u * dS_am1 * s.dv;
  n.w = s.w * S_a1 - s.u * S_a;
  n.dw = s.dw * S_a1 + s.w * dS_a1 * s.dv - s.du * S_a - s.u * dS_a * s.dv;
  return n;
}

TraceValue trace_at(const ContinuedFraction& cf, const SpectralParams& params,
                    std::size_t k, long p, const Real& x) {
  if (p < -1)
    throw Error(errc::invalid_label,
                "trace label power " + std::to_string(p) + " below -1");
  TraceState s = seed_state(x, params);
  for (std::size_t j = 1; j <= k; ++j) s = advance(s, cf.quotient(j));
  // t_{(k,p)} = w S_p(v) - u S_{p-1}(v) holds for every p >= -1 with the
  // extended seeds S_{-1} = -1, S_{-2} = -t
  const ChebyshevEval hi = chebyshev(p, s.v);
  const ChebyshevEval lo = chebyshev(p - 1, s.v);
  TraceValue out;
  out.t = s.w * hi.value - s.u * lo.value;
  out.dt = s.dw * hi.value + s.w * hi.derivative * s.dv - s.du * lo.value -
           s.u * lo.derivative * s.dv;
  return out;
}

Real fricke(const Real& x, const Real& y, const Real& z) {
  return x * x + y * y + z * z - x * y * z - 4;
}

ZBranch z_branch(const Real& x, const Real& y, const SpectralParams& params,
                 int sign) {
  if (sign != 1 && sign != -1)
    throw Error(errc::domain_violation, "z branch sign must be +1 or -1");
  if (abs(x) > 2 || abs(y) > 2)
    throw Error(errc::domain_violation,
                "z branch arguments must lie in [-2,2]");
  const Real fx = 4 - x * x;
  const Real fy = 4 - y * y;
  const Real disc = 4 * params.V * params.V + fx * fy;
  const Real root = sqrt(disc);
  ZBranch out;
  out.z = (x * y + sign * root) / 2;
  out.z1 = y / 2 + sign * (-x * fy) / (2 * root);
  out.z2 = x / 2 + sign * (-y * fx) / (2 * root);
  return out;
}

std::pair<Real, Real> resolved_window(unsigned p, unsigned l) {
  if (l < 1 || l > p)
    throw Error(errc::domain_violation, "window index l must satisfy 1 <= l <= p");
  const Real pi = real_pi();
  const Real denom = Real(p) + 1;
  const Real tenth = Real(1) / 10;
  // 2cos is decreasing, so the +1/10 arm is the lower energy bound
  const Real arc_lo = 2 * cos((Real(l) + tenth) * pi / denom);
  const Real arc_hi = 2 * cos((Real(l) - tenth) * pi / denom);
  const Real center = 2 * cos(Real(l) * pi / denom);
  // |S_{p+1}| is at least sin(pi/10) > 1/4 at the arc ends and 0 at the
  // center, so each side holds exactly one crossing of 1/4
  auto gap = [&](const Real& t) {
    return abs(chebyshev(static_cast<long>(p) + 1, t).value) - Real(1) / 4;
  };
  const Real stop = precision_floor(12);
  Real lo = bisect(gap, arc_lo, center, stop);
  Real hi = bisect(gap, center, arc_hi, stop);
  return {std::move(lo), std::move(hi)};
}

}  // namespace sturm
