#pragma once

#include "sturmspec/cfrac.hpp"
#include "sturmspec/real.hpp"

#include <cstddef>
#include <utility>

namespace sturm {

// Coupling and working precision for one run of the band machinery, which
// requires V > 20; construction enforces that and the precision floor.
struct SpectralParams {
  Real V;
  unsigned precision_bits;

  explicit SpectralParams(Real coupling, unsigned bits = 192);
};

// S_p(t) and S'_p(t) for the second-kind-style recurrence
// S_{p+1} = t S_p - S_{p-1} with S_0 = 0, S_1 = 1, extended down to
// S_{-1} = -1 and S_{-2} = -t so trace formulas hold for power -1.
struct ChebyshevEval {
  Real value;
  Real derivative;
};

ChebyshevEval chebyshev(long p, const Real& t);

// Rolling triple of traces at one energy:
//   u = t_{(k,0)} = tr M_{k-1},  v = t_{(k+1,0)} = tr M_k,
//   w = t_{(k,1)} = tr M_{k-1} M_k,
// plus x-derivatives. Everything downstream is a function of this state.
struct TraceState {
  std::size_t k;
  Real x;
  Real u, v, w;
  Real du, dv, dw;
};

// Level-0 state (u,v,w) = (2, x, x - V).
TraceState seed_state(const Real& x, const SpectralParams& params);

// One renormalization step M_{k+1} = M_{k-1} M_k^a realized on traces.
TraceState advance(const TraceState& s, unsigned a);

struct TraceValue {
  Real t;
  Real dt;
};

// t_{(k,p)}(x) and its x-derivative for k >= 0, p >= -1. Power -1 uses the
// unimodular identity tr(AB^{-1}) = tr A tr B - tr(AB), so no matrix inverse
// is ever formed. Throws InvalidLabel for p < -1.
TraceValue trace_at(const ContinuedFraction& cf, const SpectralParams& params,
                    std::size_t k, long p, const Real& x);

// x^2 + y^2 + z^2 - xyz - 4; equals V^2 on trace triples.
Real fricke(const Real& x, const Real& y, const Real& z);

// Root z of the Fricke relation Lambda(x,y,z) = V^2 for |x|,|y| <= 2,
// with first partials; |z| always lands in [V-2, V+2].
struct ZBranch {
  Real z;
  Real z1, z2;  // d/dx, d/dy
};

ZBranch z_branch(const Real& x, const Real& y, const SpectralParams& params,
                 int sign);

// The closed localization window around the l-th zero of S_{p+1} inside
// [-2,2]: the arc 2cos(((l+c)/(p+1))pi), |c| <= 1/10, cut down to where
// |S_{p+1}| <= 1/4. Requires 1 <= l <= p.
std::pair<Real, Real> resolved_window(unsigned p, unsigned l);

}  // namespace sturm
