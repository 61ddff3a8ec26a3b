#pragma once

#include "sturmspec/bandtree.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace sturm {

struct PreDimension {
  Real s;
  Real residual;  // |sum len_i^s - 1| at the returned exponent
  // single interval shorter than 1: the exponent equation degenerates to
  // s -> 0+, reported as 0 with this flag raised
  bool degenerate = false;
};

// The exponent s in [0,1] with sum len_i^s = 1. Lengths must all be < 1 and
// sum to at most 1, otherwise the root leaves (0,1] and NotContractive is
// thrown. Certified to |sum - 1| <= 1e-12 with a two-sided bracket.
PreDimension pre_dimension(std::vector<Real> lengths);

struct DimensionBounds {
  Real lower;
  Real upper;
};

// Large-coupling dimension bracket driven by the contraction rates
// t1 = 3/(V-8) and t2 = 1/(4(V+8)) and the quotient growth rate K.
// An infinite K collapses the bracket to (1,1).
DimensionBounds coupling_dimension_bounds(const Real& V, const Real& K);

struct MoranCover {
  std::vector<const Band*> bands;
  // smallest child/parent length ratio inside the cover (1 when the cover
  // consists of roots only); strictly positive by construction
  Real min_ratio;
};

// The antichain of bands first dropping to length <= r (parents stay > r;
// the virtual parent of the roots counts as infinitely long). Throws
// InsufficientDepth when a deepest-order band is still longer than r.
MoranCover moran_cover(const BandTree& tree, const Real& r);

struct DimensionReport {
  std::size_t n0 = 0;                   // first order with every length < 1
  std::map<std::size_t, Real> s_seq;    // order -> pre-dimension
  std::map<std::size_t, Real> residuals;  // order -> root certificate residual
  Real s_low;                           // min over the tail window
  Real s_high;                          // max over the tail window
  std::size_t tail_orders = 0;          // size of that window
  DimensionBounds bounds;
  std::vector<std::pair<Real, std::size_t>> moran_counts;  // (r, cover size)
  std::optional<Real> slope_fit;        // ln count vs ln(1/r), >= 3 scales
  bool degenerate = false;
};

// Pre-dimensions for every admissible order of an enumerated tree plus the
// bracket, tail estimates, and covering counts at geometric scales.
DimensionReport dimension_report(const BandTree& tree);

// The upper box dimension estimate the report supports: the tail maximum.
Real box_dim_estimate(const DimensionReport& report);

}  // namespace sturm
