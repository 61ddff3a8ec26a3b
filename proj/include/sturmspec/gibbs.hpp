#pragma once

#include "sturmspec/bandtree.hpp"

#include <cstddef>
#include <vector>

namespace sturm {

// Finite-order measure putting mass |B|^beta / b_m on each deepest band,
// where b_m normalizes over the whole generation, aggregated upward so any
// ancestor's mass is the sum over its descendants.
struct GibbsMeasure {
  Real beta;
  std::size_t m = 0;
  // mass[k][i]: measure of band i of generation k, for k = 0..m
  std::vector<std::vector<Real>> mass;
  Real b_m;  // partition sum of |B|^beta over generation m
};

GibbsMeasure build_measure(const BandTree& tree, const Real& beta,
                           std::size_t m);

struct GibbsRatioRow {
  std::size_t k = 0;
  Real min_ratio;
  Real max_ratio;
};

// For each order k <= k_max, the extremes over generation k of
//   rho(B) = mass(B) * (sum over the generation of |.|^beta) / |B|^beta,
// the quantity a Gibbs-type comparison bounds by a constant. Requires
// m >= k_max + 3 so the deepest generation is well separated from k_max.
struct GibbsRatioReport {
  Real beta;
  std::size_t m = 0;
  std::vector<GibbsRatioRow> rows;
};

GibbsRatioReport gibbs_ratio_report(const BandTree& tree, const Real& beta,
                                    std::size_t k_max, std::size_t m);

// Largest two-sided factor between the order-k and order-(k+3) measures on
// any band of order <= k: max over bands of max(ratio, 1/ratio).
Real stability_constant(const BandTree& tree, const Real& beta, std::size_t k);

}  // namespace sturm
