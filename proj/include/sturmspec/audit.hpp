#pragma once

#include "sturmspec/bandtree.hpp"
#include "sturmspec/ladder.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sturm {

// Outcome of one numbered check. Hard checks compare a measured extreme
// against an explicit bound; soft checks watch a non-constructive constant
// for stability across depths (growth below 5% per added order).
struct AuditReport {
  int id = 0;
  std::string name;
  bool hard = false;
  bool pass = false;
  bool insufficient = false;  // not enough depth/data to evaluate
  std::size_t population = 0;
  Real extreme;
  std::string extreme_label;
  Real bound;
  bool has_bound = false;
  std::string worst;
  std::string note;
};

struct AuditOptions {
  std::vector<int> selection;  // check ids 1..12; empty selects all
  unsigned threads = 1;
  std::uint64_t seed = 0;
  Real beta;                   // measure exponent for check 12
  bool beta_set = false;       // unset: fall back to the tail pre-dimension
};

// The numbered checks:
//   1 fricke_invariant     (hard)  conserved quantity on trace triples
//   2 triple_disjoint      (hard)  no energy lies in all three trace sets
//   3 covering_chain       (hard)  next power's set inside the union
//   4 bounded_variation    (soft)  derivative ratio inside one band
//   5 bounded_distortion   (soft)  |h'| * |B| two-sided
//   6 bounded_covariation  (soft)  length-ratio comparison across siblings
//   7 derivative_ratio     (hard)  per-step derivative growth bracket
//   8 index_localization   (hard)  trace values stay in their window
//   9 window_bounds        (hard)  four polynomial bounds on windows
//  10 contraction          (hard)  geometric decay of value spread
//  11 count_recursion      (hard)  exact population counts
//  12 measure_ratios       (soft)  measure comparison stability
std::vector<AuditReport> run_suite(const BandTree& tree,
                                   const AuditOptions& opt);

bool is_hard_check(int id);

// True when every hard check in the list passed (insufficient data on a
// hard check counts as a failure).
bool all_hard_pass(const std::vector<AuditReport>& reports);

}  // namespace sturm
