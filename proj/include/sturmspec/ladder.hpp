#pragma once

#include "sturmspec/bandtree.hpp"

#include <cstddef>
#include <vector>

namespace sturm {

// One step of the nested chain of intervals running from a root band down to
// a chosen deepest band, after the two structural adjustments:
//   * a copy produced by a quotient-1 renormalization is removed (its
//     predecessor stands in for it),
//   * a quotient a >= 3 on a type-I step interposes the power-2..a-1
//     intervals so every remaining step contracts.
struct Rung {
  std::size_t level = 0;  // trace label (level, power)
  long power = 0;
  Real lo, hi;
  BandKind kind = BandKind::I;
  bool inserted = false;   // interposed power step, not a band of the hierarchy
  bool acting_next = false;  // successor copy removed; rung doubles as it
  long order = 0;
  unsigned index_l = 0;
  std::string path;
};

// The full modified chain for one deepest band, with the step exponents p_i
// and window indices l_i that drive the three-term step identity
//   h_{i+1} = z(h_i, h_{i-1}) S_{p_i+1}(h_i) - h_{i-1} S_{p_i}(h_i),
// closed at the top by the constant h_{-1} = 2.
class Ladder {
 public:
  Ladder(const BandTree& tree, std::size_t leaf_index);

  std::size_t rungs() const { return rungs_.size(); }
  const Rung& rung(std::size_t i) const;

  // Step exponents, one per edge (size rungs() - 1).
  const std::vector<long>& p_seq() const { return p_; }

  // Window indices recovered from the values the predecessor trace takes on
  // the deepest band; matches expected_l on every step (0 = unmatched).
  const std::vector<unsigned>& l_seq() const { return l_; }

  // Window index the located step used: 1 on the power hops whose window is
  // the central one, the successor's own index otherwise.
  unsigned expected_l(std::size_t edge) const;

  const Band& leaf() const;
  const BandTree& tree() const { return *tree_; }

  // Trace value and derivative of rung i at energy x.
  TraceValue value(std::size_t i, const Real& x) const;

  // Relative residual of the three-term step identity at edge i, taking the
  // better of the two branch roots. Small residual certifies the exponent.
  Real step_residual(std::size_t i, const Real& x) const;

 private:
  unsigned match_l(std::size_t i, const Real& x) const;

  const BandTree* tree_;
  std::size_t leaf_index_;
  std::vector<Rung> rungs_;
  std::vector<long> p_;
  std::vector<unsigned> l_;
};

// Ladders for every band in the deepest enumerated generation, built once
// and shared read-only by the audit passes.
std::vector<Ladder> build_ladders(const BandTree& tree, unsigned threads);

}  // namespace sturm
