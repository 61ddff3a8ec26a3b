#pragma once

#include "sturmspec/cfrac.hpp"
#include "sturmspec/tracemap.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace sturm {

enum class BandKind { I, II, III };

inline const char* band_kind_name(BandKind k) noexcept {
  switch (k) {
    case BandKind::I: return "I";
    case BandKind::II: return "II";
    case BandKind::III: return "III";
  }
  return "?";
}

struct Interval {
  Real lo, hi;
};

// One spectral generating band: the generating trace t_{(level,power)} is
// strictly monotone on [lo,hi] with image exactly [-2,2].
struct Band {
  long order = 0;  // -1 only for the virtual bookkeeping root
  BandKind kind = BandKind::I;
  std::size_t level = 0;  // generating label (level, power)
  long power = 0;
  Real lo, hi;
  unsigned index_l = 0;  // window slot inside the parent; 0 for II children
  std::string path;
  long parent = -1;  // index into the previous generation; -1 for roots
  // For the II child of a I parent with quotient a > 2: the intermediate
  // power-step intervals (levels (level-2, p), p = 2..a-1), in p order.
  std::vector<Interval> insert_chain;

  Real length() const { return hi - lo; }
  Real midpoint() const { return lo + (hi - lo) / 2; }
};

// Child slot derived from the parent type and the next quotient.
struct ChildSlot {
  BandKind kind;
  unsigned family_p;  // window family; 0 for the II child of a I parent
  unsigned l;         // 1..family_p; 0 for II
  std::size_t level;  // child generating label
  long power;
};

// Typed generations of spectral generating bands, enumerated root-down with
// exact monotone-trace endpoints.
class BandTree {
 public:
  BandTree(ContinuedFraction cf, SpectralParams params,
           Real bisect_rel_tol = Real("1e-30"));

  // Builds generations 0..n_max; extends an already enumerated tree.
  void enumerate(std::size_t n_max, unsigned threads = 1);

  bool empty() const { return gens_.empty(); }
  std::size_t depth() const;
  const std::vector<Band>& generation(std::size_t k) const;

  const Band& parent_of(const Band& b) const;  // virtual root above order 0
  static const Band& virtual_root();

  // Children of band i in generation k occupy [first, second) of k+1.
  std::pair<std::size_t, std::size_t> child_range(std::size_t k,
                                                  std::size_t i) const;

  std::vector<ChildSlot> child_plan(const Band& parent) const;
  Band locate_child(const Band& parent, const ChildSlot& slot) const;

  struct Counts {
    unsigned long long n_I = 0, n_II = 0, n_III = 0;
    unsigned long long total() const { return n_I + n_II + n_III; }
    bool operator==(const Counts& o) const {
      return n_I == o.n_I && n_II == o.n_II && n_III == o.n_III;
    }
  };
  Counts counts(std::size_t k) const;

  // Exact type-count recursion driven by the quotients alone.
  static std::vector<Counts> predicted_counts(const ContinuedFraction& cf,
                                              std::size_t n_max);

  const ContinuedFraction& cf() const { return cf_; }
  const SpectralParams& params() const { return params_; }
  const Real& bisect_rel_tol() const { return rel_tol_; }

  TraceValue band_trace(const Band& b, const Real& x) const;
  TraceValue label_trace(std::size_t level, long power, const Real& x) const;

  // Cached resolved window I_{p,l}; valid for 1 <= p <= max_quotient()+1.
  const std::pair<Real, Real>& window(unsigned p, unsigned l) const;

  const Band* find_by_path(const std::string& path) const;

  // Appends one generation restored from a dump (order must follow on from
  // the current depth); paths and endpoints are trusted as previously
  // produced by this code at the same configuration.
  void restore_generation(std::vector<Band> bands);

 private:
  std::vector<Band> make_roots() const;
  Band locate_by_window(const Band& parent, const ChildSlot& slot) const;
  Band copy_child(const Band& parent, const ChildSlot& slot) const;
  Band chain_child(const Band& parent, const ChildSlot& slot, unsigned a) const;
  Interval window_step(const Interval& iv, std::size_t h_level, long h_power,
                       unsigned family_p, unsigned l, std::size_t g_level,
                       long g_power) const;
  Real stop_width(const Real& parent_len) const;
  void verify_band(const Band& b) const;
  void rebuild_offsets(std::size_t k);

  ContinuedFraction cf_;
  SpectralParams params_;
  Real rel_tol_;
  std::vector<std::vector<Band>> gens_;
  std::vector<std::vector<std::size_t>> child_offsets_;
  std::vector<std::vector<std::pair<Real, Real>>> windows_;
};

}  // namespace sturm
