#include <doctest.h>

#include <sturmspec/bandtree.hpp>
#include <sturmspec/dimension.hpp>
#include <sturmspec/errors.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

using sturm::Band;
using sturm::BandTree;
using sturm::ContinuedFraction;
using sturm::Real;
using sturm::SpectralParams;

namespace {

BandTree& golden10() {
  static BandTree tree(ContinuedFraction::parse("per:1"),
                       SpectralParams(Real(24), 192));
  if (tree.empty()) tree.enumerate(10, 4);
  return tree;
}

// plain high-precision power sum, smallest terms first
Real power_sum(std::vector<Real> lengths, const Real& s) {
  sturm::PrecisionGuard g(512);
  std::sort(lengths.begin(), lengths.end());
  Real acc(0);
  for (const Real& len : lengths) acc += pow(len, s);
  return acc;
}

std::vector<Real> generation_lengths(const BandTree& tree, std::size_t k) {
  std::vector<Real> out;
  for (const Band& b : tree.generation(k)) out.push_back(b.length());
  return out;
}

}  // namespace

TEST_SUITE("dimension") {
  TEST_CASE("closed-form exponents come out exactly") {
    const Real half = Real(1) / 2;
    const auto two_halves = sturm::pre_dimension({half, half});
    CHECK(abs(two_halves.s - 1) < Real("1e-25"));
    CHECK(two_halves.residual <= Real("1e-12"));
    CHECK(!two_halves.degenerate);

    const auto two_quarters =
        sturm::pre_dimension({Real(1) / 4, Real(1) / 4});
    CHECK(abs(two_quarters.s - half) < Real("1e-25"));

    const auto three_ninths =
        sturm::pre_dimension({Real(1) / 9, Real(1) / 9, Real(1) / 9});
    CHECK(abs(three_ninths.s - half) < Real("1e-25"));
  }

  TEST_CASE("a single short interval degenerates to zero") {
    const auto r = sturm::pre_dimension({Real("0.3")});
    CHECK(r.degenerate);
    CHECK(r.s == 0);
  }

  TEST_CASE("invalid families are rejected") {
    const auto code_of = [](std::vector<Real> lens) {
      try {
        sturm::pre_dimension(std::move(lens));
      } catch (const sturm::Error& e) {
        return e.code();
      }
      return sturm::errc::io_failure;  // marker: nothing was thrown
    };
    CHECK(code_of({Real("0.6"), Real("0.5")}) == sturm::errc::not_contractive);
    CHECK(code_of({Real("1.2"), Real("0.1")}) == sturm::errc::not_contractive);
    CHECK(code_of({Real("0.5"), Real(0)}) == sturm::errc::domain_violation);
    CHECK(code_of({}) == sturm::errc::domain_violation);
  }

  TEST_CASE("pre-dimensions of the golden hierarchy are pinned") {
    const auto rep = sturm::dimension_report(golden10());
    const std::vector<std::string> frozen{
        "0.65885373442896946", "0.45612588915434422", "0.38266770510047613",
        "0.34457570882543104", "0.32523030767576042", "0.31015943197114433",
        "0.30090401876236049", "0.29304302751710079", "0.28753341528328715"};
    REQUIRE(rep.s_seq.size() == frozen.size());
    for (std::size_t n = 2; n <= 10; ++n) {
      REQUIRE(rep.s_seq.count(n) == 1);
      CHECK(abs(rep.s_seq.at(n) - Real(frozen[n - 2])) < Real("1e-15"));
    }
    for (std::size_t n = 3; n <= 10; ++n)
      CHECK(rep.s_seq.at(n) < rep.s_seq.at(n - 1));
  }

  TEST_CASE("every root certificate holds up independently") {
    const auto rep = sturm::dimension_report(golden10());
    for (const auto& [n, s] : rep.s_seq) {
      CHECK(rep.residuals.at(n) <= Real("1e-12"));
      const Real direct = power_sum(generation_lengths(golden10(), n), s);
      CHECK(abs(direct - 1) <= Real("2e-12"));
      // two-sided monotone bracket around the root
      CHECK(power_sum(generation_lengths(golden10(), n), s - Real("1e-9")) > 1);
      CHECK(power_sum(generation_lengths(golden10(), n), s + Real("1e-9")) < 1);
    }
  }

  TEST_CASE("report fields are internally consistent") {
    const auto rep = sturm::dimension_report(golden10());
    CHECK(rep.n0 == 2);
    CHECK(rep.tail_orders == 5);
    CHECK(rep.s_low == rep.s_seq.at(10));
    CHECK(rep.s_high == rep.s_seq.at(6));
    CHECK(!rep.degenerate);
    CHECK(sturm::box_dim_estimate(rep) == rep.s_high);
    CHECK(rep.bounds.lower < rep.s_low);
    CHECK(rep.s_high < rep.bounds.upper);
  }

  TEST_CASE("coupling bracket has its literal closed form") {
    using boost::multiprecision::log;
    const auto b = sturm::coupling_dimension_bounds(Real(24), Real(1));
    // flat-growth branch: ln 2 / (10 ln 2 - 3 ln(1/128)) = 1/31
    CHECK(abs(b.lower - Real(1) / 31) < Real("1e-45"));
    CHECK(abs(b.upper - log(Real(3)) / log(Real(16) / 3)) < Real("1e-45"));
    CHECK(b.lower < b.upper);
    // stronger coupling tightens the upper end
    CHECK(sturm::coupling_dimension_bounds(Real(100), Real(1)).upper < b.upper);
  }

  TEST_CASE("infinite quotient growth collapses the bracket") {
    const Real inf = std::numeric_limits<Real>::infinity();
    const auto b = sturm::coupling_dimension_bounds(Real(24), inf);
    CHECK(b.lower == 1);
    CHECK(b.upper == 1);
  }

  TEST_CASE("bracket inputs are validated") {
    const auto code_of = [](const Real& v, const Real& k) {
      try {
        sturm::coupling_dimension_bounds(v, k);
      } catch (const sturm::Error& e) {
        return e.code();
      }
      return sturm::errc::io_failure;  // marker: nothing was thrown
    };
    CHECK(code_of(Real(20), Real(1)) == sturm::errc::coupling_too_small);
    CHECK(code_of(Real(24), Real("0.5")) == sturm::errc::domain_violation);
  }

  TEST_CASE("covering counts walk the frozen staircase") {
    const auto rep = sturm::dimension_report(golden10());
    const std::vector<std::size_t> counts{2,  4,  4,  4,  4,  6,  10, 10, 10,
                                          10, 12, 16, 24, 24, 26, 34, 42, 58,
                                          58, 60, 68, 92, 108, 142, 152, 170};
    REQUIRE(rep.moran_counts.size() == counts.size());
    Real r(4);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      CHECK(rep.moran_counts[i].first == r);
      CHECK(rep.moran_counts[i].second == counts[i]);
      r /= 2;
    }
    REQUIRE(rep.slope_fit.has_value());
    CHECK(abs(*rep.slope_fit - Real("0.2452290028344425323562489882")) <
          Real("1e-25"));
  }

  TEST_CASE("covers are antichains of first-crossing bands") {
    const auto cover = sturm::moran_cover(golden10(), Real("0.01"));
    REQUIRE(!cover.bands.empty());
    CHECK(cover.min_ratio > 0);
    CHECK(cover.min_ratio <= 1);
    for (const Band* b : cover.bands) {
      CHECK(b->length() <= Real("0.01"));
      if (b->order > 0)
        CHECK(golden10().parent_of(*b).length() > Real("0.01"));
    }
    for (const Band* a : cover.bands)
      for (const Band* b : cover.bands) {
        if (a == b) continue;
        // no band is an ancestor of another: paths never nest
        const bool prefix = b->path.size() > a->path.size() &&
                            b->path.compare(0, a->path.size(), a->path) == 0 &&
                            b->path[a->path.size()] == '.';
        CHECK(!prefix);
      }
  }

  TEST_CASE("covering scale limits are enforced") {
    const auto code_of = [](const Real& r) {
      try {
        sturm::moran_cover(golden10(), r);
      } catch (const sturm::Error& e) {
        return e.code();
      }
      return sturm::errc::io_failure;  // marker: nothing was thrown
    };
    CHECK(code_of(Real(0)) == sturm::errc::domain_violation);
    CHECK(code_of(Real("1e-40")) == sturm::errc::insufficient_depth);
  }
}
