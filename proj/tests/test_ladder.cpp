#include <doctest.h>

#include <sturmspec/bandtree.hpp>
#include <sturmspec/errors.hpp>
#include <sturmspec/ladder.hpp>

#include "oracles.hpp"

#include <vector>

using sturm::Band;
using sturm::BandKind;
using sturm::BandTree;
using sturm::ContinuedFraction;
using sturm::Ladder;
using sturm::Real;
using sturm::SpectralParams;

namespace {

BandTree& golden6() {
  static BandTree tree(ContinuedFraction::parse("per:1"),
                       SpectralParams(Real(24), 192));
  if (tree.empty()) tree.enumerate(6, 4);
  return tree;
}

BandTree& triple5() {
  static BandTree tree(ContinuedFraction::parse("per:3"),
                       SpectralParams(Real(24), 192));
  if (tree.empty()) tree.enumerate(5, 4);
  return tree;
}

}  // namespace

TEST_SUITE("ladder") {
  TEST_CASE("one ladder per deepest band") {
    const auto ladders = sturm::build_ladders(golden6(), 2);
    CHECK(ladders.size() == golden6().generation(6).size());
    for (std::size_t i = 0; i < ladders.size(); ++i) {
      CHECK(ladders[i].leaf().path == golden6().generation(6)[i].path);
      CHECK(&ladders[i].tree() == &golden6());
    }
  }

  TEST_CASE("rungs nest and agree with the band hierarchy") {
    for (BandTree* tp : {&golden6(), &triple5()}) {
      const BandTree& tree = *tp;
      const auto ladders = sturm::build_ladders(tree, 2);
      for (const Ladder& lad : ladders) {
        REQUIRE(lad.rungs() >= 2);
        CHECK(lad.p_seq().size() == lad.rungs() - 1);
        CHECK(lad.l_seq().size() == lad.rungs() - 1);
        CHECK(lad.rung(0).order == 0);
        for (std::size_t i = 0; i + 1 < lad.rungs(); ++i) {
          const auto& outer = lad.rung(i);
          const auto& inner = lad.rung(i + 1);
          CHECK(inner.lo >= outer.lo);
          CHECK(inner.hi <= outer.hi);
          // every surviving step contracts strictly
          CHECK(inner.hi - inner.lo < outer.hi - outer.lo);
        }
        // non-inserted rungs are bands of the hierarchy at their own path
        for (std::size_t i = 0; i < lad.rungs(); ++i) {
          const auto& r = lad.rung(i);
          if (r.inserted) continue;
          const Band* b = tree.find_by_path(r.path);
          REQUIRE(b != nullptr);
          CHECK(b->lo == r.lo);
          CHECK(b->hi == r.hi);
          CHECK(b->level == r.level);
          CHECK(b->power == r.power);
        }
      }
    }
  }

  TEST_CASE("quotient-1 copies are removed, large quotients insert steps") {
    const auto g = sturm::build_ladders(golden6(), 2);
    bool acting = false;
    for (const Ladder& lad : g)
      for (std::size_t i = 0; i < lad.rungs(); ++i) {
        CHECK(!lad.rung(i).inserted);  // no quotient exceeds 2
        if (lad.rung(i).acting_next) acting = true;
      }
    CHECK(acting);

    const auto t = sturm::build_ladders(triple5(), 2);
    bool inserted = false;
    for (const Ladder& lad : t)
      for (std::size_t i = 0; i < lad.rungs(); ++i)
        if (lad.rung(i).inserted) {
          inserted = true;
          // interposed intervals are power steps, not bands
          CHECK(lad.tree().find_by_path(lad.rung(i).path) == nullptr);
        }
    CHECK(inserted);
  }

  TEST_CASE("ladder values reproduce the band traces") {
    const BandTree& tree = golden6();
    const auto ladders = sturm::build_ladders(tree, 2);
    for (std::size_t li = 0; li < ladders.size(); li += 3) {
      const Ladder& lad = ladders[li];
      const Real x = lad.leaf().midpoint();
      for (std::size_t i = 0; i < lad.rungs(); ++i) {
        const auto got = lad.value(i, x);
        const auto want =
            tree.label_trace(lad.rung(i).level, lad.rung(i).power, x);
        CHECK(got.t == want.t);
        CHECK(got.dt == want.dt);
      }
    }
  }

  TEST_CASE("the step identity closes with tiny residual") {
    for (BandTree* tp : {&golden6(), &triple5()}) {
      const auto ladders = sturm::build_ladders(*tp, 2);
      for (std::size_t li = 0; li < ladders.size(); li += 2) {
        const Ladder& lad = ladders[li];
        const Band& leaf = lad.leaf();
        for (const Real& frac : {Real("0.21"), Real("0.5"), Real("0.83")}) {
          const Real x = leaf.lo + frac * leaf.length();
          for (std::size_t e = 0; e + 1 < lad.rungs(); ++e)
            CHECK(lad.step_residual(e, x) < Real("1e-40"));
        }
      }
    }
  }

  TEST_CASE("recovered window indices match the expectation") {
    for (BandTree* tp : {&golden6(), &triple5()}) {
      const auto ladders = sturm::build_ladders(*tp, 2);
      for (const Ladder& lad : ladders)
        for (std::size_t e = 0; e + 1 < lad.rungs(); ++e) {
          CHECK(lad.l_seq()[e] != 0);
          CHECK(lad.l_seq()[e] == lad.expected_l(e));
        }
    }
  }

  TEST_CASE("deep values contract toward the leaf") {
    const auto ladders = sturm::build_ladders(golden6(), 2);
    const Ladder& lad = ladders[0];
    const Band& leaf = lad.leaf();
    const std::size_t m = lad.rungs() - 1;
    const Real slack("1.0000000001");
    for (std::size_t i = 1; i <= m; ++i) {
      const Real d = abs(lad.value(i, leaf.lo).t - lad.value(i, leaf.hi).t);
      Real budget(4);
      for (std::size_t j = i; j < m; ++j) budget /= 3;
      CHECK(d <= budget * slack);
    }
  }

  TEST_CASE("index errors fail cleanly") {
    const auto ladders = sturm::build_ladders(golden6(), 1);
    const Ladder& lad = ladders[0];
    CHECK_THROWS_AS(lad.rung(lad.rungs()), sturm::Error);
    CHECK_THROWS_AS(lad.step_residual(lad.rungs() - 1, Real(24)), sturm::Error);
    CHECK_THROWS_AS(lad.expected_l(lad.rungs() - 1), sturm::Error);
    CHECK_THROWS_AS(Ladder(golden6(), 999), sturm::Error);
  }
}
