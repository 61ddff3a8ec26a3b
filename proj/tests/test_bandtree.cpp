#include <doctest.h>

#include <sturmspec/bandtree.hpp>
#include <sturmspec/errors.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <string>
#include <vector>

using sturm::Band;
using sturm::BandKind;
using sturm::BandTree;
using sturm::ContinuedFraction;
using sturm::Real;
using sturm::SpectralParams;

namespace {

BandTree& golden8() {
  static BandTree tree(ContinuedFraction::parse("per:1"),
                       SpectralParams(Real(24), 192));
  if (tree.empty()) tree.enumerate(8, 4);
  return tree;
}

BandTree& pell6() {
  static BandTree tree(ContinuedFraction::parse("per:2"),
                       SpectralParams(Real(24), 192));
  if (tree.empty()) tree.enumerate(6, 4);
  return tree;
}

BandTree& triple4() {
  static BandTree tree(ContinuedFraction::parse("per:3"),
                       SpectralParams(Real(24), 192));
  if (tree.empty()) tree.enumerate(4, 4);
  return tree;
}

// exact copy bands appear wherever a quotient-1 step reuses the interval
bool same_interval(const Band& a, const Band& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

// independent reimplementation of the type-count recursion
struct TypeCounts {
  unsigned long long i, ii, iii;
};

std::vector<TypeCounts> recursion_oracle(const ContinuedFraction& cf,
                                         std::size_t n_max) {
  std::vector<TypeCounts> out{{1, 0, 1}};
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto [i, ii, iii] = out.back();
    const unsigned long long a = cf.quotient(n);
    out.push_back({(a + 1) * ii + a * iii, i, a * ii + (a - 1) * iii});
  }
  return out;
}

}  // namespace

TEST_SUITE("bandtree") {
  TEST_CASE("roots are the two literal intervals") {
    const auto& g0 = golden8().generation(0);
    REQUIRE(g0.size() == 2);
    const Band* type_i = &g0[0];
    const Band* type_iii = &g0[1];
    if (type_i->kind != BandKind::I) std::swap(type_i, type_iii);
    CHECK(type_i->kind == BandKind::I);
    CHECK(type_i->lo == 22);
    CHECK(type_i->hi == 26);
    CHECK(type_i->path == "I");
    CHECK(type_i->level == 0);
    CHECK(type_i->power == 1);
    CHECK(type_iii->kind == BandKind::III);
    CHECK(type_iii->lo == -2);
    CHECK(type_iii->hi == 2);
    CHECK(type_iii->path == "III");
    CHECK(type_iii->level == 1);
    CHECK(type_iii->power == 0);
    for (const Band& b : g0) {
      CHECK(b.parent == -1);
      CHECK(b.order == 0);
      CHECK(b.index_l == 0);
    }
    CHECK(BandTree::virtual_root().order == -1);
    CHECK(golden8().parent_of(g0[0]).order == -1);
  }

  TEST_CASE("golden totals match the frozen sequence") {
    const std::vector<unsigned long long> totals{2, 2, 4, 6, 10, 16, 26, 42, 68};
    for (std::size_t k = 0; k <= 8; ++k) {
      CHECK(golden8().counts(k).total() == totals[k]);
      CHECK(golden8().generation(k).size() == totals[k]);
    }
  }

  TEST_CASE("counts obey the recursion for every frequency") {
    struct Probe {
      BandTree* tree;
      std::size_t depth;
    };
    for (const Probe pr : {Probe{&golden8(), 8}, Probe{&pell6(), 6},
                           Probe{&triple4(), 4}}) {
      const auto want = recursion_oracle(pr.tree->cf(), pr.depth);
      const auto predicted =
          BandTree::predicted_counts(pr.tree->cf(), pr.depth);
      REQUIRE(predicted.size() == pr.depth + 1);
      for (std::size_t k = 0; k <= pr.depth; ++k) {
        const auto got = pr.tree->counts(k);
        CHECK(got.n_I == want[k].i);
        CHECK(got.n_II == want[k].ii);
        CHECK(got.n_III == want[k].iii);
        CHECK(got == predicted[k]);
      }
    }
  }

  TEST_CASE("children sit inside their parents") {
    for (BandTree* tp : {&golden8(), &pell6(), &triple4()}) {
      const BandTree& tree = *tp;
      for (std::size_t k = 1; k <= tree.depth(); ++k) {
        for (const Band& b : tree.generation(k)) {
          const Band& par = tree.parent_of(b);
          if (same_interval(b, par)) continue;  // quotient-1 copy
          CHECK(b.lo > par.lo);
          CHECK(b.hi < par.hi);
          CHECK(b.length() > 0);
        }
      }
    }
  }

  TEST_CASE("each generation is pairwise disjoint with gaps") {
    for (BandTree* tp : {&golden8(), &pell6()}) {
      const BandTree& tree = *tp;
      for (std::size_t k = 0; k <= tree.depth(); ++k) {
        auto bands = tree.generation(k);
        std::sort(bands.begin(), bands.end(),
                  [](const Band& a, const Band& b) { return a.lo < b.lo; });
        for (std::size_t i = 0; i + 1 < bands.size(); ++i)
          CHECK(bands[i].hi < bands[i + 1].lo);
      }
    }
  }

  TEST_CASE("child ranges partition the next generation") {
    const BandTree& tree = golden8();
    for (std::size_t k = 0; k < tree.depth(); ++k) {
      std::size_t expect_first = 0;
      for (std::size_t i = 0; i < tree.generation(k).size(); ++i) {
        const auto [first, last] = tree.child_range(k, i);
        CHECK(first == expect_first);
        CHECK(last > first);
        for (std::size_t c = first; c < last; ++c)
          CHECK(tree.generation(k + 1)[c].parent == static_cast<long>(i));
        expect_first = last;
      }
      CHECK(expect_first == tree.generation(k + 1).size());
    }
  }

  TEST_CASE("endpoint traces land on the band edge values") {
    const BandTree& tree = golden8();
    const Real tol("1e-20");
    for (std::size_t k = 0; k <= 6; ++k) {
      for (const Band& b : tree.generation(k)) {
        const auto at_lo = tree.band_trace(b, b.lo);
        const auto at_hi = tree.band_trace(b, b.hi);
        CHECK(abs(abs(at_lo.t) - 2) < tol);
        CHECK(abs(abs(at_hi.t) - 2) < tol);
        // strictly monotone image [-2,2]: opposite signs at the ends
        CHECK(at_lo.t * at_hi.t < 0);
        const auto mid = tree.band_trace(b, b.midpoint());
        CHECK(abs(mid.t) < 2);
        CHECK(tree.label_trace(b.level, b.power, b.midpoint()).t == mid.t);
      }
    }
  }

  TEST_CASE("window cache agrees with the direct construction") {
    const BandTree& tree = golden8();
    const unsigned top = tree.cf().max_quotient() + 1;
    for (unsigned p = 1; p <= top; ++p)
      for (unsigned l = 1; l <= p; ++l) {
        const auto direct = sturm::resolved_window(p, l);
        const auto& cached = tree.window(p, l);
        CHECK(cached.first == direct.first);
        CHECK(cached.second == direct.second);
      }
  }

  TEST_CASE("paths identify bands") {
    const BandTree& tree = golden8();
    for (std::size_t k = 0; k <= 4; ++k)
      for (const Band& b : tree.generation(k)) {
        const Band* found = tree.find_by_path(b.path);
        REQUIRE(found != nullptr);
        CHECK(found->lo == b.lo);
        CHECK(found->order == b.order);
      }
    CHECK(tree.find_by_path("I.IV:9") == nullptr);
    CHECK(tree.find_by_path("") == nullptr);
  }

  TEST_CASE("child plans depend only on type and quotient") {
    const BandTree& tree = golden8();
    for (const Band& b : tree.generation(2)) {
      const auto plan = tree.child_plan(b);
      // next quotient is 1 everywhere on the golden sequence
      if (b.kind == BandKind::I) {
        REQUIRE(plan.size() == 1);
        CHECK(plan[0].kind == BandKind::II);
        CHECK(plan[0].l == 0);
      } else if (b.kind == BandKind::II) {
        REQUIRE(plan.size() == 3);
        CHECK(plan[0].kind == BandKind::I);
        CHECK(plan[2].kind == BandKind::III);
      } else {
        REQUIRE(plan.size() == 1);
        CHECK(plan[0].kind == BandKind::I);
      }
    }
  }

  TEST_CASE("quotient-1 steps copy intervals exactly") {
    const BandTree& tree = golden8();
    bool found_copy = false;
    for (std::size_t k = 1; k <= 6; ++k)
      for (const Band& b : tree.generation(k))
        if (same_interval(b, tree.parent_of(b))) {
          found_copy = true;
          CHECK(b.kind == BandKind::II);
          CHECK(tree.parent_of(b).kind == BandKind::I);
        }
    CHECK(found_copy);
  }

  TEST_CASE("large quotients interpose contraction steps") {
    const BandTree& tree = triple4();
    // on the all-3 sequence every II child of a I parent carries a - 2 = 1
    // interposed interval
    bool found = false;
    for (std::size_t k = 1; k <= tree.depth(); ++k)
      for (const Band& b : tree.generation(k)) {
        const Band& par = tree.parent_of(b);
        if (b.kind != BandKind::II || par.kind != BandKind::I) continue;
        if (same_interval(b, par)) continue;
        found = true;
        REQUIRE(b.insert_chain.size() == 1);
        const auto& iv = b.insert_chain[0];
        CHECK(iv.lo >= par.lo);
        CHECK(iv.hi <= par.hi);
        CHECK(b.lo >= iv.lo);
        CHECK(b.hi <= iv.hi);
      }
    CHECK(found);
    for (std::size_t k = 0; k <= golden8().depth(); ++k)
      for (const Band& b : golden8().generation(k))
        CHECK(b.insert_chain.empty());
  }

  TEST_CASE("a restored generation behaves like an enumerated one") {
    const BandTree& ref = golden8();
    BandTree fresh(ref.cf(), ref.params(), ref.bisect_rel_tol());
    fresh.enumerate(3, 2);
    fresh.restore_generation(ref.generation(4));
    REQUIRE(fresh.depth() == 4);
    const auto& got = fresh.generation(4);
    const auto& want = ref.generation(4);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].lo == want[i].lo);
      CHECK(got[i].hi == want[i].hi);
      CHECK(got[i].path == want[i].path);
      CHECK(got[i].parent == want[i].parent);
    }
    // extending past the restored generation reproduces the reference
    fresh.enumerate(5, 2);
    const auto& g5 = fresh.generation(5);
    const auto& w5 = ref.generation(5);
    REQUIRE(g5.size() == w5.size());
    for (std::size_t i = 0; i < g5.size(); ++i) {
      CHECK(g5[i].lo == w5[i].lo);
      CHECK(g5[i].hi == w5[i].hi);
      CHECK(g5[i].path == w5[i].path);
    }
    // child bookkeeping over the restored layer stays consistent
    std::size_t covered = 0;
    for (std::size_t i = 0; i < fresh.generation(4).size(); ++i) {
      const auto [a, b] = fresh.child_range(4, i);
      covered += b - a;
    }
    CHECK(covered == g5.size());
  }

  TEST_CASE("restore rejects the wrong order") {
    const BandTree& ref = golden8();
    BandTree fresh(ref.cf(), ref.params(), ref.bisect_rel_tol());
    fresh.enumerate(2, 2);
    try {
      fresh.restore_generation(ref.generation(4));
      FAIL("expected an order mismatch");
    } catch (const sturm::Error& e) {
      CHECK(e.code() == sturm::errc::order_unavailable);
    }
  }

  TEST_CASE("out-of-range queries fail cleanly") {
    const BandTree& tree = golden8();
    CHECK_THROWS_AS(tree.generation(99), sturm::Error);
    CHECK_THROWS_AS(tree.counts(99), sturm::Error);
    CHECK_THROWS_AS(tree.child_range(8, 0), sturm::Error);
    CHECK_THROWS_AS(tree.window(0, 1), sturm::Error);
    CHECK_THROWS_AS(tree.window(9, 1), sturm::Error);
    CHECK_THROWS_AS(BandTree(tree.cf(), tree.params(), Real(2)), sturm::Error);
  }
}
