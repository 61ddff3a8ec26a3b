#include "sturmspec/ladder.hpp"

#include "sturmspec/errors.hpp"
#include "sturmspec/parallel.hpp"

#include <map>
#include <optional>
#include <utility>

namespace sturm {

Ladder::Ladder(const BandTree& tree, std::size_t leaf_index)
    : tree_(&tree), leaf_index_(leaf_index) {
  const std::size_t m = tree.depth();
  const auto& leaves = tree.generation(m);
  if (leaf_index >= leaves.size())
    throw Error(errc::order_unavailable, "leaf index out of range");

  std::vector<const Band*> chain(m + 1);
  {
    const Band* b = &leaves[leaf_index];
    for (std::size_t k = m + 1; k-- > 0;) {
      chain[k] = b;
      if (k > 0) b = &tree.parent_of(*b);
    }
  }

  const ContinuedFraction& cf = tree.cf();
  for (std::size_t k = 0; k <= m; ++k) {
    const Band& b = *chain[k];
    const bool after_type_i =
        k > 0 && b.kind == BandKind::II && chain[k - 1]->kind == BandKind::I;
    if (after_type_i && cf.quotient(k) == 1) {
      // exact copy: drop it, the predecessor stands in for this step
      rungs_.back().acting_next = true;
      continue;
    }
    if (after_type_i) {
      long p = 2;
      for (const Interval& iv : b.insert_chain) {
        Rung r;
        r.level = chain[k - 1]->level;
        r.power = p;
        r.lo = iv.lo;
        r.hi = iv.hi;
        r.kind = BandKind::I;
        r.inserted = true;
        r.order = chain[k - 1]->order;
        r.index_l = 1;
        r.path = chain[k - 1]->path + "+" + std::to_string(p);
        rungs_.push_back(std::move(r));
        ++p;
      }
    }
    Rung r;
    r.level = b.level;
    r.power = b.power;
    r.lo = b.lo;
    r.hi = b.hi;
    r.kind = b.kind;
    r.order = b.order;
    r.index_l = b.index_l;
    r.path = b.path;
    rungs_.push_back(std::move(r));
  }

  // step exponents from the type of each rung and what follows it
  for (std::size_t i = 0; i + 1 < rungs_.size(); ++i) {
    const Rung& cur = rungs_[i];
    const Rung& nxt = rungs_[i + 1];
    long p = 1;
    if (!cur.inserted) {
      switch (cur.kind) {
        case BandKind::I:
          if (cur.acting_next) {
            // the removed copy's children hang off this rung
            const long a = cf.quotient(static_cast<std::size_t>(cur.order) + 2);
            p = nxt.kind == BandKind::I ? a + 1 : a;
          }
          break;
        case BandKind::II: {
          const long a = cf.quotient(static_cast<std::size_t>(cur.order) + 1);
          p = nxt.kind == BandKind::I ? a + 1 : a;
          break;
        }
        case BandKind::III: {
          const long a = cf.quotient(static_cast<std::size_t>(cur.order) + 1);
          p = nxt.kind == BandKind::I ? a : a - 1;
          break;
        }
      }
    }
    p_.push_back(p);
  }

  // window indices, recovered from where the trace lands on the deepest band
  const Band& lf = leaf();
  const Real mid = (lf.lo + lf.hi) / 2;
  for (std::size_t i = 0; i + 1 < rungs_.size(); ++i) {
    unsigned l = match_l(i, mid);
    if (l == 0) {
      std::map<unsigned, int> votes;
      for (int j = 1; j <= 5; ++j) {
        const unsigned cand = match_l(i, lf.lo + j * (lf.hi - lf.lo) / 6);
        if (cand != 0) ++votes[cand];
      }
      int best = 0;
      for (const auto& [cand, n] : votes)
        if (n > best) {
          best = n;
          l = cand;
        }
    }
    l_.push_back(l);
  }
}

const Rung& Ladder::rung(std::size_t i) const {
  if (i >= rungs_.size())
    throw Error(errc::domain_violation, "rung index out of range");
  return rungs_[i];
}

unsigned Ladder::expected_l(std::size_t edge) const {
  if (edge + 1 >= rungs_.size())
    throw Error(errc::domain_violation, "edge index out of range");
  const Rung& nxt = rungs_[edge + 1];
  if (nxt.inserted || nxt.kind == BandKind::II) return 1;
  return nxt.index_l;
}

const Band& Ladder::leaf() const {
  return tree_->generation(tree_->depth())[leaf_index_];
}

TraceValue Ladder::value(std::size_t i, const Real& x) const {
  const Rung& r = rung(i);
  return tree_->label_trace(r.level, r.power, x);
}

unsigned Ladder::match_l(std::size_t i, const Real& x) const {
  const long p = p_[i];
  const Real t = value(i, x).t;
  if (abs(t) >= 2) return 0;
  const ChebyshevEval s = chebyshev(p + 1, t);
  if (abs(s.value) > Real("0.2500001")) return 0;
  const Real theta = acos(t / 2);
  const Real pos = theta * (p + 1) / real_pi();
  const Real rounded = floor(pos + Real("0.5"));
  if (rounded < 1 || rounded > p) return 0;
  if (abs(pos - rounded) > Real("0.1000001")) return 0;
  return static_cast<unsigned>(rounded.convert_to<long>());
}

Real Ladder::step_residual(std::size_t i, const Real& x) const {
  if (i >= p_.size())
    throw Error(errc::domain_violation, "edge index out of range");
  const Real prev = i == 0 ? Real(2) : value(i - 1, x).t;
  const Real cur = value(i, x).t;
  const Real next = value(i + 1, x).t;
  const ChebyshevEval s_hi = chebyshev(p_[i] + 1, cur);
  const ChebyshevEval s_lo = chebyshev(p_[i], cur);
  Real best(-1);
  for (const int sign : {1, -1}) {
    const ZBranch zb = z_branch(cur, prev, tree_->params(), sign);
    const Real rhs = zb.z * s_hi.value - prev * s_lo.value;
    Real scale = abs(next);
    if (abs(rhs) > scale) scale = abs(rhs);
    if (scale < 1) scale = 1;
    const Real r = abs(next - rhs) / scale;
    if (best < 0 || r < best) best = r;
  }
  return best;
}

std::vector<Ladder> build_ladders(const BandTree& tree, unsigned threads) {
  const std::size_t n = tree.generation(tree.depth()).size();
  std::vector<std::optional<Ladder>> slots(n);
  parallel_for(n, threads, [&](std::size_t i) { slots[i].emplace(tree, i); });
  std::vector<Ladder> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace sturm
