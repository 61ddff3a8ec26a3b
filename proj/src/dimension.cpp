#include "sturmspec/dimension.hpp"

#include "sturmspec/errors.hpp"

#include <algorithm>
#include <utility>

namespace sturm {

namespace {

// Neumaier-style compensated accumulation; terms arrive largest first
Real compensated_sum(const std::vector<Real>& terms) {
  Real sum = 0;
  Real comp = 0;
  for (const Real& t : terms) {
    const Real next = sum + t;
    if (abs(sum) >= abs(t))
      comp += (sum - next) + t;
    else
      comp += (t - next) + sum;
    sum = next;
  }
  return sum + comp;
}

struct SumEval {
  Real f;
  Real df;
};

// f(s) = sum exp(s log L_i) and its derivative, logs sorted by ascending
// magnitude of the log so the powers come out in descending order
SumEval eval_power_sum(const std::vector<Real>& logs, const Real& s) {
  std::vector<Real> powers;
  std::vector<Real> dpowers;
  powers.reserve(logs.size());
  dpowers.reserve(logs.size());
  for (const Real& lg : logs) {
    Real p = exp(s * lg);
    dpowers.push_back(p * lg);
    powers.push_back(std::move(p));
  }
  return {compensated_sum(powers), compensated_sum(dpowers)};
}

}  // namespace

PreDimension pre_dimension(std::vector<Real> lengths) {
  if (lengths.empty())
    throw Error(errc::domain_violation, "no intervals to weigh");
  for (const Real& len : lengths) {
    if (!(len > 0))
      throw Error(errc::domain_violation, "interval of nonpositive length");
    if (len >= 1)
      throw Error(errc::not_contractive,
                  "an interval of length >= 1 admits no exponent in (0,1]");
  }
  if (lengths.size() == 1) return {Real(0), Real(0), true};

  std::sort(lengths.begin(), lengths.end(), std::greater<Real>());
  std::vector<Real> logs;
  logs.reserve(lengths.size());
  for (const Real& len : lengths) logs.push_back(log(len));

  const Real total = compensated_sum(lengths);
  if (total > 1)
    throw Error(errc::not_contractive,
                "total length " + total.str(8) + " exceeds 1, root leaves (0,1]");

  // coarse bisection: f(0) = count > 1 >= f(1)
  Real lo = 0, hi = 1;
  for (int it = 0; it < 40; ++it) {
    const Real mid = (lo + hi) / 2;
    if (eval_power_sum(logs, mid).f > 1)
      lo = mid;
    else
      hi = mid;
  }

  // Newton polish to the working precision
  Real s = (lo + hi) / 2;
  const Real goal = precision_floor(18);
  for (int it = 0; it < 60; ++it) {
    const SumEval e = eval_power_sum(logs, s);
    const Real resid = e.f - 1;
    if (abs(resid) <= goal) break;
    if (e.df == 0)
      throw Error(errc::zero_derivative, "flat power sum during polish");
    s -= resid / e.df;
    if (s < 0) s = 0;
    if (s > 1) s = 1;
  }

  // certificate: residual and a two-sided bracket
  const Real tol("1e-12");
  Real residual = abs(eval_power_sum(logs, s).f - 1);
  if (residual > tol)
    throw Error(errc::precision_exhausted, "power-sum root residual above 1e-12");
  const Real h("1e-6");
  if (!(eval_power_sum(logs, s - h).f > 1) || !(eval_power_sum(logs, s + h).f < 1))
    throw Error(errc::precision_exhausted, "power-sum root bracket failed");
  return {std::move(s), std::move(residual), false};
}

DimensionBounds coupling_dimension_bounds(const Real& V, const Real& K) {
  if (!(V > 20))
    throw Error(errc::coupling_too_small, "dimension bracket needs V > 20");
  if (isinf(K)) return {Real(1), Real(1)};
  if (!(K >= 1))
    throw Error(errc::domain_violation, "quotient growth rate below 1");

  const Real t1 = 3 / (V - 8);
  const Real t2 = 1 / (4 * (V + 8));
  const Real ln2 = log(Real(2));
  const Real ln3 = log(Real(3));
  const Real lnK = log(K);

  const Real low_flat = ln2 / (10 * ln2 - 3 * log(t2));
  const Real low_growth = (lnK - ln3) / (lnK - log(t2 / 3));
  DimensionBounds b;
  b.lower = low_flat > low_growth ? low_flat : low_growth;
  b.upper = (2 * lnK + ln3) / (2 * lnK - log(t1));
  return b;
}

MoranCover moran_cover(const BandTree& tree, const Real& r) {
  if (!(r > 0))
    throw Error(errc::domain_violation, "covering scale must be positive");
  MoranCover out;
  out.min_ratio = 1;
  const std::size_t depth = tree.depth();
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t i = tree.generation(0).size(); i-- > 0;)
    stack.push_back({0, i});
  while (!stack.empty()) {
    const auto [k, i] = stack.back();
    stack.pop_back();
    const Band& b = tree.generation(k)[i];
    const Real len = b.hi - b.lo;
    if (len <= r) {
      out.bands.push_back(&b);
      if (k > 0) {
        const Band& par = tree.parent_of(b);
        const Real ratio = len / (par.hi - par.lo);
        if (ratio < out.min_ratio) out.min_ratio = ratio;
      }
      continue;
    }
    if (k == depth)
      throw Error(errc::insufficient_depth,
                  "band " + b.path + " is longer than the scale at the deepest order");
    const auto [clo, chi] = tree.child_range(k, i);
    for (std::size_t c = chi; c-- > clo;) stack.push_back({k + 1, c});
  }
  return out;
}

DimensionReport dimension_report(const BandTree& tree) {
  DimensionReport rep;
  const std::size_t depth = tree.depth();

  std::size_t n0 = depth + 1;
  for (std::size_t k = 0; k <= depth; ++k) {
    Real longest = 0;
    for (const Band& b : tree.generation(k))
      if (b.hi - b.lo > longest) longest = b.hi - b.lo;
    if (longest < 1) {
      n0 = k;
      break;
    }
  }
  if (n0 > depth)
    throw Error(errc::not_contractive,
                "every enumerated order still holds an interval of length >= 1");
  rep.n0 = n0;

  for (std::size_t n = n0; n <= depth; ++n) {
    std::vector<Real> lengths;
    const auto& gen = tree.generation(n);
    lengths.reserve(gen.size());
    for (const Band& b : gen) lengths.push_back(b.hi - b.lo);
    PreDimension pd = pre_dimension(std::move(lengths));
    rep.degenerate = rep.degenerate || pd.degenerate;
    rep.s_seq.emplace(n, std::move(pd.s));
    rep.residuals.emplace(n, std::move(pd.residual));
  }

  const std::size_t tail = std::min(rep.s_seq.size(), (depth + 1) / 2);
  rep.tail_orders = tail;
  bool first = true;
  auto it = rep.s_seq.end();
  for (std::size_t j = 0; j < tail; ++j) {
    --it;
    if (first || it->second < rep.s_low) rep.s_low = it->second;
    if (first || it->second > rep.s_high) rep.s_high = it->second;
    first = false;
  }

  rep.bounds = coupling_dimension_bounds(tree.params().V, tree.cf().growth_K());

  Real longest_leaf = 0;
  for (const Band& b : tree.generation(depth))
    if (b.hi - b.lo > longest_leaf) longest_leaf = b.hi - b.lo;
  Real r = 4;
  while (r >= longest_leaf && rep.moran_counts.size() < 40) {
    rep.moran_counts.emplace_back(r, moran_cover(tree, r).bands.size());
    r /= 2;
  }

  if (rep.moran_counts.size() >= 3) {
    // least-squares slope of ln N against ln(1/r)
    Real st = 0, sy = 0, sty = 0, stt = 0;
    const Real n = static_cast<long>(rep.moran_counts.size());
    for (const auto& [scale, count] : rep.moran_counts) {
      const Real t = -log(scale);
      const Real y = log(Real(static_cast<long>(count)));
      st += t;
      sy += y;
      sty += t * y;
      stt += t * t;
    }
    rep.slope_fit = (n * sty - st * sy) / (n * stt - st * st);
  }
  return rep;
}

Real box_dim_estimate(const DimensionReport& report) {
  if (report.s_seq.size() < 5)
    throw Error(errc::insufficient_depth,
                "box estimate needs at least four orders past the first usable one");
  return report.s_high;
}

}  // namespace sturm
