#include "sturmspec/gibbs.hpp"

#include "sturmspec/errors.hpp"

#include <algorithm>
#include <utility>

namespace sturm {

namespace {

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

Real power_sum(const std::vector<Band>& gen, const Real& beta) {
  std::vector<Real> terms;
  terms.reserve(gen.size());
  for (const Band& b : gen) terms.push_back(pow(b.hi - b.lo, beta));
  std::sort(terms.begin(), terms.end(), std::greater<Real>());
  return compensated_sum(terms);
}

}  // namespace

GibbsMeasure build_measure(const BandTree& tree, const Real& beta,
                           std::size_t m) {
  if (!(beta > 0) || !(beta < 1))
    throw Error(errc::domain_violation, "exponent must lie in (0,1)");
  if (tree.empty() || m > tree.depth())
    throw Error(errc::order_unavailable,
                "generation " + std::to_string(m) + " not enumerated");

  GibbsMeasure mu;
  mu.beta = beta;
  mu.m = m;
  mu.mass.resize(m + 1);

  const auto& leaves = tree.generation(m);
  std::vector<Real> raw;
  raw.reserve(leaves.size());
  for (const Band& b : leaves) raw.push_back(pow(b.hi - b.lo, beta));
  {
    std::vector<Real> sorted = raw;
    std::sort(sorted.begin(), sorted.end(), std::greater<Real>());
    mu.b_m = compensated_sum(sorted);
  }
  mu.mass[m].reserve(raw.size());
  for (const Real& w : raw) mu.mass[m].push_back(w / mu.b_m);

  // aggregate upward: ancestor mass is the sum over its children
  for (std::size_t k = m; k-- > 0;) {
    const std::size_t parents = tree.generation(k).size();
    mu.mass[k].assign(parents, Real(0));
    for (std::size_t i = 0; i < parents; ++i) {
      const auto [lo, hi] = tree.child_range(k, i);
      std::vector<Real> kids(mu.mass[k + 1].begin() +
                                 static_cast<std::ptrdiff_t>(lo),
                             mu.mass[k + 1].begin() +
                                 static_cast<std::ptrdiff_t>(hi));
      std::sort(kids.begin(), kids.end(), std::greater<Real>());
      mu.mass[k][i] = compensated_sum(kids);
    }
  }
  return mu;
}

GibbsRatioReport gibbs_ratio_report(const BandTree& tree, const Real& beta,
                                    std::size_t k_max, std::size_t m) {
  if (m < k_max + 3)
    throw Error(errc::insufficient_depth,
                "ratio report needs the deepest order at least k_max + 3");
  const GibbsMeasure mu = build_measure(tree, beta, m);

  GibbsRatioReport rep;
  rep.beta = beta;
  rep.m = m;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const auto& gen = tree.generation(k);
    const Real denom = power_sum(gen, beta);
    GibbsRatioRow row;
    row.k = k;
    bool first = true;
    for (std::size_t i = 0; i < gen.size(); ++i) {
      const Real rho =
          mu.mass[k][i] * denom / pow(gen[i].hi - gen[i].lo, beta);
      if (first || rho < row.min_ratio) row.min_ratio = rho;
      if (first || rho > row.max_ratio) row.max_ratio = rho;
      first = false;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Real stability_constant(const BandTree& tree, const Real& beta,
                        std::size_t k) {
  const GibbsMeasure coarse = build_measure(tree, beta, k);
  const GibbsMeasure fine = build_measure(tree, beta, k + 3);
  Real c = 1;
  for (std::size_t j = 0; j <= k; ++j) {
    for (std::size_t i = 0; i < coarse.mass[j].size(); ++i) {
      const Real& a = coarse.mass[j][i];
      const Real& b = fine.mass[j][i];
      if (!(a > 0) || !(b > 0))
        throw Error(errc::domain_violation, "vanishing band mass");
      const Real r = a > b ? a / b : b / a;
      if (r > c) c = r;
    }
  }
  return c;
}

}  // namespace sturm
