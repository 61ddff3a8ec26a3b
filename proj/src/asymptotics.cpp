#include "sturmspec/asymptotics.hpp"

#include "sturmspec/dimension.hpp"
#include "sturmspec/errors.hpp"
#include "sturmspec/parallel.hpp"
#include "sturmspec/rootfind.hpp"
#include "sturmspec/tracemap.hpp"

#include <optional>
#include <utility>

namespace sturm {

Mat3 growth_matrix(unsigned a, const Real& x) {
  if (a < 1) throw Error(errc::invalid_quotient, "quotient must be positive");
  if (!(x > 0) || x > 1)
    throw Error(errc::domain_violation, "growth parameter must lie in (0,1]");
  Mat3 m;
  const Real zero(0);
  m[0] = {zero, a == 1 ? Real(1) : pow(x, static_cast<int>(a) - 1), zero};
  m[1] = {(static_cast<int>(a) + 1) * x, zero, static_cast<int>(a) * x};
  m[2] = {static_cast<int>(a) * x, zero, (static_cast<int>(a) - 1) * x};
  return m;
}

Mat3 mat_mul(const Mat3& A, const Mat3& B) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Real acc = A[i][0] * B[0][j];
      acc += A[i][1] * B[1][j];
      acc += A[i][2] * B[2][j];
      out[i][j] = std::move(acc);
    }
  return out;
}

Real row_sum_norm(const Mat3& A) {
  Real best = 0;
  for (int i = 0; i < 3; ++i) {
    const Real s = abs(A[i][0]) + abs(A[i][1]) + abs(A[i][2]);
    if (s > best) best = s;
  }
  return best;
}

Real perron_root(const Mat3& A) {
  // iterate on A + I: the dominant eigenvalue lam + 1 is strictly separated
  // in modulus from every shifted eigenvalue, so no cyclic stalling
  std::array<Real, 3> v{Real(1), Real(1), Real(1)};
  const Real tol("1e-14");
  Real lam_prev(-1);
  for (int it = 0; it < 200000; ++it) {
    std::array<Real, 3> w;
    for (int i = 0; i < 3; ++i)
      w[i] = A[i][0] * v[0] + A[i][1] * v[1] + A[i][2] * v[2] + v[i];
    const Real nv = v[0] + v[1] + v[2];
    const Real nw = w[0] + w[1] + w[2];
    const Real lam = nw / nv - 1;
    for (int i = 0; i < 3; ++i) v[i] = w[i] / nw;
    Real scale = abs(lam);
    if (scale < 1) scale = 1;
    if (lam_prev >= -1 && abs(lam - lam_prev) <= tol * scale && it > 3)
      return lam;
    lam_prev = lam;
  }
  throw Error(errc::precision_exhausted, "power iteration did not settle");
}

Mat3 period_product(const ContinuedFraction& cf, const Real& x) {
  if (cf.is_truncated())
    throw Error(errc::unsupported_aperiodic,
                "growth analysis needs a periodic quotient tail");
  Mat3 prod{};
  bool first = true;
  for (const unsigned a : cf.period()) {
    const Mat3 g = growth_matrix(a, x);
    prod = first ? g : mat_mul(prod, g);
    first = false;
  }
  return prod;
}

Real f_star(const ContinuedFraction& cf) {
  const auto rho = [&](const Real& x) {
    return perron_root(period_product(cf, x));
  };
  const Real at_one = rho(Real(1));
  if (at_one < 1)
    throw Error(errc::no_root_in_unit_interval,
                "growth rate below 1 at x = 1; quotient data inconsistent");
  if (at_one == 1) return Real(1);

  Real lo("0.5");
  int guard = 0;
  while (rho(lo) >= 1) {
    lo /= 2;
    if (++guard > 200)
      throw Error(errc::no_root_in_unit_interval,
                  "growth rate never drops below 1 on (0,1]");
  }
  return bisect([&](const Real& x) { return rho(x) - 1; }, lo, Real(1),
                precision_floor(12));
}

Real norm_growth(const ContinuedFraction& cf, const Real& x, std::size_t n) {
  if (n == 0) throw Error(errc::domain_violation, "empty matrix product");
  Mat3 prod = growth_matrix(cf.quotient(1), x);
  Real log_norm = 0;
  for (std::size_t i = 2; i <= n; ++i) {
    prod = mat_mul(prod, growth_matrix(cf.quotient(i), x));
    const Real s = row_sum_norm(prod);
    log_norm += log(s);
    for (auto& row : prod)
      for (auto& e : row) e /= s;
  }
  log_norm += log(row_sum_norm(prod));
  return exp(log_norm / static_cast<long>(n));
}

std::vector<LawRow> large_v_law(const ContinuedFraction& cf,
                                const std::vector<Real>& couplings,
                                std::size_t order, unsigned precision_bits,
                                const Real& bisect_rel_tol, unsigned threads) {
  const Real target = -log(f_star(cf));
  std::vector<std::optional<LawRow>> slots(couplings.size());
  const unsigned inner = couplings.size() > 1 ? 1 : threads;
  const unsigned outer = couplings.size() > 1 ? threads : 1;
  parallel_for(couplings.size(), outer, [&](std::size_t i) {
    const SpectralParams params(couplings[i], precision_bits);
    BandTree tree(cf, params, bisect_rel_tol);
    tree.enumerate(order, inner);
    std::vector<Real> lengths;
    const auto& gen = tree.generation(order);
    lengths.reserve(gen.size());
    for (const Band& b : gen) lengths.push_back(b.hi - b.lo);
    LawRow row;
    row.V = couplings[i];
    row.s = pre_dimension(std::move(lengths)).s;
    row.s_ln_v = row.s * log(couplings[i]);
    row.target = target;
    row.gap = abs(row.s_ln_v - target);
    slots[i] = std::move(row);
  });
  std::vector<LawRow> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace sturm
