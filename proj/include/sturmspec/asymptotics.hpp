#pragma once

#include "sturmspec/cfrac.hpp"
#include "sturmspec/real.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace sturm {

using Mat3 = std::array<std::array<Real, 3>, 3>;

// The nonnegative substitution matrix for one quotient a at parameter
// x in (0,1]:
//   (      0     x^{a-1}      0    )
//   ( (a+1) x       0        a x   )
//   (    a x        0     (a-1) x  )
Mat3 growth_matrix(unsigned a, const Real& x);

Mat3 mat_mul(const Mat3& A, const Mat3& B);

// Largest absolute row sum.
Real row_sum_norm(const Mat3& A);

// Perron root by power iteration (shifted by the identity so the dominant
// eigenvalue is strictly separated), relative tolerance 1e-14.
Real perron_root(const Mat3& A);

// Product of the growth matrices over one full period of cf at x.
Mat3 period_product(const ContinuedFraction& cf, const Real& x);

// The unique x in (0,1] where the period product's Perron root equals 1.
// Throws NoRootInUnitInterval if the root at x = 1 is below 1 (which valid
// quotient sequences cannot produce).
Real f_star(const ContinuedFraction& cf);

// n-step growth ||G_1(x) ... G_n(x)||^{1/n} in the row-sum norm, with
// per-step renormalization so huge products stay representable.
Real norm_growth(const ContinuedFraction& cf, const Real& x, std::size_t n);

struct LawRow {
  Real V;
  Real s;       // pre-dimension of the deepest generation at this V
  Real s_ln_v;  // s * ln V
  Real target;  // -ln f_star
  Real gap;     // |s * ln V - target|
};

// For each coupling, enumerate the band hierarchy to `order` and record how
// far s * ln V sits from the limiting constant -ln f_star.
std::vector<LawRow> large_v_law(const ContinuedFraction& cf,
                                const std::vector<Real>& couplings,
                                std::size_t order, unsigned precision_bits,
                                const Real& bisect_rel_tol, unsigned threads);

}  // namespace sturm
