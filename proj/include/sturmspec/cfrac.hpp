#pragma once

#include "sturmspec/real.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace sturm {

// Frequency alpha = [0; a_1, a_2, ...] in (0,1), eventually periodic so the
// quotient sequence is total. A finite-truncation variant exists for
// experiments; it throws QuotientsExhausted past its last known quotient.
class ContinuedFraction {
 public:
  // Accepts "[0;d,...,(d,...)]" (parenthesized tail = period, comma before
  // the group optional) and the pure-period shorthand "per:d,...".
  static ContinuedFraction parse(const std::string& spec);

  ContinuedFraction(std::vector<unsigned> preperiod, std::vector<unsigned> period);

  static ContinuedFraction truncated(std::vector<unsigned> quotients);

  // a_k for k >= 1.
  unsigned quotient(std::size_t k) const;

  unsigned max_quotient() const { return M_; }
  const std::vector<unsigned>& preperiod() const { return preperiod_; }
  const std::vector<unsigned>& period() const { return period_; }
  bool is_truncated() const { return truncated_; }

  struct Convergent {
    long k;
    BigInt p, q;
  };

  // Exact integer recurrence p_{k+1} = a_{k+1} p_k + p_{k-1} (same for q)
  // from seeds (p,q)_{-1} = (1,0) and (p,q)_0 = (0,1); k >= -1.
  Convergent convergent(long k) const;

  // alpha correct to the current thread precision.
  Real value() const;

  // Geometric mean of the period quotients: lim (a_1...a_k)^{1/k}.
  Real growth_K() const;

  // Normal form "[0;d,...,(d,...)]"; hashes and dumps key on this.
  std::string canonical() const;

  bool operator==(const ContinuedFraction& o) const {
    return preperiod_ == o.preperiod_ && period_ == o.period_ &&
           truncated_ == o.truncated_;
  }

 private:
  ContinuedFraction() = default;

  std::vector<unsigned> preperiod_;
  std::vector<unsigned> period_;  // empty only in truncated mode
  unsigned M_ = 1;
  bool truncated_ = false;
};

}  // namespace sturm
