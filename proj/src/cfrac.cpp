#include "sturmspec/cfrac.hpp"

#include "sturmspec/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sturm {

namespace {

unsigned parse_quotient(const std::string& tok) {
  if (tok.empty())
    throw Error(errc::invalid_config, "empty quotient in frequency spec");
  std::size_t i = 0;
  bool negative = false;
  if (tok[0] == '-' || tok[0] == '+') {
    negative = tok[0] == '-';
    i = 1;
  }
  if (i == tok.size())
    throw Error(errc::invalid_config, "stray sign in frequency spec");
  for (std::size_t j = i; j < tok.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(tok[j])))
      throw Error(errc::invalid_config,
                  "quotient '" + tok + "' is not an integer");
  unsigned long v = 0;
  try {
    v = std::stoul(tok.substr(i));
  } catch (const std::exception&) {
    throw Error(errc::invalid_quotient, "quotient '" + tok + "' out of range");
  }
  if (negative || v == 0)
    throw Error(errc::invalid_quotient,
                "quotients must be positive, got '" + tok + "'");
  if (v > 1u << 20)
    throw Error(errc::invalid_quotient, "quotient '" + tok + "' out of range");
  return static_cast<unsigned>(v);
}

std::vector<unsigned> parse_list(const std::string& body) {
  std::vector<unsigned> out;
  std::string tok;
  std::istringstream in(body);
  while (std::getline(in, tok, ',')) out.push_back(parse_quotient(tok));
  if (!body.empty() && body.back() == ',')
    throw Error(errc::invalid_config, "trailing comma in frequency spec");
  return out;
}

std::string join(const std::vector<unsigned>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

ContinuedFraction ContinuedFraction::parse(const std::string& spec) {
  std::string s;
  s.reserve(spec.size());
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;

  if (s.rfind("per:", 0) == 0)
    return ContinuedFraction({}, parse_list(s.substr(4)));

  if (s.size() < 4 || s.front() != '[' || s.back() != ']' ||
      s.compare(1, 2, "0;") != 0)
    throw Error(errc::invalid_config, "unrecognized frequency spec '" + spec + "'");

  std::string body = s.substr(3, s.size() - 4);
  const std::size_t open = body.find('(');
  if (open == std::string::npos) {
    // a plain finite list describes no eventually periodic number
    throw Error(errc::unsupported_aperiodic,
                "frequency spec '" + spec + "' has no period group");
  }
  const std::size_t close = body.find(')', open);
  if (close == std::string::npos || close + 1 != body.size())
    throw Error(errc::invalid_config, "unbalanced period group in '" + spec + "'");

  std::string head = body.substr(0, open);
  if (!head.empty() && head.back() == ',') head.pop_back();
  std::string tail = body.substr(open + 1, close - open - 1);
  if (tail.empty())
    throw Error(errc::unsupported_aperiodic, "empty period group in '" + spec + "'");
  return ContinuedFraction(parse_list(head), parse_list(tail));
}

ContinuedFraction::ContinuedFraction(std::vector<unsigned> preperiod,
                                     std::vector<unsigned> period)
    : preperiod_(std::move(preperiod)), period_(std::move(period)) {
  if (period_.empty())
    throw Error(errc::unsupported_aperiodic,
                "only eventually periodic frequencies are supported");
  M_ = 1;
  for (unsigned a : preperiod_) M_ = std::max(M_, a);
  for (unsigned a : period_) M_ = std::max(M_, a);
  for (unsigned a : preperiod_)
    if (a == 0) throw Error(errc::invalid_quotient, "zero quotient");
  for (unsigned a : period_)
    if (a == 0) throw Error(errc::invalid_quotient, "zero quotient");
}

ContinuedFraction ContinuedFraction::truncated(std::vector<unsigned> quotients) {
  if (quotients.empty())
    throw Error(errc::invalid_config, "truncated frequency needs quotients");
  ContinuedFraction cf;
  cf.preperiod_ = std::move(quotients);
  cf.truncated_ = true;
  cf.M_ = 1;
  for (unsigned a : cf.preperiod_) {
    if (a == 0) throw Error(errc::invalid_quotient, "zero quotient");
    cf.M_ = std::max(cf.M_, a);
  }
  return cf;
}

unsigned ContinuedFraction::quotient(std::size_t k) const {
  if (k == 0)
    throw Error(errc::domain_violation, "quotient index starts at 1");
  const std::size_t idx = k - 1;
  if (idx < preperiod_.size()) return preperiod_[idx];
  if (truncated_)
    throw Error(errc::quotients_exhausted,
                "truncated frequency has only " +
                    std::to_string(preperiod_.size()) + " quotients");
  return period_[(idx - preperiod_.size()) % period_.size()];
}

ContinuedFraction::Convergent ContinuedFraction::convergent(long k) const {
  if (k < -1)
    throw Error(errc::domain_violation, "convergent index starts at -1");
  BigInt p_prev = 1, q_prev = 0;  // index -1
  BigInt p_cur = 0, q_cur = 1;    // index 0
  if (k == -1) return {-1, p_prev, q_prev};
  for (long j = 1; j <= k; ++j) {
    const BigInt a = quotient(static_cast<std::size_t>(j));
    BigInt p_next = a * p_cur + p_prev;
    BigInt q_next = a * q_cur + q_prev;
    p_prev = std::move(p_cur);
    q_prev = std::move(q_cur);
    p_cur = std::move(p_next);
    q_cur = std::move(q_next);
  }
  return {k, p_cur, q_cur};
}

Real ContinuedFraction::value() const {
  // |alpha - p_k/q_k| < 1/(q_k q_{k+1}) so stop once that product clears the
  // target precision with margin
  const BigInt bound = pow(BigInt(10), precision_digits() + 5);
  BigInt p_prev = 1, q_prev = 0;
  BigInt p_cur = 0, q_cur = 1;
  std::size_t k = 1;
  while (q_cur * q_prev <= bound) {
    if (truncated_ && k > preperiod_.size()) break;
    const BigInt a = quotient(k);
    BigInt p_next = a * p_cur + p_prev;
    BigInt q_next = a * q_cur + q_prev;
    p_prev = std::move(p_cur);
    q_prev = std::move(q_cur);
    p_cur = std::move(p_next);
    q_cur = std::move(q_next);
    ++k;
  }
  return Real(p_cur.str()) / Real(q_cur.str());
}

Real ContinuedFraction::growth_K() const {
  if (truncated_)
    throw Error(errc::unsupported_aperiodic,
                "growth constant needs an eventually periodic frequency");
  const bool uniform =
      std::all_of(period_.begin(), period_.end(),
                  [&](unsigned a) { return a == period_.front(); });
  if (uniform) return Real(period_.front());
  BigInt prod = 1;
  for (unsigned a : period_) prod *= a;
  return exp(log(Real(prod.str())) / Real(static_cast<unsigned>(period_.size())));
}

std::string ContinuedFraction::canonical() const {
  if (truncated_) return "trunc:" + join(preperiod_);
  std::string s = "[0;";
  if (!preperiod_.empty()) s += join(preperiod_) + ",";
  s += "(" + join(period_) + ")]";
  return s;
}

}  // namespace sturm
