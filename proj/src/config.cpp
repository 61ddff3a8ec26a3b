#include "sturmspec/config.hpp"

#include "sturmspec/cfrac.hpp"
#include "sturmspec/errors.hpp"
#include "sturmspec/real.hpp"
#include "sturmspec/tracemap.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

namespace sturm {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

unsigned long parse_ulong(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long n = std::stoul(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw Error(errc::invalid_config, "bad integer for " + key + ": " + v);
  }
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_failure, "cannot read config file " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw Error(errc::invalid_config,
                  path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key == "alpha")
      cfg.alpha = val;
    else if (key == "V")
      cfg.V = val;
    else if (key == "order")
      cfg.order = parse_ulong(key, val);
    else if (key == "precision_bits")
      cfg.precision_bits = static_cast<unsigned>(parse_ulong(key, val));
    else if (key == "bisect_rel_tol")
      cfg.bisect_rel_tol = val;
    else if (key == "threads")
      cfg.threads = static_cast<unsigned>(parse_ulong(key, val));
    else if (key == "cache")
      cfg.cache_path = val;
    else if (key == "seed")
      cfg.seed = parse_ulong(key, val);
    else
      throw Error(errc::invalid_config, path + ":" + std::to_string(lineno) +
                                            ": unknown key " + key);
  }
}

void validate(const RunConfig& cfg) {
  ContinuedFraction::parse(cfg.alpha);
  if (cfg.precision_bits < 64)
    throw Error(errc::invalid_config, "precision_bits must be at least 64");
  if (cfg.threads == 0)
    throw Error(errc::invalid_config, "threads must be positive");
  PrecisionGuard guard(cfg.precision_bits);
  // SpectralParams owns the coupling invariant (V > 20)
  SpectralParams params(real_from_serial(cfg.V), cfg.precision_bits);
  const Real tol = real_from_serial(cfg.bisect_rel_tol);
  if (!(tol > 0) || !(tol < 1))
    throw Error(errc::invalid_config, "bisect_rel_tol must lie in (0,1)");
}

std::uint64_t semantic_hash(const RunConfig& cfg) {
  // canonical decimal forms must not depend on the caller's precision
  PrecisionGuard guard(cfg.precision_bits > 256 ? cfg.precision_bits : 256);
  std::uint64_t h = 1469598103934665603ull;
  h = fnv1a(ContinuedFraction::parse(cfg.alpha).canonical(), h);
  h = fnv1a("|V=" + real_from_serial(cfg.V).str(40, std::ios_base::scientific),
            h);
  h = fnv1a("|bits=" + std::to_string(cfg.precision_bits), h);
  h = fnv1a("|tol=" + real_from_serial(cfg.bisect_rel_tol)
                          .str(40, std::ios_base::scientific),
            h);
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace sturm
