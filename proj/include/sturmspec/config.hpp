#pragma once

#include <cstdint>
#include <string>

namespace sturm {

// One batch run, fully described. Numeric fields that feed the multiprecision
// pipeline stay as decimal strings until a precision is in force.
struct RunConfig {
  std::string alpha = "per:1";
  std::string V = "24";
  unsigned long order = 8;
  unsigned precision_bits = 192;
  std::string bisect_rel_tol = "1e-30";
  unsigned threads = 1;
  std::string cache_path;
  std::uint64_t seed = 0;
};

// Overlays key=value lines onto cfg ('#' comments and blank lines skipped).
// Recognized keys mirror the RunConfig fields; anything else is rejected.
void load_config_file(const std::string& path, RunConfig& cfg);

// Rejects configurations the pipeline cannot honor (coupling at or below 20,
// precision under 64 bits, malformed numerics, zero threads).
void validate(const RunConfig& cfg);

// Order-independent digest of the fields that determine every emitted number
// (frequency in normal form, coupling, precision, bisection tolerance).
// Band dumps carry it so stale caches are detected instead of reused.
std::uint64_t semantic_hash(const RunConfig& cfg);

std::string hash_hex(std::uint64_t h);

}  // namespace sturm
