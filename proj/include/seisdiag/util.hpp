#ifndef SEISDIAG_UTIL_HPP
#define SEISDIAG_UTIL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace seisdiag {

// Deterministic RNG used everywhere in the project. All draws go through the
// explicit helpers below so results do not depend on the standard library's
// distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Raw 64-bit draw (splitmix64).
  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal via Box-Muller (no cached spare, two draws per call).
  double normal();

private:
  std::uint64_t state_;
};

/// Stable 64-bit mix of (seed, a, b), used to derive per-record seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

/// FNV-1a over a byte string; used for config hashes embedded in provenance.
std::uint64_t fnv1a(const std::string& bytes);

/// Deterministic in-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(v[i - 1], v[j]);
  }
}

/// Shortest decimal form that round-trips the double (used for all CSV/report
/// float output so reruns are byte-identical).
std::string format_double(double value);

/// Fixed-point percentage with one decimal, e.g. "83.1".
std::string format_percent(double value);

std::string to_hex(std::uint64_t value);

} // namespace seisdiag

#endif
