#include "seisdiag/util.hpp"
#include "seisdiag/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace seisdiag {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSignal: return "InvalidSignal";
    case ErrorKind::ChannelMismatch: return "ChannelMismatch";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ClassError: return "ClassError";
    case ErrorKind::EmptyReport: return "EmptyReport";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateDataset: return "DegenerateDataset";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

namespace {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
} // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  // Modulo bias is < 2^-50 for the sizes used here.
  return next_u64() % n;
}

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  std::uint64_t x = splitmix64(s);
  s = x ^ (a * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL);
  x = splitmix64(s);
  s = x ^ (b * 0xbf58476d1ce4e5b9ULL + 0x133111ebULL);
  return splitmix64(s);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double value) {
  // Shortest representation that parses back to the same double.
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  return buf;
}

std::string to_hex(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

} // namespace seisdiag
