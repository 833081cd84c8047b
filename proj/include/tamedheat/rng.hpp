#pragma once

#include <cstdint>

namespace tamedheat {

// Counter-based generation: every random number is a pure function of
// (seed, counters), so disjoint index ranges can be generated independently,
// in any order, on any thread, with identical results.

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit hash of a (seed, i, j) cell key; two chained finalizer rounds.
inline std::uint64_t cell_hash(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  const std::uint64_t a = mix64(seed ^ (i * 0xa24baed4963ee407ULL));
  return mix64(a ^ (j * 0x9fb21c651e98df25ULL));
}

/// Uniform in the open interval (0,1), 53 significant bits.
inline double to_unit_open(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

/// Inverse of the standard normal CDF, algorithm AS 241 (Wichura 1988),
/// accurate to full double precision.
double inverse_normal_cdf(double p);

/// Standard normal draw for cell (i, j) under the given seed.
inline double standard_normal(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  return inverse_normal_cdf(to_unit_open(cell_hash(seed, i, j)));
}

// Seed derivation constants. Replica seeds are a pure function of the master
// seed and the replica index, so extending a campaign never changes the
// replicas already run.
inline constexpr std::uint64_t kReplicaStreamSalt = 0xd6e8feb86659fd93ULL;
inline constexpr std::uint64_t kPilotStreamSalt = 0x2545f4914f6cdd1dULL;

inline std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) {
  return mix64(mix64(master ^ kReplicaStreamSalt) + (replica + 1) * 0x9e3779b97f4a7c15ULL);
}

inline std::uint64_t pilot_seed(std::uint64_t master, std::uint64_t replica) {
  return replica_seed(master ^ kPilotStreamSalt, replica);
}

}  // namespace tamedheat
