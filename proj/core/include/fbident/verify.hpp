#pragma once

#include <cstdint>
#include <iosfwd>

namespace fbident {

struct VerifyOptions {
  std::uint64_t seed = 1;

  // Self-test hook: swaps two polyphase components inside the polyphase
  // synthesis route so the noble-identity check must detect the corruption.
  bool inject_polyphase_fault = false;
};

/// Runs the randomized cross-representation equivalence suite (noble
/// identity, serialization round trip, streamed/blocked model equivalence,
/// periodic-system blocking, recursive/batch least squares agreement),
/// printing one PASS/FAIL line per property. Deterministic given the seed.
/// Returns true when every property holds.
bool run_verification(const VerifyOptions& options, std::ostream& out);

}  // namespace fbident
