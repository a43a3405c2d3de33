#pragma once

#include <cstdint>
#include <string>

namespace etcsim {

// Randomized property suites behind the `lemmas` CLI subcommand: Laplacian
// spectrum facts, the basis-shift bound, the signal-chain bounds on a short
// golden run, and the projection invariants.
struct LemmaSuiteReport {
  bool all_pass = false;
  std::string text;  // one PASS/FAIL line per property
};

LemmaSuiteReport run_lemma_suites(std::uint64_t seed);

}  // namespace etcsim
