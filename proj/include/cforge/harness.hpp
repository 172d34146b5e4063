#pragma once

#include <string>
#include <vector>

#include "cforge/common.hpp"
#include "cforge/ideals.hpp"
#include "cforge/topology.hpp"

namespace cforge {

// Resolved configuration of a lemma run; embedded in certificate provenance.
struct LemmaConfig {
  std::string ideal = "fin";
  uint64_t seed = 42;
  Bounds bounds;

  Json to_json() const;
  static LemmaConfig from_json(const Json& j);
};

struct LemmaRun {
  std::string id;
  LemmaConfig config;
  Certificate outcome;

  Json to_json() const;
  static LemmaRun from_json(const Json& j);
};

// Registered lemma ids, in suite order.
const std::vector<std::string>& lemma_ids();

// Executes the operations mapped to the id with the configured probe family
// and aggregates a single certificate.  Deterministic: identical (id, config)
// yields byte-identical certificates.
LemmaRun run_lemma(const std::string& id, const LemmaConfig& config);

// Runs every registered lemma; parallel when `threads` > 1, with results
// collated in registry order.  threads = 0 reads CANTOR_FORGE_THREADS.
std::vector<LemmaRun> run_all(const LemmaConfig& config, unsigned threads = 0);

// Re-checks every replayable evidence item without search; false on any
// mismatch or unknown item shape.  Items that only summarize a bounded scan
// are validated structurally (their inline witnesses are what replays).
bool replay(const Certificate& cert);

// Markdown summary table.
std::string report_markdown(const std::vector<LemmaRun>& runs);

// Effective parallelism from CANTOR_FORGE_THREADS (>= 1).
unsigned configured_threads();

}  // namespace cforge
