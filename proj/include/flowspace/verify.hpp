#pragma once

// Randomized verification suites. Every suite draws its instances from a
// seeded Rng and checks the library's computed answers against independent
// brute-force recomputations, so a passing report certifies behaviour on a
// reproducible sample rather than on hand-picked examples. run_suite returns
// a JSON report whose bytes depend only on (suite, seed, count).

#include <cstdint>
#include <string>
#include <vector>

#include "flowspace/flows.hpp"
#include "flowspace/json_io.hpp"
#include "flowspace/reedy.hpp"
#include "flowspace/rng.hpp"
#include "flowspace/set_diagrams.hpp"

namespace flowspace {

// A base flow together with a compatible glob attachment, as drawn for the
// pushout corpus. Generation retries until the attached flow is loop-free.
struct CorpusInstance {
  DiscreteFlow a;
  GlobAttachment att;
};

CorpusInstance random_corpus_instance(Rng& rng, int maxStates = 5, int maxPaths = 20,
                                      int maxCells = 4, int maxBoundary = 2);

// A chain of flows connected by injective-on-paths flow maps, built by
// repeatedly extending a small seed flow with fresh states and attachments.
struct TowerChain {
  std::vector<DiscreteFlow> flows;
  std::vector<FlowMap> maps;
};

TowerChain random_tower(Rng& rng, int steps);

// A random functorial diagram over a random forest-shaped poset (parent
// covers plus their forced composites), for colimit law checks.
SetDiagram random_set_diagram(Rng& rng, int maxObjects, int maxSize);

// Checks both latching constructions and the relative latching dichotomy on
// every support object of the instance. Returns "" on success, otherwise a
// one-line witness naming the first object that broke a law.
std::string latching_laws_witness(const DiscreteFlow& a, const GlobAttachment& att);

// Exhaustive check of one degree-capped truncation: order axioms of leq,
// agreement with raw generator reachability, cover/degree discipline, the
// generator relations, simplify confluence, latching/matching category
// shapes, and canonical factorization of every related pair. Returns "" on
// success, otherwise a one-line witness. objectsOut/relatedOut, when given,
// receive the truncation size and the number of related pairs.
std::string poset_truncation_witness(const PosetContext& ctx, int maxDegree,
                                     long* objectsOut = nullptr, long* relatedOut = nullptr);

// Scan of every related pair in a truncation for factorization middles that
// are not unique. Collisions occur only in u = v contexts; see factorize().
struct MiddleUniqueness {
  long relatedPairs = 0;
  long nonUnique = 0;
  std::string witness;  // first offending pair, empty when nonUnique == 0
};
MiddleUniqueness middle_uniqueness(const PosetContext& ctx, int maxDegree);

struct SuiteResult {
  Json report;
  int failures = 0;
};

// suite is one of "poset", "diagrams", "pushout", "moore", "all".
SuiteResult run_suite(const std::string& suite, std::uint64_t seed, int count);

}  // namespace flowspace
