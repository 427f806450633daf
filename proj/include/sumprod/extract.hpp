#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sumprod/bigint.hpp"
#include "sumprod/coloring.hpp"
#include "sumprod/thickness.hpp"

namespace sumprod::extract {

// Squares: bound products n^2 a_0^2 ... a_i^2 (the {x,y,xy,x+ny} walk).
// Powers:  bound products a_0^n ... a_i^n  (the tower walk).
enum class LadderVariant { Squares, Powers };

// a_0 < a_1 < ... with [1..bounds[i]] * entries[i+1] inside the target
// class, each step revalidated by a direct scan.
struct Ladder {
  LadderVariant variant = LadderVariant::Squares;
  long long n = 1;
  std::vector<long long> entries;
  std::vector<BigInt> bounds;  // bounds[i] governs entries[i+1]
  bool complete = false;
  int failed_step = -1;        // first missing entry index when incomplete
  std::string exhaustion;      // why the build stopped
};

struct LadderResult {
  Ladder ladder;
  bool witness_failed = false;   // scan gave up inside the class
  bool domain_exhausted = false; // no candidate fits in the domain
};

// Builds a_0..a_depth. a_0 is the least class element above max(n, floor).
// Each step asks the witness for the least valid a and rechecks the
// containment directly. Partial ladders are returned, not thrown.
LadderResult build_ladder(thick::ThicknessWitness& w, long long n, int depth,
                          LadderVariant variant, long long floor_value = 1);

struct TraceEntry {
  std::string point;  // "(1)", "(2)", ..., "(6)"
  std::string what;   // expression text, e.g. "a2 + 2*a0"
  BigInt value;
  int color;
  bool holds;  // the "we may assume" held (walk continued)
};

struct Extraction {
  std::string mode;  // "xny" or "tower"
  long long n = 1;
  std::vector<BigInt> assignment;     // (x,y) or x_1..x_n in template order
  std::vector<BigInt> configuration;  // sorted, deduplicated values
  int color = 0;
  std::vector<TraceEntry> trace;
  Ladder ladder;
};

enum class FailureKind { WitnessFailure, ScaleExhaustion, OutOfDomain, CaseExhausted };

std::string to_string(FailureKind k);

struct ExtractionFailure {
  FailureKind kind;
  std::string detail;
  std::vector<TraceEntry> trace;
  Ladder ladder;
};

using ExtractOutcome = std::variant<Extraction, ExtractionFailure>;

inline bool succeeded(const ExtractOutcome& o) {
  return std::holds_alternative<Extraction>(o);
}

// Walks the six-point case analysis for {x, y, xy, x+ny}: every "we may
// assume" is tested against the coloring; the first failed assumption names
// the configuration. Needs a squares-variant ladder a_0..a_4.
ExtractOutcome extract_xy_xny(thick::ThicknessWitness& w, long long n,
                              long long floor_value = 1);

// Tower walk for {x_i, prod_{j<=i} x_j, sum x_j}: six points over index
// sets, powers-variant ladder. The walk proceeds with however many ladder
// entries fit the domain and reports scale exhaustion only when a stage
// actually needs missing entries. All returned x_i are distinct and above
// floor_value.
ExtractOutcome extract_tower(thick::ThicknessWitness& w, long long n,
                             long long floor_value = 1);

// Recomputes every trace entry's color against the coloring.
bool replay_trace(const model::Coloring& c, const std::vector<TraceEntry>& trace);

// Shape + monochromaticity recheck of a finished extraction.
bool verify_extraction(const model::Coloring& c, const Extraction& e);

}  // namespace sumprod::extract
