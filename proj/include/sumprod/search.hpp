#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sumprod/coloring.hpp"
#include "sumprod/template.hpp"

namespace sumprod::search {

struct Budget {
  long long max_nodes = 100'000'000;
  double max_seconds = 600.0;
};

struct Options {
  Budget budget;
  bool fix_first_color = true;  // symmetry breaking: first element gets color 0
  int threads = 1;
};

enum class Verdict { Forced, Avoidable, Inconclusive };

std::string to_string(Verdict v);

// Attestation of one forcing decision. avoidable always carries a witness
// that re-verifies; forced carries none.
struct Certificate {
  std::string template_name;
  model::ParamMap params;
  long long lo = 1, n = 1;
  Verdict verdict = Verdict::Inconclusive;
  long long nodes = 0;
  long long propagations = 0;
  std::optional<model::Coloring> witness;
  std::string note;  // e.g. degenerate singleton instance
  std::string engine_version;
  std::string mode;  // "sequential" or "parallel:<threads>"
};

struct ThresholdEntry {
  long long n;
  Verdict verdict;
  long long nodes;
  bool via_hint;  // avoidability shown by extending the previous witness
};

struct ThresholdReport {
  std::string template_name;
  model::ParamMap params;
  long long lo = 1, max_n = 1;
  std::optional<long long> n_star;  // empty: exceeds max_n or inconclusive
  bool inconclusive = false;        // budget ran out at some N
  std::optional<model::Coloring> witness;  // at n_star-1 (or max_n), lex-least
  std::vector<ThresholdEntry> per_n;
  std::string engine_version;
};

// Decides whether every 2-coloring of [lo,n] contains a monochromatic
// instance. Backtracking over integers in increasing order with unit
// propagation (two watched values per instance per polarity). Sequential
// mode returns the lexicographically least witness.
Certificate forced(const model::ResolvedTemplate& t, long long lo, long long n,
                   const Options& opt = {});

// Witness side of forced(): the least avoiding coloring, or nullopt.
std::optional<model::Coloring> find_witness(const model::ResolvedTemplate& t,
                                            long long lo, long long n,
                                            const Options& opt = {});

// Minimal forcing N* <= max_n, walking N upward (forced is monotone in N).
ThresholdReport threshold(const model::ResolvedTemplate& t, long long lo,
                          long long max_n, const Options& opt = {});

// True iff no instance enumerated over the coloring's domain is
// monochromatic. Full enumeration; independent of the search structures.
bool verify_witness(const model::ResolvedTemplate& t, const model::Coloring& c);

}  // namespace sumprod::search
