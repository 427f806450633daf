#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sumprod/bigint.hpp"
#include "sumprod/coloring.hpp"

namespace sumprod::thick {

// One answered multiplicative-thickness request: find the least a > floor in
// the target class with [1..bound]*a entirely in the class and in-domain.
struct WitnessQuery {
  BigInt bound;
  long long floor_value = 0;
  std::optional<long long> result;
  long long candidates_tried = 0;
  // first violation seen for the last rejected candidate: (a, multiplier)
  std::optional<std::pair<long long, long long>> violation;
  bool domain_exhausted = false;  // no candidate fits bound*a <= hi
};

// Finite thickness witness: scans the coloring's domain for the least valid
// a. Failure is an explicit, reportable outcome. All queries are logged.
class ThicknessWitness {
 public:
  ThicknessWitness(const model::Coloring& c, int target_class,
                   long long scan_budget = 200'000);

  // F = [1..bound]; returns least valid a > floor or nullopt (details in the
  // query log).
  std::optional<long long> request(const BigInt& bound, long long floor_value);

  const std::vector<WitnessQuery>& queries() const { return queries_; }
  int target_class() const { return target_; }
  const model::Coloring& coloring() const { return c_; }

 private:
  const model::Coloring& c_;
  int target_;
  long long scan_budget_;
  std::vector<WitnessQuery> queries_;
};

struct ThickRun {
  long long f;                     // F = [1..f]
  std::vector<long long> a_values; // the witnesses found (up to min_runs)
};

struct ThickEvidence {
  bool thick = false;
  std::vector<ThickRun> runs;
  long long failed_f = 0;  // smallest f with too few witnesses (when !thick)
};

// True iff for every F=[1..f], f <= f_bound, at least min_runs distinct a
// satisfy F*a inside the class (and the domain window).
ThickEvidence is_thick(const model::Coloring& c, int cls, long long f_bound,
                       int min_runs, long long window = 100'000);

struct SyndeticEvidence {
  bool syndetic = false;
  std::vector<long long> covering;          // least F (by subset bitmask order)
  std::optional<long long> last_violator;   // m with no covering dilate
};

// True iff some F inside [1..f_bound] covers the window: every m that has an
// in-domain multiple m*s must have one inside the class. Returns the least
// such F in subset bitmask order.
SyndeticEvidence is_syndetic(const model::Coloring& c, int cls, long long f_bound,
                             long long window = 100'000);

enum class ColoringClass { ThickClass0, ThickClass1, LocallyBalanced, Inconclusive };

std::string to_string(ColoringClass k);

struct Classification {
  ColoringClass label = ColoringClass::Inconclusive;
  ThickEvidence thick0, thick1;
  SyndeticEvidence synd0, synd1;
  std::string note;
};

// Applies the finite detectors to both classes over a window of the domain.
Classification classify_coloring(const model::Coloring& c, long long f_bound = 5,
                                 int min_runs = 3, long long window = 100'000);

}  // namespace sumprod::thick
