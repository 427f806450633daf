#include "sumprod/thickness.hpp"

#include <algorithm>

namespace sumprod::thick {

ThicknessWitness::ThicknessWitness(const model::Coloring& c, int target_class,
                                   long long scan_budget)
    : c_(c), target_(target_class), scan_budget_(scan_budget) {
  if (target_class != 0 && target_class != 1)
    throw std::invalid_argument("target class must be 0 or 1");
}

std::optional<long long> ThicknessWitness::request(const BigInt& bound,
                                                   long long floor_value) {
  WitnessQuery q;
  q.bound = bound;
  q.floor_value = floor_value;
  if (bound < 1) throw std::invalid_argument("witness bound must be >= 1");

  // Respect in-domain: every multiple f*a, f <= bound, must be <= hi.
  BigInt amax_big = big(c_.hi()) / bound;
  long long amax = std::min<long long>(
      c_.hi(), to_i64(amax_big).value_or(c_.hi()));
  long long astart = std::max(floor_value + 1, c_.lo());
  if (amax < astart) {
    q.domain_exhausted = true;
    queries_.push_back(q);
    return std::nullopt;
  }

  // Multiples above the other class's known ceiling are in the target class
  // by the coloring's own contract; only the low range needs checking.
  long long check_to_global = c_.hi();
  if (auto ub = c_.class_upper_bound(1 - target_)) check_to_global = *ub;

  long long fmax_full = to_i64(bound).value_or(c_.hi());
  long long budget = scan_budget_;
  for (long long a = astart; a <= amax; ++a) {
    ++q.candidates_tried;
    if (--budget < 0) {
      queries_.push_back(q);
      return std::nullopt;  // scan budget exhausted; logged as failure
    }
    long long fmax = std::min(fmax_full, check_to_global / a);
    bool ok = true;
    for (long long f = 1; f <= fmax; ++f) {
      if (--budget < 0) {
        queries_.push_back(q);
        return std::nullopt;  // scan budget exhausted; logged as failure
      }
      if (c_.color_of(f * a) != target_) {
        q.violation = {a, f};
        ok = false;
        break;
      }
    }
    if (ok && fmax == 0) {
      // whole multiple range sits above the other class's ceiling; still
      // require a itself to be in the class
      ok = c_.color_of(a) == target_;
      if (!ok) q.violation = {a, 1};
    }
    if (ok) {
      q.result = a;
      queries_.push_back(q);
      return a;
    }
  }
  queries_.push_back(q);
  return std::nullopt;
}

ThickEvidence is_thick(const model::Coloring& c, int cls, long long f_bound,
                       int min_runs, long long window) {
  if (f_bound < 1) throw std::invalid_argument("is_thick: f_bound >= 1");
  if (min_runs < 1) throw std::invalid_argument("is_thick: min_runs >= 1");
  long long hi = std::min(c.hi(), c.lo() + window - 1);
  ThickEvidence ev;
  ev.thick = true;
  for (long long f = 1; f <= f_bound; ++f) {
    ThickRun run;
    run.f = f;
    for (long long a = c.lo(); a <= hi / f; ++a) {
      bool ok = true;
      for (long long j = 1; j <= f; ++j)
        if (c.color_of(j * a) != cls) {
          ok = false;
          break;
        }
      if (ok) {
        run.a_values.push_back(a);
        if (static_cast<int>(run.a_values.size()) >= min_runs) break;
      }
    }
    bool enough = static_cast<int>(run.a_values.size()) >= min_runs;
    ev.runs.push_back(std::move(run));
    if (!enough) {
      ev.thick = false;
      ev.failed_f = f;
      break;
    }
  }
  return ev;
}

SyndeticEvidence is_syndetic(const model::Coloring& c, int cls, long long f_bound,
                             long long window) {
  if (f_bound < 1 || f_bound > 20)
    throw std::invalid_argument("is_syndetic: f_bound in [1,20]");
  long long hi = std::min(c.hi(), c.lo() + window - 1);
  SyndeticEvidence ev;
  // Subsets of [1..f_bound] in bitmask order; the first covering one is the
  // least reported.
  for (unsigned mask = 1; mask < (1u << f_bound); ++mask) {
    std::vector<long long> F;
    for (long long s = 1; s <= f_bound; ++s)
      if (mask & (1u << (s - 1))) F.push_back(s);
    bool covers = true;
    std::optional<long long> violator;
    for (long long m = c.lo(); m <= hi; ++m) {
      bool has_in_domain = false, covered = false;
      for (long long s : F) {
        if (m > hi / s) continue;  // multiple leaves the window
        has_in_domain = true;
        if (c.color_of(m * s) == cls) {
          covered = true;
          break;
        }
      }
      if (has_in_domain && !covered) {
        covers = false;
        violator = m;
        break;
      }
    }
    if (covers) {
      ev.syndetic = true;
      ev.covering = F;
      return ev;
    }
    ev.last_violator = violator;
  }
  return ev;
}

std::string to_string(ColoringClass k) {
  switch (k) {
    case ColoringClass::ThickClass0: return "thick-class-0";
    case ColoringClass::ThickClass1: return "thick-class-1";
    case ColoringClass::LocallyBalanced: return "locally-balanced";
    case ColoringClass::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Classification classify_coloring(const model::Coloring& c, long long f_bound,
                                 int min_runs, long long window) {
  Classification out;
  out.thick0 = is_thick(c, 0, f_bound, min_runs, window);
  out.thick1 = is_thick(c, 1, f_bound, min_runs, window);
  out.synd0 = is_syndetic(c, 0, std::min<long long>(f_bound, 8), window);
  out.synd1 = is_syndetic(c, 1, std::min<long long>(f_bound, 8), window);
  if (out.thick0.thick && out.thick1.thick) {
    out.label = ColoringClass::ThickClass0;
    out.note = "both classes pass the thickness test; labeling by class 0";
  } else if (out.thick0.thick) {
    out.label = ColoringClass::ThickClass0;
  } else if (out.thick1.thick) {
    out.label = ColoringClass::ThickClass1;
  } else if (out.synd0.syndetic && out.synd1.syndetic) {
    out.label = ColoringClass::LocallyBalanced;
    out.note = "no thick class; both classes syndetic in the window";
  } else {
    out.label = ColoringClass::Inconclusive;
    out.note = "no thick class; syndeticity split " +
               std::to_string(out.synd0.syndetic) + "/" +
               std::to_string(out.synd1.syndetic);
  }
  return out;
}

}  // namespace sumprod::thick
