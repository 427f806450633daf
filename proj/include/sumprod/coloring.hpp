#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sumprod/bigint.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/template.hpp"

namespace sumprod::model {

// A 2-coloring of [lo,hi]: either an explicit bit vector or a named pure
// rule. Class labels are 0 and 1. Immutable after construction.
class Coloring {
 public:
  using RuleParams = std::map<std::string, long long>;

  static Coloring explicit_bits(long long lo, std::vector<bool> bits);
  static Coloring from_rule(const std::string& name, const RuleParams& params,
                            long long lo, long long hi);
  // "file:<path>" or "rule:<name>[:k=v,...]"; lo/hi apply to rules only.
  static Coloring parse_spec(const std::string& spec, long long lo = 0,
                             long long hi = 0);
  static Coloring load(const std::string& path);

  long long lo() const { return lo_; }
  long long hi() const { return hi_; }
  long long size() const { return hi_ - lo_ + 1; }

  int color_of(long long v) const;        // throws DomainError outside [lo,hi]
  int color_of(const BigInt& v) const;

  std::optional<int> monochromatic_color(const InstanceValues& vals) const;
  std::optional<int> monochromatic_color(const std::vector<long long>& vals) const;

  bool is_explicit() const { return rule_name_.empty(); }
  // "explicit" or "rule:<name>:<k=v,...>" (params in sorted order).
  std::string describe() const;

  // Largest member the class can have, when the rule knows its class `cls`
  // is bounded above: every v in (bound, hi] has the other color. nullopt
  // when no such bound is known.
  std::optional<long long> class_upper_bound(int cls) const;

  // View of the same coloring restricted to [lo2, hi2] (must be nested).
  Coloring restricted(long long lo2, long long hi2) const;

  // File format: line 1 "lo hi", line 2 a '0'/'1' string of length hi-lo+1.
  std::string to_file_string() const;  // explicit colorings only
  void save(const std::string& path) const;

 private:
  Coloring() = default;
  int rule_color(long long v) const;

  long long lo_ = 1, hi_ = 1;
  std::vector<bool> bits_;  // explicit form; empty for rules
  std::string rule_name_;
  RuleParams rule_params_;
  // Precomputed noise geometry for the "blocks" rule.
  std::vector<std::pair<long long, long long>> noise_blocks_;  // [start,end)
  std::vector<long long> noise_points_;
  int noise_class_ = 1;
};

// Parses "k=v,k=v" rule parameter lists.
Coloring::RuleParams parse_rule_params(const std::string& text);

}  // namespace sumprod::model
