#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumprod/bigint.hpp"
#include "sumprod/errors.hpp"

namespace sumprod::model {

enum class Distinctness { None, Vars, Values };

std::string to_string(Distinctness d);

// One monomial summand: coeff * prod(param^e) * prod(var^e).
// Exponent lists are sorted by name and omit zero exponents.
struct Term {
  long long coeff = 1;
  std::vector<std::pair<std::string, int>> param_exp;
  std::vector<std::pair<std::string, int>> var_exp;
};

struct Form {
  std::vector<Term> terms;
  std::string source;  // original expression text, for diagnostics
};

// A configuration family: a finite list of positive polynomial forms over
// named variables, e.g. {x, y, x*y, x+n*y}. Parameters stay symbolic until
// bound.
struct Template {
  std::string name;
  std::vector<std::string> vars;
  std::vector<std::string> params;
  std::vector<Form> forms;
  Distinctness distinct = Distinctness::None;
  long long min_value = 1;
};

// Line-oriented template source ('#' comments):
//   template <name>
//   vars <v1> <v2> ...
//   params <p1> ...            (optional)
//   forms <expr>; <expr>; ...
//   distinct none|vars|values  (optional)
//   min <k>                    (optional)
// expr ::= sum of products of integer literals, parameters and variables,
// with '*' and '^'. Throws ParseError with position on bad input.
Template parse_template(const std::string& text);
Template load_template(const std::string& path);

using ParamMap = std::map<std::string, long long>;

// Template with parameters substituted away; forms become integer-coefficient
// monomials indexed by variable position.
struct ResolvedTerm {
  long long coeff;
  std::vector<std::pair<int, int>> var_exp;  // (variable index, exponent)
};
struct ResolvedForm {
  std::vector<ResolvedTerm> terms;
  std::string source;
};

struct ResolvedTemplate {
  std::string name;
  std::vector<std::string> vars;
  Distinctness distinct = Distinctness::None;
  long long min_value = 1;
  std::vector<ResolvedForm> forms;
  ParamMap bound_params;
  // Variable permutations under which the multiset of forms is invariant
  // (identity excluded). Enumeration only emits orbit-minimal assignments.
  std::vector<std::vector<int>> symmetries;
};

// Binds every declared parameter (values >= 1) and derives the symmetry
// group syntactically from the normalized forms.
ResolvedTemplate bind_template(const Template& t, const ParamMap& params);

struct Assignment {
  std::vector<long long> values;  // by variable index; all >= min_value
};

// Realized point set of one instance: sorted, deduplicated, exact.
struct InstanceValues {
  std::vector<BigInt> values;
};

// Exact evaluation of every form at `a`, deduplicated and sorted.
// Throws PolicyError if `a` violates min_value or the distinctness policy.
InstanceValues instantiate(const ResolvedTemplate& t, const Assignment& a);

BigInt eval_form(const ResolvedForm& f, const std::vector<long long>& vals);

// Overflow-checked evaluation that gives up as soon as the value is known to
// exceed `hi`. All coefficients are positive, so partial sums are monotone.
std::optional<long long> eval_form_within(const ResolvedForm& f,
                                          const std::vector<long long>& vals,
                                          long long hi);

struct Instance {
  Assignment assignment;
  std::vector<long long> values;  // sorted, dedup, all within [lo,hi]
};

inline constexpr std::size_t kDefaultInstanceCap = 5'000'000;

// All instances whose full value set lies in [lo,hi], one per symmetry orbit,
// in lexicographic assignment order. Deterministic.
std::vector<Instance> enumerate_instances(const ResolvedTemplate& t,
                                          long long lo, long long hi,
                                          std::size_t cap = kDefaultInstanceCap);

// Restartable cursor over enumerate_instances.
class InstanceStream {
 public:
  InstanceStream(const ResolvedTemplate& t, long long lo, long long hi,
                 std::size_t cap = kDefaultInstanceCap)
      : items_(enumerate_instances(t, lo, hi, cap)) {}
  std::optional<Instance> next() {
    if (pos_ >= items_.size()) return std::nullopt;
    return items_[pos_++];
  }
  void reset() { pos_ = 0; }

 private:
  std::vector<Instance> items_;
  std::size_t pos_ = 0;
};

// Built-in tower family {x_i, prod_{j<=i} x_j, sum x_j : i <= n} with
// pairwise-distinct variables, used by the extractor's shape checks.
Template make_tower_template(int n);

}  // namespace sumprod::model
