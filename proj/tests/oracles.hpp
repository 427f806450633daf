// Test-only oracles, kept independent of the engine code paths they check:
// plain nested loops, bitmask enumeration of colorings, direct evaluation.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sumprod/coloring.hpp"
#include "sumprod/template.hpp"

namespace oracle {

using sumprod::BigInt;
using sumprod::big;
namespace model = sumprod::model;

// ---- independent form evaluation ---------------------------------------

inline BigInt eval(const model::ResolvedForm& f, const std::vector<long long>& a) {
  BigInt total = 0;
  for (const auto& t : f.terms) {
    BigInt term = big(t.coeff);
    for (auto [vi, e] : t.var_exp)
      for (int i = 0; i < e; ++i) term *= big(a[vi]);
    total += term;
  }
  return total;
}

inline std::vector<BigInt> values_of(const model::ResolvedTemplate& t,
                                     const std::vector<long long>& a) {
  std::vector<BigInt> v;
  for (const auto& f : t.forms) v.push_back(eval(f, a));
  return v;
}

// ---- nested-loop instance enumeration ----------------------------------

struct OracleInstance {
  std::vector<long long> assignment;
  std::vector<long long> values;  // sorted dedup
};

inline bool policy_ok(const model::ResolvedTemplate& t,
                      const std::vector<long long>& a,
                      const std::vector<BigInt>& vals) {
  if (t.distinct == model::Distinctness::Vars) {
    std::set<long long> s(a.begin(), a.end());
    if (s.size() != a.size()) return false;
  }
  if (t.distinct == model::Distinctness::Values) {
    std::set<BigInt> s(vals.begin(), vals.end());
    if (s.size() != vals.size()) return false;
  }
  return true;
}

// Every assignment of [min..hi]^n, filtered to value sets inside [lo,hi];
// grouped into orbits under the semantic symmetry group (permutations that
// preserve the value multiset for every grid assignment); lex-min emitted.
inline std::vector<OracleInstance> enumerate(const model::ResolvedTemplate& t,
                                             long long lo, long long hi) {
  int n = static_cast<int>(t.vars.size());
  std::vector<std::vector<long long>> grid;
  std::vector<long long> cur(n, 0);
  auto rec = [&](auto&& self, int k) -> void {
    if (k == n) {
      grid.push_back(cur);
      return;
    }
    for (long long v = t.min_value; v <= hi; ++v) {
      cur[k] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);

  auto in_range = [&](const std::vector<BigInt>& vals) {
    for (const auto& v : vals)
      if (v < big(lo) || v > big(hi)) return false;
    return true;
  };

  // semantic symmetry group over the full grid
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    while (std::next_permutation(p.begin(), p.end())) {
      bool sym = true;
      for (const auto& a : grid) {
        std::vector<long long> b(n);
        for (int i = 0; i < n; ++i) b[p[i]] = a[i];
        auto va = values_of(t, a);
        auto vb = values_of(t, b);
        std::sort(va.begin(), va.end());
        std::sort(vb.begin(), vb.end());
        if (va != vb) {
          sym = false;
          break;
        }
      }
      if (sym) perms.push_back(p);
    }
  }

  std::vector<OracleInstance> out;
  for (const auto& a : grid) {
    auto vals = values_of(t, a);
    if (!in_range(vals) || !policy_ok(t, a, vals)) continue;
    bool minimal = true;
    for (const auto& p : perms) {
      std::vector<long long> b(n);
      for (int i = 0; i < n; ++i) b[p[i]] = a[i];
      if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()))
        minimal = false;
    }
    if (!minimal) continue;
    std::set<long long> dd;
    for (const auto& v : vals) dd.insert(v.get_si());
    out.push_back({a, {dd.begin(), dd.end()}});
  }
  return out;
}

// ---- bitmask coloring search --------------------------------------------

// Deduplicated value-set masks over [lo,hi], bit i = integer lo+i.
inline std::vector<unsigned long long> value_masks(const model::ResolvedTemplate& t,
                                                   long long lo, long long hi) {
  std::set<unsigned long long> masks;
  for (const auto& inst : enumerate(t, lo, hi)) {
    unsigned long long m = 0;
    for (long long v : inst.values) m |= 1ull << (v - lo);
    masks.insert(m);
  }
  return {masks.begin(), masks.end()};
}

// Least avoiding coloring as a bitmask (bit i = color of lo+i), or nullopt.
inline std::optional<unsigned long long> least_witness(
    const std::vector<unsigned long long>& masks, int bits) {
  for (unsigned long long col = 0; col < (1ull << bits); ++col) {
    bool ok = true;
    for (unsigned long long m : masks) {
      unsigned long long x = col & m;
      if (x == m || x == 0) {
        ok = false;
        break;
      }
    }
    if (ok) return col;
  }
  return std::nullopt;
}

inline std::string mask_bits(unsigned long long col, int bits) {
  std::string s;
  for (int i = 0; i < bits; ++i) s += (col >> i) & 1 ? '1' : '0';
  return s;
}

// ---- naive CNF satisfiability -------------------------------------------

// Clauses as literal lists; satisfiability by full assignment enumeration.
inline bool cnf_satisfiable(int vars, const std::vector<std::vector<int>>& clauses) {
  for (unsigned long long asg = 0; asg < (1ull << vars); ++asg) {
    bool ok = true;
    for (const auto& cl : clauses) {
      bool sat = false;
      for (int lit : cl) {
        int v = lit > 0 ? lit : -lit;
        bool val = (asg >> (v - 1)) & 1;
        if ((lit > 0) == val) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// ---- structure searches ---------------------------------------------------

// Plain recursive candidate generation in flattened lexicographic order,
// full value check per candidate (short-circuiting the scan on the first
// hit keeps it the least solution).
struct OracleStructureResult {
  int color;
  std::vector<std::vector<long long>> blocks;
};

inline BigInt pos_value(const std::vector<std::vector<long long>>& blocks,
                        const std::vector<long long>& F) {
  BigInt prod = 1;
  for (const auto& b : blocks) {
    BigInt sum = 0;
    bool meets = false;
    for (long long x : b)
      if (std::find(F.begin(), F.end(), x) != F.end()) {
        sum += big(x);
        meets = true;
      }
    if (meets) prod *= sum;
  }
  return prod;
}

// checks all nonempty F; color hypothesis fixed
inline bool structure_ok(const model::Coloring& c,
                         const std::vector<std::vector<long long>>& blocks,
                         bool bichromatic, int i) {
  std::vector<long long> flat;
  for (const auto& b : blocks) flat.insert(flat.end(), b.begin(), b.end());
  for (unsigned mask = 1; mask < (1u << flat.size()); ++mask) {
    std::vector<long long> F;
    for (std::size_t j = 0; j < flat.size(); ++j)
      if (mask & (1u << j)) F.push_back(flat[j]);
    BigInt v = pos_value(blocks, F);
    auto v64 = sumprod::to_i64(v);
    if (!v64 || *v64 < c.lo() || *v64 > c.hi()) return false;
    int want = i;
    if (bichromatic) {
      bool meets0 = false;
      for (long long x : F)
        if (std::find(blocks[0].begin(), blocks[0].end(), x) != blocks[0].end())
          meets0 = true;
      want = meets0 ? i : 1 - i;
    }
    if (c.color_of(*v64) != want) return false;
  }
  return true;
}

inline std::optional<OracleStructureResult> find_structure(
    const model::Coloring& c, const std::vector<int>& sizes, bool bichromatic,
    int size0) {
  std::vector<int> all_sizes;
  if (bichromatic) all_sizes.push_back(size0);
  all_sizes.insert(all_sizes.end(), sizes.begin(), sizes.end());

  std::vector<std::vector<long long>> blocks(all_sizes.size());
  std::vector<long long> used;
  std::optional<OracleStructureResult> found;

  auto rec = [&](auto&& self, std::size_t b, int pos) -> bool {
    if (b == all_sizes.size()) {
      for (int i = 0; i < 2; ++i)
        if (structure_ok(c, blocks, bichromatic, i)) {
          found = OracleStructureResult{i, blocks};
          return true;
        }
      return false;
    }
    if (pos == all_sizes[b]) return self(self, b + 1, 0);
    long long start = pos == 0 ? c.lo() : blocks[b].back() + 1;
    for (long long e = start; e <= c.hi(); ++e) {
      if (std::find(used.begin(), used.end(), e) != used.end()) continue;
      blocks[b].push_back(e);
      used.push_back(e);
      if (self(self, b, pos + 1)) return true;
      blocks[b].pop_back();
      used.pop_back();
    }
    return false;
  };
  rec(rec, 0, 0);
  return found;
}

// ---- vdw scan -------------------------------------------------------------

// FS via recursive doubling (different route than the engine's bitmasks).
inline void fs_rec(const std::vector<long long>& s, std::size_t i, long long acc,
                   std::set<long long>& out) {
  if (i == s.size()) {
    if (acc > 0) out.insert(acc);
    return;
  }
  fs_rec(s, i + 1, acc, out);
  fs_rec(s, i + 1, acc + s[i], out);
}

inline std::optional<long long> vdw_step(const std::vector<long long>& A,
                                         const std::vector<long long>& S, int k,
                                         double tau, long long lo, long long hi) {
  std::set<long long> fs;
  fs_rec(S, 0, 0, fs);
  std::set<long long> in_a(A.begin(), A.end());
  for (long long d : fs) {
    long long count = 0;
    for (long long m : A) {
      bool all = true;
      for (int i = 1; i <= k; ++i) {
        long long x = m + static_cast<long long>(i) * d;
        if (x > hi || !in_a.count(x)) {
          all = false;
          break;
        }
      }
      if (all) ++count;
    }
    if (static_cast<double>(count) >= tau * static_cast<double>(A.size()))
      return d;
  }
  return std::nullopt;
}

// ---- helpers ---------------------------------------------------------------

inline model::ResolvedTemplate load(const std::string& name,
                                    const model::ParamMap& params = {}) {
  auto t = model::load_template(std::string(SUMPROD_TEMPLATE_DIR) + "/" + name);
  return model::bind_template(t, params);
}

inline model::Coloring bits_coloring(long long lo, const std::string& bits) {
  std::vector<bool> v;
  for (char ch : bits) v.push_back(ch == '1');
  return model::Coloring::explicit_bits(lo, v);
}

}  // namespace oracle
