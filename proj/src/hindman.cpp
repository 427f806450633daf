#include "sumprod/hindman.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "sumprod/errors.hpp"

namespace sumprod::hindman {

namespace {

std::vector<BigInt> subset_combine(const std::vector<long long>& s, bool product) {
  if (s.empty()) throw std::invalid_argument("finite sums/products of empty set");
  if (s.size() > 24) throw CapError("set too large for subset enumeration");
  std::set<BigInt> out;
  for (unsigned mask = 1; mask < (1u << s.size()); ++mask) {
    BigInt acc = product ? 1 : 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (mask & (1u << i)) {
        if (product)
          acc *= big(s[i]);
        else
          acc += big(s[i]);
      }
    out.insert(acc);
  }
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<BigInt> finite_sums(const std::vector<long long>& s) {
  return subset_combine(s, false);
}

std::vector<BigInt> finite_products(const std::vector<long long>& s) {
  return subset_combine(s, true);
}

SetSequence SetSequence::make(std::vector<std::vector<long long>> sets,
                              const std::vector<int>* profile) {
  if (profile && profile->size() != sets.size())
    throw std::invalid_argument("size profile length mismatch");
  std::set<long long> seen;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto& s = sets[i];
    if (s.empty()) throw std::invalid_argument("empty set in sequence");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("repeated element within a set");
    for (long long v : s) {
      if (v <= 0) throw std::invalid_argument("set elements must be positive");
      if (!seen.insert(v).second)
        throw std::invalid_argument("sets must be disjoint (element " +
                                    std::to_string(v) + " repeats)");
    }
    if (profile && static_cast<int>(s.size()) != (*profile)[i])
      throw std::invalid_argument("set " + std::to_string(i) +
                                  " violates the size profile");
  }
  return SetSequence{std::move(sets)};
}

BigInt products_of_sums(const SetSequence& seq, const std::vector<long long>& F) {
  if (F.empty()) throw std::invalid_argument("products_of_sums: F is empty");
  std::unordered_set<long long> fs(F.begin(), F.end());
  std::size_t matched = 0;
  BigInt prod = 1;
  for (const auto& s : seq.sets) {
    BigInt block = 0;
    bool meets = false;
    for (long long v : s)
      if (fs.count(v)) {
        block += big(v);
        meets = true;
        ++matched;
      }
    if (meets) prod *= block;
  }
  if (matched != fs.size())
    throw std::invalid_argument("F contains elements outside the sequence");
  return prod;
}

std::vector<PosValue> enumerate_pos_values(const SetSequence& seq,
                                           std::size_t cap) {
  std::vector<long long> flat;
  for (const auto& s : seq.sets) flat.insert(flat.end(), s.begin(), s.end());
  if (flat.size() > cap)
    throw CapError("sequence has " + std::to_string(flat.size()) +
                   " elements; cap is " + std::to_string(cap));
  std::vector<PosValue> out;
  for (unsigned mask = 1; mask < (1u << flat.size()); ++mask) {
    std::vector<long long> F;
    for (std::size_t i = 0; i < flat.size(); ++i)
      if (mask & (1u << i)) F.push_back(flat[i]);
    std::sort(F.begin(), F.end());
    BigInt v = products_of_sums(seq, F);
    out.push_back({std::move(F), std::move(v)});
  }
  return out;
}

namespace {

// Shared backtracking skeleton for structure searches. Blocks are filled in
// order with strictly ascending elements; elements across blocks must be
// disjoint. Candidates are therefore produced in flattened lexicographic
// order, and the first acceptance is the least solution.
//
// `viable` tracks which color hypotheses survive the values completed so
// far; a hypothesis is the target color i (for the bichromatic search the
// split is derived from i).
struct StructureSearch {
  const model::Coloring& c;
  bool bichromatic;
  int size0;  // only for bichromatic
  std::vector<int> sizes;

  std::vector<std::vector<long long>> blocks;  // chosen so far (incl. S_0 at 0 if bi)
  std::vector<long long> flat;                 // all chosen elements in order

  std::optional<int> found_color;
  std::vector<std::vector<long long>> found_blocks;

  bool run() {
    blocks.assign(total_blocks(), {});
    flat.clear();
    std::vector<char> viable = {1, 1};
    return fill_block(0, viable);
  }

  int total_blocks() const {
    return static_cast<int>(sizes.size()) + (bichromatic ? 1 : 0);
  }
  int block_size(int b) const {
    if (bichromatic) return b == 0 ? size0 : sizes[b - 1];
    return sizes[b];
  }

  // Required color of the value for subset F under hypothesis i.
  int required_color(bool meets_s0, int i) const {
    if (!bichromatic) return i;
    return meets_s0 ? i : 1 - i;
  }

  bool fill_block(int b, std::vector<char> viable) {
    if (b == total_blocks()) {
      for (int i = 0; i < 2; ++i)
        if (viable[i]) {
          found_color = i;
          found_blocks = blocks;
          return true;
        }
      return false;
    }
    return fill_elem(b, 0, viable);
  }

  bool fill_elem(int b, int pos, const std::vector<char>& viable) {
    if (pos == block_size(b)) return fill_block(b + 1, viable);
    long long start = pos == 0 ? c.lo() : blocks[b].back() + 1;
    for (long long e = start; e <= c.hi(); ++e) {
      if (std::find(flat.begin(), flat.end(), e) != flat.end()) continue;
      blocks[b].push_back(e);
      flat.push_back(e);
      std::vector<char> v2 = viable;
      if (check_new_values(e, v2) && (v2[0] || v2[1])) {
        if (fill_elem(b, pos + 1, v2)) return true;
      }
      blocks[b].pop_back();
      flat.pop_back();
    }
    return false;
  }

  // Checks every subset F of the chosen elements that contains the newest
  // element e: its value must be in-domain and have the required color under
  // each still-viable hypothesis.
  bool check_new_values(long long e, std::vector<char>& viable) {
    std::vector<long long> others(flat.begin(), flat.end() - 1);
    std::size_t m = others.size();
    if (m > 22) throw CapError("structure search state too large");
    for (unsigned long long mask = 0; mask < (1ull << m); ++mask) {
      BigInt value = 1;
      bool meets_s0 = false;
      // group contributions per block
      int nb = total_blocks();
      for (int b = 0; b < nb; ++b) {
        BigInt block_sum = 0;
        bool meets = false;
        for (std::size_t j = 0; j < m; ++j) {
          if (!(mask & (1ull << j))) continue;
          long long x = others[j];
          if (std::find(blocks[b].begin(), blocks[b].end(), x) != blocks[b].end()) {
            block_sum += big(x);
            meets = true;
          }
        }
        if (std::find(blocks[b].begin(), blocks[b].end(), e) != blocks[b].end()) {
          block_sum += big(e);
          meets = true;
        }
        if (meets) {
          value *= block_sum;
          if (bichromatic && b == 0) meets_s0 = true;
        }
      }
      auto v64 = to_i64(value);
      if (!v64 || *v64 < c.lo() || *v64 > c.hi()) return false;  // out of domain
      int col = c.color_of(*v64);
      for (int i = 0; i < 2; ++i)
        if (viable[i] && col != required_color(meets_s0, i)) viable[i] = 0;
      if (!viable[0] && !viable[1]) return false;
    }
    return true;
  }
};

}  // namespace

std::optional<Structure> find_structure(const model::Coloring& c,
                                        const std::vector<int>& sizes) {
  if (sizes.empty()) throw std::invalid_argument("find_structure: empty sizes");
  for (int s : sizes)
    if (s < 1) throw std::invalid_argument("find_structure: sizes must be >= 1");
  StructureSearch ss{c, false, 0, sizes};
  if (!ss.run()) return std::nullopt;
  return Structure{*ss.found_color, SetSequence::make(ss.found_blocks)};
}

std::optional<BiStructure> find_bichromatic_structure(const model::Coloring& c,
                                                      int size0,
                                                      const std::vector<int>& sizes) {
  if (size0 < 1) throw std::invalid_argument("find_bichromatic_structure: size0 >= 1");
  if (sizes.empty())
    throw std::invalid_argument("find_bichromatic_structure: empty sizes");
  for (int s : sizes)
    if (s < 1) throw std::invalid_argument("sizes must be >= 1");
  StructureSearch ss{c, true, size0, sizes};
  if (!ss.run()) return std::nullopt;
  std::vector<std::vector<long long>> rest(ss.found_blocks.begin() + 1,
                                           ss.found_blocks.end());
  return BiStructure{*ss.found_color, ss.found_blocks[0], SetSequence::make(rest)};
}

BridgePair bridge_sum_product(const SetSequence& seq,
                              const std::vector<long long>& picks) {
  if (seq.sets.size() < 2)
    throw std::invalid_argument("bridge needs S_0 and at least one S_i");
  std::size_t m = seq.sets.size() - 1;
  if (picks.size() != m)
    throw std::invalid_argument("bridge needs one pick per S_i, i >= 1");
  for (std::size_t i = 0; i < m; ++i) {
    const auto& s = seq.sets[i + 1];
    if (!std::binary_search(s.begin(), s.end(), picks[i]))
      throw std::invalid_argument("pick " + std::to_string(picks[i]) +
                                  " is not an element of S_" + std::to_string(i + 1));
  }
  BridgePair out;
  out.a = 1;
  for (long long s : picks) out.a *= big(s);
  out.b = 0;
  for (long long v : seq.sets[0]) out.b += big(v);

  std::set<BigInt> g;
  g.insert(out.b);
  for (long long s : picks)
    if (!g.insert(big(s)).second || out.b == big(s))
      throw DegenerateChoiceError("b = sum S_0 = " + to_string(out.b) +
                                  " collides with pick " + std::to_string(s));
  if (g.size() != m + 1)
    throw DegenerateChoiceError("picks collapse |G| below m+1");
  out.G.assign(g.begin(), g.end());
  for (long long v : seq.sets[0]) out.F.push_back(out.a * big(v));
  std::sort(out.F.begin(), out.F.end());

  BigInt sumF = 0, prodG = 1;
  for (const auto& x : out.F) sumF += x;
  for (const auto& x : out.G) prodG *= x;
  if (sumF != prodG)
    throw std::logic_error("bridge identity violated (sum F != prod G)");
  return out;
}

std::optional<long long> find_vdw_step(const std::vector<long long>& A,
                                       const std::vector<long long>& S, int k,
                                       double tau, long long lo, long long hi) {
  if (k < 1) throw std::invalid_argument("find_vdw_step: k >= 1");
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("find_vdw_step: tau in (0,1]");
  if (A.empty()) return std::nullopt;
  for (long long a : A)
    if (a < lo || a > hi)
      throw std::invalid_argument("A must lie within [lo,hi]");

  std::unordered_set<long long> in_a(A.begin(), A.end());
  auto fs = finite_sums(S);
  for (const auto& dv : fs) {
    auto d64 = to_i64(dv);
    if (!d64 || *d64 > hi) break;  // no progression of this step fits
    long long d = *d64;
    long long count = 0;
    for (long long m : A) {
      bool all = true;
      long long cur = m;
      for (int i = 1; i <= k; ++i) {
        if (cur > hi - d) {  // next element would leave the window
          all = false;
          break;
        }
        cur += d;
        if (!in_a.count(cur)) {
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

}  // namespace sumprod::hindman
