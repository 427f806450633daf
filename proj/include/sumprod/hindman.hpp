#pragma once

#include <optional>
#include <vector>

#include "sumprod/bigint.hpp"
#include "sumprod/coloring.hpp"

namespace sumprod::hindman {

// All non-repeating finite sums (resp. products) of the elements of s.
std::vector<BigInt> finite_sums(const std::vector<long long>& s);
std::vector<BigInt> finite_products(const std::vector<long long>& s);

// Finite sequence of pairwise-disjoint finite sets of positive integers,
// the raw material of the products-of-sums evaluation.
struct SetSequence {
  std::vector<std::vector<long long>> sets;  // each sorted ascending

  // Validates: nonempty sets, positive elements, pairwise disjoint; when
  // `profile` is given, |sets[i]| must equal profile[i].
  static SetSequence make(std::vector<std::vector<long long>> sets,
                          const std::vector<int>* profile = nullptr);
};

// prod over blocks meeting F of (sum of the block's elements in F).
// F must be a nonempty subset of the union of the sets.
BigInt products_of_sums(const SetSequence& seq, const std::vector<long long>& F);

struct PosValue {
  std::vector<long long> F;  // sorted
  BigInt value;
};

inline constexpr std::size_t kPosValueCap = 20;  // max total elements

// All nonempty F with their values, in bitmask order over the flattened
// union (block by block, elements ascending). Deterministic.
std::vector<PosValue> enumerate_pos_values(const SetSequence& seq,
                                           std::size_t cap = kPosValueCap);

struct Structure {
  int color;
  SetSequence seq;
};

// Least (by flattened lexicographic order) sequence S_1..S_k inside the
// coloring's domain with |S_i| = sizes[i] whose products-of-sums values are
// all in-domain and monochromatic. nullopt is a valid outcome at finite
// scale.
std::optional<Structure> find_structure(const model::Coloring& c,
                                        const std::vector<int>& sizes);

struct BiStructure {
  int color;  // the class of values whose F meets S_0
  std::vector<long long> s0;
  SetSequence seq;  // S_1..S_k
};

// Bichromatic variant: values split by whether F meets S_0. Candidates are
// scanned in flattened lexicographic order over (S_0, S_1..S_k); for a tied
// candidate, color 0 is preferred.
std::optional<BiStructure> find_bichromatic_structure(const model::Coloring& c,
                                                      int size0,
                                                      const std::vector<int>& sizes);

struct BridgePair {
  std::vector<BigInt> F;  // a * S_0, sorted
  std::vector<BigInt> G;  // {b, s_1..s_m}, sorted
  BigInt a, b;
};

// Constructive sum=product bridge: given S_0..S_m and one pick s_i from each
// S_i (i >= 1), sets a = prod s_i, b = sum S_0, G = {b, s_1..s_m},
// F = a*S_0. Then sum F = prod G exactly. Throws DegenerateChoiceError if b
// collides with a pick (|G| < m+1).
BridgePair bridge_sum_product(const SetSequence& seq_with_s0,
                              const std::vector<long long>& picks);

// First d in FS(S), ascending, whose common-difference intersection
// {m in [lo,hi] : m+i*d in A for all 0 <= i <= k} has size >= tau*|A|.
std::optional<long long> find_vdw_step(const std::vector<long long>& A,
                                       const std::vector<long long>& S, int k,
                                       double tau, long long lo, long long hi);

}  // namespace sumprod::hindman
