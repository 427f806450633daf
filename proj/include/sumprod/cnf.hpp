#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sumprod/coloring.hpp"
#include "sumprod/template.hpp"

namespace sumprod::cnf {

// DIMACS encoding of "there exists an avoiding 2-coloring of [lo,n]".
// Variable i+1 is true iff integer lo+i has color 1. Every deduplicated
// instance value set {e_1..e_k}, k >= 2, contributes the clause pair
// (v_e1 .. v_ek)(-v_e1 .. -v_ek); singletons contribute (v_e)(-v_e).
struct CnfDocument {
  long long lo = 1, n = 1;
  int var_count = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::pair<std::string, std::string>> comments;  // key, value
};

CnfDocument encode(const model::ResolvedTemplate& t, long long lo, long long n,
                   bool fix_first = false);

// Canonical text: comment lines "c key=value", header "p cnf V C", one
// clause per line. Byte-identical for identical inputs.
std::string to_dimacs(const CnfDocument& doc);

// Write-temp-then-rename.
void write_dimacs(const CnfDocument& doc, const std::string& path);

// Accepts solver output ("v " lines, "s SATISFIABLE"/"s UNSATISFIABLE") or a
// raw literal list terminated by 0. Every variable must be assigned exactly
// once; throws ModelError otherwise.
model::Coloring decode_model(const std::string& text, long long lo, long long n);

// Decode + verify_witness. The trust boundary for external SAT claims.
bool check_model(const model::ResolvedTemplate& t, long long lo, long long n,
                 const std::string& model_text);

}  // namespace sumprod::cnf
