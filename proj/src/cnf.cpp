#include "sumprod/cnf.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sumprod/search.hpp"
#include "sumprod/version.hpp"

namespace sumprod::cnf {

CnfDocument encode(const model::ResolvedTemplate& t, long long lo, long long n,
                   bool fix_first) {
  if (lo > n) throw std::invalid_argument("encode: lo > n");
  CnfDocument doc;
  doc.lo = lo;
  doc.n = n;
  doc.var_count = static_cast<int>(n - lo + 1);

  auto insts = model::enumerate_instances(t, lo, n);
  std::size_t total = insts.size();
  std::vector<std::vector<int>> sets;
  sets.reserve(total);
  for (const auto& inst : insts) {
    std::vector<int> s;
    s.reserve(inst.values.size());
    for (long long v : inst.values) s.push_back(static_cast<int>(v - lo + 1));
    sets.push_back(std::move(s));
  }
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    if (a.back() != b.back()) return a.back() < b.back();
    return a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());

  doc.comments.emplace_back("encoder", kEngineVersion);
  doc.comments.emplace_back("template", t.name);
  std::ostringstream ps;
  for (const auto& [k, v] : t.bound_params) {
    if (ps.tellp() > 0) ps << ",";
    ps << k << "=" << v;
  }
  doc.comments.emplace_back("params", ps.tellp() > 0 ? ps.str() : "(none)");
  doc.comments.emplace_back("lo", std::to_string(lo));
  doc.comments.emplace_back("n", std::to_string(n));
  doc.comments.emplace_back("instances", std::to_string(total));
  doc.comments.emplace_back("value-sets", std::to_string(sets.size()));
  doc.comments.emplace_back("symmetry", fix_first ? "first-zero" : "none");

  if (fix_first && doc.var_count > 0) doc.clauses.push_back({-1});
  for (const auto& s : sets) {
    std::vector<int> pos(s.begin(), s.end());
    std::vector<int> neg;
    neg.reserve(s.size());
    for (int v : s) neg.push_back(-v);
    doc.clauses.push_back(std::move(pos));
    doc.clauses.push_back(std::move(neg));
  }
  return doc;
}

std::string to_dimacs(const CnfDocument& doc) {
  std::ostringstream ss;
  for (const auto& [k, v] : doc.comments) ss << "c " << k << "=" << v << "\n";
  ss << "p cnf " << doc.var_count << " " << doc.clauses.size() << "\n";
  for (const auto& cl : doc.clauses) {
    for (int lit : cl) ss << lit << " ";
    ss << "0\n";
  }
  return ss.str();
}

void write_dimacs(const CnfDocument& doc, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << to_dimacs(doc);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

model::Coloring decode_model(const std::string& text, long long lo, long long n) {
  if (lo > n) throw std::invalid_argument("decode_model: lo > n");
  int V = static_cast<int>(n - lo + 1);
  std::vector<int> val(V + 1, -1);  // 1-based; -1 unset

  std::vector<long long> lits;
  std::istringstream in(text);
  std::string line;
  bool saw_vline = false;
  std::vector<std::string> raw_lines;
  while (std::getline(in, line)) raw_lines.push_back(line);

  auto take_literals = [&](const std::string& body) {
    std::istringstream ls(body);
    long long lit;
    while (ls >> lit) {
      if (lit == 0) return true;
      lits.push_back(lit);
    }
    return false;
  };

  bool terminated = false;
  for (const auto& l : raw_lines) {
    if (l.rfind("c", 0) == 0 && (l.size() == 1 || l[1] == ' ')) continue;
    if (l.rfind("s ", 0) == 0) {
      if (l.find("UNSATISFIABLE") != std::string::npos)
        throw ModelError("solver reported UNSATISFIABLE; no model to decode");
      continue;  // "s SATISFIABLE"
    }
    if (l.rfind("v ", 0) == 0 || l == "v") {
      saw_vline = true;
      if (take_literals(l.substr(1))) terminated = true;
      continue;
    }
    if (!saw_vline) {
      // raw literal list
      if (take_literals(l)) terminated = true;
    } else if (!l.empty()) {
      throw ModelError("unexpected line in model text: '" + l + "'");
    }
  }
  (void)terminated;
  if (lits.empty()) throw ModelError("model text contains no literals");

  for (long long lit : lits) {
    long long var = lit > 0 ? lit : -lit;
    if (var < 1 || var > V)
      throw ModelError("literal " + std::to_string(lit) +
                       " out of range for " + std::to_string(V) + " variables");
    int v = lit > 0 ? 1 : 0;
    int& slot = val[static_cast<std::size_t>(var)];
    if (slot != -1 && slot != v)
      throw ModelError("contradictory literals for variable " + std::to_string(var));
    slot = v;
  }
  for (int i = 1; i <= V; ++i)
    if (val[i] == -1)
      throw ModelError("variable " + std::to_string(i) + " unassigned in model");

  std::vector<bool> bits;
  bits.reserve(V);
  for (int i = 1; i <= V; ++i) bits.push_back(val[i] == 1);
  return model::Coloring::explicit_bits(lo, std::move(bits));
}

bool check_model(const model::ResolvedTemplate& t, long long lo, long long n,
                 const std::string& model_text) {
  model::Coloring c = decode_model(model_text, lo, n);
  return search::verify_witness(t, c);
}

}  // namespace sumprod::cnf
