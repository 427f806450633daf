#include "sumprod/template.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace sumprod::model {

std::string to_string(Distinctness d) {
  switch (d) {
    case Distinctness::None: return "none";
    case Distinctness::Vars: return "vars";
    case Distinctness::Values: return "values";
  }
  return "none";
}

namespace {

struct LineLexer {
  const std::string& s;
  int line;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line, static_cast<int>(pos) + 1);
  }
  long long read_int() {
    skip_ws();
    bool neg = false;
    std::size_t start = pos;
    if (pos < s.size() && s[pos] == '-') {
      neg = true;
      ++pos;
    }
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected integer");
    long long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v < 0) {
        pos = start;
        fail("integer literal too large");
      }
      ++pos;
    }
    return neg ? -v : v;
  }
  std::string read_ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected identifier");
    return s.substr(start, pos - start);
  }
};

void add_exp(std::vector<std::pair<std::string, int>>& exps,
             const std::string& name, int e) {
  for (auto& [n, x] : exps)
    if (n == name) {
      x += e;
      return;
    }
  exps.emplace_back(name, e);
}

Term parse_term(LineLexer& lx, const Template& t) {
  Term term;
  bool first = true;
  while (true) {
    char c = lx.peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      long long lit = lx.read_int();
      if (lit <= 0)
        lx.fail("form is not guaranteed positive (coefficient " +
                std::to_string(lit) + ")");
      long long merged;
      if (!checked_mul(term.coeff, lit, &merged))
        lx.fail("coefficient overflow");
      term.coeff = merged;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id = lx.read_ident();
      int e = 1;
      if (lx.peek() == '^') {
        ++lx.pos;
        long long ev = lx.read_int();
        if (ev < 0) lx.fail("negative exponent");
        if (ev > 64) lx.fail("exponent too large");
        e = static_cast<int>(ev);
      }
      bool is_var =
          std::find(t.vars.begin(), t.vars.end(), id) != t.vars.end();
      bool is_param =
          std::find(t.params.begin(), t.params.end(), id) != t.params.end();
      if (!is_var && !is_param) lx.fail("undeclared variable '" + id + "'");
      if (e > 0) {
        if (is_var)
          add_exp(term.var_exp, id, e);
        else
          add_exp(term.param_exp, id, e);
      }
    } else if (first) {
      lx.fail("expected term");
    } else {
      lx.fail("expected integer, variable or parameter");
    }
    first = false;
    if (lx.peek() == '*') {
      ++lx.pos;
      continue;
    }
    break;
  }
  std::sort(term.param_exp.begin(), term.param_exp.end());
  std::sort(term.var_exp.begin(), term.var_exp.end());
  return term;
}

Form parse_form(const std::string& expr, int line, const Template& t) {
  LineLexer lx{expr, line};
  Form f;
  f.source = expr;
  // trim the stored source
  auto b = f.source.find_first_not_of(" \t");
  auto e = f.source.find_last_not_of(" \t");
  f.source = (b == std::string::npos) ? "" : f.source.substr(b, e - b + 1);

  while (true) {
    Term term = parse_term(lx, t);
    // merge like terms
    bool merged = false;
    for (auto& prev : f.terms)
      if (prev.param_exp == term.param_exp && prev.var_exp == term.var_exp) {
        long long sum;
        if (!checked_add(prev.coeff, term.coeff, &sum))
          lx.fail("coefficient overflow");
        prev.coeff = sum;
        merged = true;
        break;
      }
    if (!merged) f.terms.push_back(std::move(term));
    if (lx.peek() == '+') {
      ++lx.pos;
      continue;
    }
    if (!lx.eof()) lx.fail("unexpected character in expression");
    break;
  }
  return f;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream iss(s);
  std::vector<std::string> out;
  std::string w;
  while (iss >> w) out.push_back(w);
  return out;
}

}  // namespace

Template parse_template(const std::string& text) {
  Template t;
  bool saw_vars = false, saw_forms = false;
  std::vector<std::pair<std::string, int>> form_sources;  // (expr, line)

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    auto words = split_ws(line);
    if (words.empty()) continue;
    const std::string& kw = words[0];
    if (kw == "template") {
      if (words.size() != 2) throw ParseError("expected: template <name>", lineno, 1);
      t.name = words[1];
    } else if (kw == "vars") {
      if (words.size() < 2) throw ParseError("vars line needs at least one name", lineno, 1);
      t.vars.assign(words.begin() + 1, words.end());
      saw_vars = true;
    } else if (kw == "params") {
      t.params.assign(words.begin() + 1, words.end());
    } else if (kw == "forms") {
      if (!saw_vars)
        throw ParseError("forms before vars: no variables declared", lineno, 1);
      auto body_pos = line.find("forms");
      std::string body = line.substr(body_pos + 5);
      std::string cur;
      for (char c : body) {
        if (c == ';') {
          form_sources.emplace_back(cur, lineno);
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (cur.find_first_not_of(" \t") != std::string::npos)
        form_sources.emplace_back(cur, lineno);
      saw_forms = true;
    } else if (kw == "distinct") {
      if (words.size() != 2) throw ParseError("expected: distinct none|vars|values", lineno, 1);
      if (words[1] == "none") t.distinct = Distinctness::None;
      else if (words[1] == "vars") t.distinct = Distinctness::Vars;
      else if (words[1] == "values") t.distinct = Distinctness::Values;
      else throw ParseError("unknown distinctness '" + words[1] + "'", lineno, 1);
    } else if (kw == "min") {
      if (words.size() != 2) throw ParseError("expected: min <k>", lineno, 1);
      t.min_value = std::stoll(words[1]);
      if (t.min_value < 1) throw ParseError("min must be >= 1", lineno, 1);
    } else {
      throw ParseError("unknown directive '" + kw + "'", lineno, 1);
    }
  }

  if (!saw_vars) throw ParseError("missing vars line", lineno, 1);
  if (!saw_forms || form_sources.empty())
    throw ParseError("missing forms line", lineno, 1);
  {
    std::set<std::string> seen;
    for (const auto& v : t.vars)
      if (!seen.insert(v).second)
        throw ParseError("duplicate variable '" + v + "'", lineno, 1);
    for (const auto& p : t.params) {
      if (!seen.insert(p).second)
        throw ParseError("parameter '" + p + "' collides with a variable", lineno, 1);
    }
  }
  for (auto& [src, ln] : form_sources) t.forms.push_back(parse_form(src, ln, t));

  // every variable must appear in some form, otherwise enumeration over an
  // interval would be unbounded
  for (const auto& v : t.vars) {
    bool used = false;
    for (const auto& f : t.forms)
      for (const auto& term : f.terms)
        for (const auto& [name, e] : term.var_exp)
          if (name == v) used = true;
    if (!used)
      throw ParseError("variable '" + v + "' not used in any form", lineno, 1);
  }
  if (t.name.empty()) t.name = "anonymous";
  return t;
}

Template load_template(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open template file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_template(ss.str());
}

namespace {

long long pow_checked(long long base, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i)
    if (!checked_mul(r, base, &r))
      throw std::runtime_error("parameter power overflows 64 bits");
  return r;
}

bool term_less(const ResolvedTerm& a, const ResolvedTerm& b) {
  if (a.var_exp != b.var_exp) return a.var_exp < b.var_exp;
  return a.coeff < b.coeff;
}

ResolvedForm normalize(ResolvedForm f) {
  std::sort(f.terms.begin(), f.terms.end(), term_less);
  return f;
}

bool same_terms(const ResolvedForm& a, const ResolvedForm& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i)
    if (a.terms[i].coeff != b.terms[i].coeff ||
        a.terms[i].var_exp != b.terms[i].var_exp)
      return false;
  return true;
}

// Applies the variable renaming i -> perm[i] to every form and normalizes.
std::vector<ResolvedForm> rename_forms(const std::vector<ResolvedForm>& forms,
                                       const std::vector<int>& perm) {
  std::vector<ResolvedForm> out;
  out.reserve(forms.size());
  for (const auto& f : forms) {
    ResolvedForm g;
    for (const auto& t : f.terms) {
      ResolvedTerm rt;
      rt.coeff = t.coeff;
      for (auto [vi, e] : t.var_exp) rt.var_exp.emplace_back(perm[vi], e);
      std::sort(rt.var_exp.begin(), rt.var_exp.end());
      g.terms.push_back(std::move(rt));
    }
    out.push_back(normalize(std::move(g)));
  }
  return out;
}

bool form_multiset_equal(std::vector<ResolvedForm> a,
                         std::vector<ResolvedForm> b) {
  auto key = [](const ResolvedForm& f) {
    std::ostringstream ss;
    for (const auto& t : f.terms) {
      ss << t.coeff << ':';
      for (auto [v, e] : t.var_exp) ss << v << '^' << e << '.';
      ss << '|';
    }
    return ss.str();
  };
  std::vector<std::string> ka, kb;
  for (auto& f : a) ka.push_back(key(normalize(f)));
  for (auto& f : b) kb.push_back(key(normalize(f)));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

}  // namespace

ResolvedTemplate bind_template(const Template& t, const ParamMap& params) {
  ResolvedTemplate r;
  r.name = t.name;
  r.vars = t.vars;
  r.distinct = t.distinct;
  r.min_value = t.min_value;
  r.bound_params = params;

  for (const auto& p : t.params) {
    auto it = params.find(p);
    if (it == params.end())
      throw std::runtime_error("parameter '" + p + "' is not bound");
    if (it->second < 1)
      throw std::runtime_error("parameter '" + p + "' must be >= 1");
  }
  for (const auto& [k, v] : params)
    if (std::find(t.params.begin(), t.params.end(), k) == t.params.end())
      throw std::runtime_error("unknown parameter '" + k + "'");

  auto var_index = [&](const std::string& name) {
    return static_cast<int>(
        std::find(t.vars.begin(), t.vars.end(), name) - t.vars.begin());
  };

  for (const auto& f : t.forms) {
    ResolvedForm rf;
    rf.source = f.source;
    for (const auto& term : f.terms) {
      ResolvedTerm rt;
      rt.coeff = term.coeff;
      for (const auto& [p, e] : term.param_exp) {
        long long pv = pow_checked(params.at(p), e);
        if (!checked_mul(rt.coeff, pv, &rt.coeff))
          throw std::runtime_error("resolved coefficient overflows 64 bits");
      }
      for (const auto& [v, e] : term.var_exp)
        rt.var_exp.emplace_back(var_index(v), e);
      std::sort(rt.var_exp.begin(), rt.var_exp.end());
      rf.terms.push_back(std::move(rt));
    }
    // merge like monomials created by parameter substitution
    ResolvedForm merged;
    merged.source = rf.source;
    for (auto& rt : rf.terms) {
      bool hit = false;
      for (auto& prev : merged.terms)
        if (prev.var_exp == rt.var_exp) {
          if (!checked_add(prev.coeff, rt.coeff, &prev.coeff))
            throw std::runtime_error("resolved coefficient overflows 64 bits");
          hit = true;
          break;
        }
      if (!hit) merged.terms.push_back(std::move(rt));
    }
    r.forms.push_back(normalize(std::move(merged)));
  }

  // syntactic symmetry group over the resolved forms
  int n = static_cast<int>(t.vars.size());
  if (n >= 2 && n <= 6) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
      if (form_multiset_equal(rename_forms(r.forms, perm), r.forms))
        r.symmetries.push_back(perm);
    }
    std::sort(perm.begin(), perm.end());  // restore for clarity
  }
  return r;
}

BigInt eval_form(const ResolvedForm& f, const std::vector<long long>& vals) {
  BigInt total = 0;
  for (const auto& t : f.terms) {
    BigInt term = big(t.coeff);
    for (auto [vi, e] : t.var_exp) {
      BigInt p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(vals[vi]),
                    static_cast<unsigned long>(e));
      term *= p;
    }
    total += term;
  }
  return total;
}

std::optional<long long> eval_form_within(const ResolvedForm& f,
                                          const std::vector<long long>& vals,
                                          long long hi) {
  long long total = 0;
  for (const auto& t : f.terms) {
    long long term = t.coeff;
    for (auto [vi, e] : t.var_exp)
      for (int i = 0; i < e; ++i) {
        if (!checked_mul(term, vals[vi], &term) || term > hi) return std::nullopt;
      }
    if (!checked_add(total, term, &total) || total > hi) return std::nullopt;
  }
  return total;
}

InstanceValues instantiate(const ResolvedTemplate& t, const Assignment& a) {
  if (a.values.size() != t.vars.size())
    throw PolicyError("assignment has " + std::to_string(a.values.size()) +
                      " values for " + std::to_string(t.vars.size()) +
                      " variables");
  for (long long v : a.values)
    if (v < t.min_value)
      throw PolicyError("assignment value " + std::to_string(v) +
                        " below min " + std::to_string(t.min_value));
  if (t.distinct == Distinctness::Vars) {
    std::set<long long> s(a.values.begin(), a.values.end());
    if (s.size() != a.values.size())
      throw PolicyError("assignment violates vars-distinct policy");
  }
  std::vector<BigInt> vals;
  vals.reserve(t.forms.size());
  for (const auto& f : t.forms) vals.push_back(eval_form(f, a.values));
  std::sort(vals.begin(), vals.end());
  if (t.distinct == Distinctness::Values) {
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (vals[i] == vals[i - 1])
        throw PolicyError("assignment violates values-distinct policy");
  }
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return InstanceValues{std::move(vals)};
}

namespace {

// True iff `a` is lexicographically minimal in its orbit under the
// template's symmetry permutations.
bool orbit_minimal(const ResolvedTemplate& t, const std::vector<long long>& a) {
  for (const auto& perm : t.symmetries) {
    std::vector<long long> b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) b[perm[i]] = a[i];
    if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()))
      return false;
  }
  return true;
}

}  // namespace

std::vector<Instance> enumerate_instances(const ResolvedTemplate& t,
                                          long long lo, long long hi,
                                          std::size_t cap) {
  if (lo > hi) throw std::invalid_argument("enumerate_instances: lo > hi");
  std::vector<Instance> out;
  int n = static_cast<int>(t.vars.size());
  std::vector<long long> vals(n, t.min_value);

  auto leaf = [&]() {
    std::vector<long long> values;
    values.reserve(t.forms.size());
    for (const auto& f : t.forms) {
      auto v = eval_form_within(f, vals, hi);
      if (!v || *v < lo) return;
      values.push_back(*v);
    }
    if (t.distinct == Distinctness::Values) {
      std::vector<long long> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return;
    }
    if (!orbit_minimal(t, vals)) return;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (out.size() >= cap)
      throw CapError("instance cap exceeded (" + std::to_string(cap) + ")");
    out.push_back(Instance{Assignment{vals}, std::move(values)});
  };

  // Depth-first over assignments in lexicographic order. All forms are
  // monotone in every variable, so once any form's optimistic value
  // (deeper variables pinned at min) exceeds hi we can stop raising the
  // current variable.
  auto rec = [&](auto&& self, int k) -> void {
    if (k == n) {
      leaf();
      return;
    }
    for (long long v = t.min_value;; ++v) {
      vals[k] = v;
      bool over = false;
      for (const auto& f : t.forms)
        if (!eval_form_within(f, vals, hi)) {
          over = true;
          break;
        }
      if (over) break;
      if (t.distinct == Distinctness::Vars) {
        bool dup = false;
        for (int j = 0; j < k; ++j)
          if (vals[j] == v) dup = true;
        if (dup) continue;
      }
      self(self, k + 1);
    }
    vals[k] = t.min_value;
  };
  rec(rec, 0);
  return out;
}

Template make_tower_template(int n) {
  if (n < 1) throw std::invalid_argument("tower template needs n >= 1");
  std::ostringstream src;
  src << "template tower-" << n << "\nvars";
  for (int i = 1; i <= n; ++i) src << " x" << i;
  src << "\nforms";
  std::string sep = " ";
  for (int i = 1; i <= n; ++i) {
    src << sep << "x" << i;
    sep = "; ";
  }
  for (int i = 1; i <= n; ++i) {
    src << sep;
    for (int j = 1; j <= i; ++j) src << (j > 1 ? "*x" : "x") << j;
  }
  src << sep;
  for (int i = 1; i <= n; ++i) src << (i > 1 ? "+x" : "x") << i;
  src << "\ndistinct vars\n";
  return parse_template(src.str());
}

}  // namespace sumprod::model
