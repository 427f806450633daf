#include "sumprod/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <set>
#include <sstream>
#include <thread>

#include "sumprod/version.hpp"

namespace sumprod::search {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Forced: return "forced";
    case Verdict::Avoidable: return "avoidable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

using Clock = std::chrono::steady_clock;

struct SharedBudget {
  std::atomic<long long> nodes{0};
  long long max_nodes;
  Clock::time_point deadline;
};

// Deduplicated instance value sets over [lo,n], as 0-based variable indices,
// sorted by (max value, lexicographic) — the canonical order shared with the
// CNF encoder.
struct BuiltSets {
  int num_vars = 0;
  std::vector<std::vector<int>> sets;  // each sorted ascending, size >= 2
  std::optional<std::pair<long long, model::Assignment>> singleton;
};

BuiltSets build_sets(const model::ResolvedTemplate& t, long long lo, long long n) {
  BuiltSets b;
  b.num_vars = static_cast<int>(n - lo + 1);
  auto insts = model::enumerate_instances(t, lo, n);
  std::vector<std::vector<int>> all;
  for (const auto& inst : insts) {
    if (inst.values.size() == 1) {
      if (!b.singleton) b.singleton = {inst.values[0], inst.assignment};
      continue;
    }
    std::vector<int> s;
    s.reserve(inst.values.size());
    for (long long v : inst.values) s.push_back(static_cast<int>(v - lo));
    all.push_back(std::move(s));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& c) {
    if (a.back() != c.back()) return a.back() < c.back();
    return a < c;
  });
  all.erase(std::unique(all.begin(), all.end()), all.end());
  b.sets = std::move(all);
  return b;
}

struct SubResult {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<bool> witness;
  long long nodes = 0;
  long long propagations = 0;
};

// DPLL over colorings. Each instance value set {e_1..e_k} contributes two
// constraints: not all color 0, not all color 1. Both are watched by two
// not-yet-falsified values; assignments propagate to fixpoint before the
// next decision. Decisions take the lowest unassigned integer, color 0
// first, so the first full assignment found is the lexicographically least
// avoiding coloring.
class Engine {
 public:
  Engine(const BuiltSets& b) : sets_(b.sets), num_vars_(b.num_vars) {
    watch_pos_.assign(sets_.size(), {});
    for (int p = 0; p < 2; ++p) watchers_[p].assign(num_vars_, {});
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      for (int p = 0; p < 2; ++p) {
        watch_pos_[i][p] = {0, 1};
        watchers_[p][sets_[i][0]].push_back(static_cast<int>(i));
        watchers_[p][sets_[i][1]].push_back(static_cast<int>(i));
      }
    }
  }

  SubResult run(const std::vector<std::pair<int, int>>& assumptions,
                bool fix_first, SharedBudget& budget) {
    asg_.assign(num_vars_, -1);
    trail_.clear();
    qhead_ = 0;
    reset_watches();
    SubResult res;

    bool ok = true;
    if (fix_first && num_vars_ > 0) ok = root_assign(0, 0);
    for (auto [v, c] : assumptions) {
      if (!ok) break;
      ok = root_assign(v, c);
    }
    if (ok) ok = propagate(res.propagations);
    if (!ok) {
      res.verdict = Verdict::Forced;
      return res;
    }

    struct Frame {
      std::size_t trail_size;
      int var;
      int branch;
    };
    std::vector<Frame> frames;

    while (true) {
      if (static_cast<int>(trail_.size()) == num_vars_) {
        res.verdict = Verdict::Avoidable;
        res.witness.assign(num_vars_, false);
        for (int v = 0; v < num_vars_; ++v) res.witness[v] = asg_[v] == 1;
        return res;
      }
      int var = next_unassigned();
      frames.push_back({trail_.size(), var, 0});
      assign(var, 0);
      ++res.nodes;
      if (!bump_budget(budget)) {
        res.verdict = Verdict::Inconclusive;
        return res;
      }
      while (!propagate(res.propagations)) {
        while (!frames.empty() && frames.back().branch == 1) frames.pop_back();
        if (frames.empty()) {
          res.verdict = Verdict::Forced;
          return res;
        }
        Frame& f = frames.back();
        undo_to(f.trail_size);
        f.branch = 1;
        assign(f.var, 1);
        ++res.nodes;
        if (!bump_budget(budget)) {
          res.verdict = Verdict::Inconclusive;
          return res;
        }
      }
    }
  }

 private:
  void reset_watches() {
    for (int p = 0; p < 2; ++p)
      for (auto& wl : watchers_[p]) wl.clear();
    for (std::size_t i = 0; i < sets_.size(); ++i)
      for (int p = 0; p < 2; ++p) {
        watch_pos_[i][p] = {0, 1};
        watchers_[p][sets_[i][0]].push_back(static_cast<int>(i));
        watchers_[p][sets_[i][1]].push_back(static_cast<int>(i));
      }
  }

  bool root_assign(int var, int c) {
    if (asg_[var] == -1) {
      assign(var, c);
      return true;
    }
    return asg_[var] == c;
  }

  void assign(int var, int c) {
    asg_[var] = static_cast<int8_t>(c);
    trail_.push_back(var);
  }

  void undo_to(std::size_t sz) {
    while (trail_.size() > sz) {
      asg_[trail_.back()] = -1;
      trail_.pop_back();
    }
    qhead_ = sz;
  }

  int next_unassigned() const {
    for (int v = 0; v < num_vars_; ++v)
      if (asg_[v] == -1) return v;
    return -1;
  }

  bool bump_budget(SharedBudget& budget) {
    long long total = budget.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (total > budget.max_nodes) return false;
    if ((total & 4095) == 0 && Clock::now() > budget.deadline) return false;
    return true;
  }

  // Runs unit propagation to fixpoint. Returns false on conflict.
  bool propagate(long long& props) {
    while (qhead_ < trail_.size()) {
      int v = trail_[qhead_++];
      int c = asg_[v];
      auto& wl = watchers_[c][v];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t idx = 0; idx < wl.size(); ++idx) {
        int inst = wl[idx];
        const auto& vals = sets_[inst];
        auto& wp = watch_pos_[inst][c];
        int slot = (vals[wp[0]] == v) ? 0 : 1;
        int other = vals[wp[1 - slot]];
        if (asg_[other] == 1 - c) {  // constraint already satisfied
          wl[keep++] = inst;
          continue;
        }
        int repl = -1;
        for (int j = 0; j < static_cast<int>(vals.size()); ++j) {
          if (j == wp[0] || j == wp[1]) continue;
          if (asg_[vals[j]] != c) {
            repl = j;
            break;
          }
        }
        if (repl >= 0) {
          wp[slot] = repl;
          watchers_[c][vals[repl]].push_back(inst);
          continue;  // moved away from v's list
        }
        if (asg_[other] == c) {  // all values colored c
          conflict = true;
          // keep this and all remaining watchers
          for (std::size_t rest = idx; rest < wl.size(); ++rest)
            wl[keep++] = wl[rest];
          break;
        }
        // unit: the remaining value must take the opposite color
        assign(other, 1 - c);
        ++props;
        wl[keep++] = inst;
      }
      wl.resize(keep);
      if (conflict) return false;
    }
    return true;
  }

  const std::vector<std::vector<int>>& sets_;
  int num_vars_;
  std::vector<std::array<std::array<int, 2>, 2>> watch_pos_;
  std::vector<std::vector<int>> watchers_[2];
  std::vector<int8_t> asg_;
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
};

SubResult search_parallel(const BuiltSets& built, const Options& opt,
                          SharedBudget& budget) {
  // Determine split variables from the root propagation.
  Engine probe(built);
  // Root-only run to see how many variables remain; we split on the first B
  // unassigned ones. A full engine run with zero budget would be awkward, so
  // we just split on the lowest-index variables (skipping var 0 which the
  // symmetry break pins).
  int first = opt.fix_first_color ? 1 : 0;
  int avail = built.num_vars - first;
  if (avail <= 1) {
    Engine e(built);
    return e.run({}, opt.fix_first_color, budget);
  }
  int b = 1;
  while ((1 << b) < opt.threads * 4 && b < 10 && b < avail) ++b;
  std::vector<int> split_vars;
  for (int j = 0; j < b; ++j) split_vars.push_back(first + j);

  int combos = 1 << b;
  std::vector<SubResult> results(combos);
  std::vector<char> ran(combos, 0);
  std::atomic<int> next{0};
  std::atomic<int> lowest_avoidable{combos};

  auto worker = [&]() {
    Engine engine(built);
    while (true) {
      int c = next.fetch_add(1);
      if (c >= combos) return;
      if (c > lowest_avoidable.load()) continue;  // verdict already settled
      std::vector<std::pair<int, int>> asmp;
      for (int j = 0; j < b; ++j)
        asmp.emplace_back(split_vars[j], (c >> (b - 1 - j)) & 1);
      results[c] = engine.run(asmp, opt.fix_first_color, budget);
      ran[c] = 1;
      if (results[c].verdict == Verdict::Avoidable) {
        int cur = lowest_avoidable.load();
        while (c < cur && !lowest_avoidable.compare_exchange_weak(cur, c)) {
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < std::max(1, opt.threads); ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  SubResult merged;
  merged.verdict = Verdict::Forced;
  int low = lowest_avoidable.load();
  for (int c = 0; c < combos; ++c) {
    if (!ran[c]) continue;
    merged.nodes += results[c].nodes;
    merged.propagations += results[c].propagations;
  }
  if (low < combos) {
    merged.verdict = Verdict::Avoidable;
    merged.witness = results[low].witness;
  } else {
    for (int c = 0; c < combos; ++c)
      if (ran[c] && results[c].verdict == Verdict::Inconclusive)
        merged.verdict = Verdict::Inconclusive;
  }
  return merged;
}

void init_budget(SharedBudget& b, const Options& opt) {
  b.max_nodes = opt.budget.max_nodes;
  b.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(opt.budget.max_seconds));
}

std::string assignment_text(const model::ResolvedTemplate& t,
                            const model::Assignment& a) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < t.vars.size(); ++i) {
    if (i) ss << ",";
    ss << t.vars[i] << "=" << a.values[i];
  }
  return ss.str();
}

}  // namespace

Certificate forced(const model::ResolvedTemplate& t, long long lo, long long n,
                   const Options& opt) {
  if (lo > n) throw std::invalid_argument("forced: lo > n");
  Certificate cert;
  cert.template_name = t.name;
  cert.params = t.bound_params;
  cert.lo = lo;
  cert.n = n;
  cert.engine_version = kEngineVersion;
  cert.mode = opt.threads > 1 ? "parallel:" + std::to_string(opt.threads)
                              : "sequential";

  BuiltSets built = build_sets(t, lo, n);
  if (built.singleton) {
    // A one-element instance is monochromatic under every coloring.
    cert.verdict = Verdict::Forced;
    cert.note = "degenerate instance {" + std::to_string(built.singleton->first) +
                "} (" + assignment_text(t, built.singleton->second) +
                ") is monochromatic under every coloring";
    return cert;
  }

  SharedBudget budget;
  init_budget(budget, opt);
  SubResult r;
  if (opt.threads > 1) {
    r = search_parallel(built, opt, budget);
  } else {
    Engine e(built);
    r = e.run({}, opt.fix_first_color, budget);
  }
  cert.verdict = r.verdict;
  cert.nodes = r.nodes;
  cert.propagations = r.propagations;
  if (r.verdict == Verdict::Avoidable) {
    cert.witness = model::Coloring::explicit_bits(lo, r.witness);
    if (!verify_witness(t, *cert.witness))
      throw std::logic_error("engine produced a non-verifying witness");
  }
  if (r.verdict == Verdict::Inconclusive) cert.note = "budget exhausted";
  return cert;
}

std::optional<model::Coloring> find_witness(const model::ResolvedTemplate& t,
                                            long long lo, long long n,
                                            const Options& opt) {
  Certificate c = forced(t, lo, n, opt);
  if (c.verdict == Verdict::Inconclusive)
    throw CapError("find_witness: budget exhausted");
  return c.witness;
}

ThresholdReport threshold(const model::ResolvedTemplate& t, long long lo,
                          long long max_n, const Options& opt) {
  if (max_n < lo) throw std::invalid_argument("threshold: max_n < lo");
  ThresholdReport rep;
  rep.template_name = t.name;
  rep.params = t.bound_params;
  rep.lo = lo;
  rep.max_n = max_n;
  rep.engine_version = kEngineVersion;

  std::optional<std::vector<bool>> prev_bits;
  for (long long n = lo; n <= max_n; ++n) {
    // Try to extend the previous witness before searching: only instances
    // whose max value is exactly n need checking.
    bool via_hint = false;
    if (prev_bits) {
      auto insts = model::enumerate_instances(t, lo, n);
      for (int bit = 0; bit <= 1 && !via_hint; ++bit) {
        std::vector<bool> cand = *prev_bits;
        cand.push_back(bit == 1);
        bool ok = true;
        for (const auto& inst : insts) {
          if (inst.values.back() != n) continue;
          int first = cand[inst.values.front() - lo] ? 1 : 0;
          bool mono = true;
          for (long long v : inst.values)
            if ((cand[v - lo] ? 1 : 0) != first) {
              mono = false;
              break;
            }
          if (mono) {
            ok = false;
            break;
          }
        }
        if (ok) {
          prev_bits = cand;
          via_hint = true;
        }
      }
    }
    if (via_hint) {
      rep.per_n.push_back({n, Verdict::Avoidable, 0, true});
      continue;
    }
    Certificate c = forced(t, lo, n, opt);
    rep.per_n.push_back({n, c.verdict, c.nodes, false});
    if (c.verdict == Verdict::Inconclusive) {
      rep.inconclusive = true;
      return rep;
    }
    if (c.verdict == Verdict::Forced) {
      rep.n_star = n;
      break;
    }
    prev_bits = std::vector<bool>();
    for (long long v = lo; v <= n; ++v)
      prev_bits->push_back(c.witness->color_of(v) == 1);
  }

  // Report the canonical (lex-least) witness at N*-1, or at max_n when no
  // forcing was found.
  long long wn = rep.n_star ? *rep.n_star - 1 : max_n;
  if (wn >= lo) rep.witness = find_witness(t, lo, wn, opt);
  return rep;
}

bool verify_witness(const model::ResolvedTemplate& t, const model::Coloring& c) {
  auto insts = model::enumerate_instances(t, c.lo(), c.hi());
  for (const auto& inst : insts)
    if (c.monochromatic_color(inst.values)) return false;
  return true;
}

}  // namespace sumprod::search
