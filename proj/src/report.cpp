#include "sumprod/report.hpp"

#include <sstream>

namespace sumprod::report {

namespace {

std::string coloring_inline(const model::Coloring& c) {
  if (!c.is_explicit()) return c.describe();
  if (c.size() > 512) return "explicit (" + std::to_string(c.size()) + " bits)";
  std::string bits;
  for (long long v = c.lo(); v <= c.hi(); ++v) bits += c.color_of(v) ? '1' : '0';
  return bits;
}

std::string big_list(const std::vector<BigInt>& xs) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) ss << " ";
    ss << xs[i].get_str();
  }
  return ss.str();
}

std::string ll_list(const std::vector<long long>& xs) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) ss << " ";
    ss << xs[i];
  }
  return ss.str();
}

void ladder_lines(std::ostringstream& ss, const extract::Ladder& lad) {
  ss << "ladder: " << ll_list(lad.entries) << "\n";
  std::ostringstream bs;
  for (std::size_t i = 0; i < lad.bounds.size(); ++i) {
    if (i) bs << " ";
    bs << lad.bounds[i].get_str();
  }
  ss << "ladder-bounds: " << bs.str() << "\n";
  ss << "ladder-complete: " << (lad.complete ? "true" : "false") << "\n";
  if (!lad.complete)
    ss << "ladder-exhaustion: step " << lad.failed_step << ": " << lad.exhaustion
       << "\n";
}

}  // namespace

std::string params_text(const model::ParamMap& params) {
  if (params.empty()) return "(none)";
  std::ostringstream ss;
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) ss << ",";
    ss << k << "=" << v;
    first = false;
  }
  return ss.str();
}

std::string render(const search::Certificate& c) {
  std::ostringstream ss;
  ss << "report: certificate\n";
  ss << "engine: " << c.engine_version << "\n";
  ss << "template: " << c.template_name << "\n";
  ss << "params: " << params_text(c.params) << "\n";
  ss << "lo: " << c.lo << "\n";
  ss << "n: " << c.n << "\n";
  ss << "mode: " << c.mode << "\n";
  ss << "verdict: " << search::to_string(c.verdict) << "\n";
  ss << "nodes: " << c.nodes << "\n";
  ss << "propagations: " << c.propagations << "\n";
  if (!c.note.empty()) ss << "note: " << c.note << "\n";
  if (c.witness) {
    ss << "witness: " << coloring_inline(*c.witness) << "\n";
    ss << "witness-verified: true\n";
  }
  return ss.str();
}

std::string render(const search::ThresholdReport& r) {
  std::ostringstream ss;
  ss << "report: threshold\n";
  ss << "engine: " << r.engine_version << "\n";
  ss << "template: " << r.template_name << "\n";
  ss << "params: " << params_text(r.params) << "\n";
  ss << "lo: " << r.lo << "\n";
  ss << "max-n: " << r.max_n << "\n";
  if (r.inconclusive)
    ss << "n-star: inconclusive\n";
  else if (r.n_star)
    ss << "n-star: " << *r.n_star << "\n";
  else
    ss << "n-star: exceeds " << r.max_n << "\n";
  for (const auto& e : r.per_n) {
    ss << "per-n: " << e.n << " " << search::to_string(e.verdict)
       << " nodes=" << e.nodes;
    if (e.via_hint) ss << " hint";
    ss << "\n";
  }
  if (r.witness) {
    ss << "witness-n: " << r.witness->hi() << "\n";
    ss << "witness: " << coloring_inline(*r.witness) << "\n";
  }
  return ss.str();
}

std::string render(const extract::ExtractOutcome& o) {
  std::ostringstream ss;
  ss << "report: extract\n";
  if (auto* e = std::get_if<extract::Extraction>(&o)) {
    ss << "mode: " << e->mode << "\n";
    ss << "n: " << e->n << "\n";
    ss << "outcome: extracted\n";
    ss << "color: " << e->color << "\n";
    ss << "assignment: " << big_list(e->assignment) << "\n";
    ss << "configuration: " << big_list(e->configuration) << "\n";
    ladder_lines(ss, e->ladder);
    for (const auto& t : e->trace)
      ss << "trace: " << t.point << " " << t.what << " = " << t.value.get_str()
         << " color=" << t.color << (t.holds ? " holds" : " fails") << "\n";
  } else {
    const auto& f = std::get<extract::ExtractionFailure>(o);
    ss << "outcome: failure\n";
    ss << "failure-kind: " << extract::to_string(f.kind) << "\n";
    ss << "failure-detail: " << f.detail << "\n";
    ladder_lines(ss, f.ladder);
    for (const auto& t : f.trace)
      ss << "trace: " << t.point << " " << t.what << " = " << t.value.get_str()
         << " color=" << t.color << (t.holds ? " holds" : " fails") << "\n";
  }
  return ss.str();
}

std::string render(const thick::Classification& c) {
  std::ostringstream ss;
  ss << "report: classify\n";
  ss << "label: " << thick::to_string(c.label) << "\n";
  if (!c.note.empty()) ss << "note: " << c.note << "\n";
  auto tev = [&](int cls, const thick::ThickEvidence& ev) {
    ss << "thick-" << cls << ": " << (ev.thick ? "true" : "false");
    if (!ev.thick) ss << " failed-f=" << ev.failed_f;
    ss << "\n";
    for (const auto& run : ev.runs)
      ss << "thick-" << cls << "-run: f=" << run.f << " a=[" << ll_list(run.a_values)
         << "]\n";
  };
  tev(0, c.thick0);
  tev(1, c.thick1);
  auto sev = [&](int cls, const thick::SyndeticEvidence& ev) {
    ss << "syndetic-" << cls << ": " << (ev.syndetic ? "true" : "false");
    if (ev.syndetic) ss << " F=[" << ll_list(ev.covering) << "]";
    else if (ev.last_violator) ss << " violator=" << *ev.last_violator;
    ss << "\n";
  };
  sev(0, c.synd0);
  sev(1, c.synd1);
  return ss.str();
}

std::string render_structure(const std::optional<hindman::Structure>& s,
                             const model::Coloring& c) {
  std::ostringstream ss;
  ss << "report: structures\n";
  if (!s) {
    ss << "outcome: none\n";
    return ss.str();
  }
  ss << "outcome: found\n";
  ss << "color: " << s->color << "\n";
  for (std::size_t i = 0; i < s->seq.sets.size(); ++i)
    ss << "S" << (i + 1) << ": " << ll_list(s->seq.sets[i]) << "\n";
  for (const auto& pv : hindman::enumerate_pos_values(s->seq)) {
    auto v = to_i64(pv.value);
    ss << "value: F={" << ll_list(pv.F) << "} -> " << pv.value.get_str()
       << " color=" << (v ? std::to_string(c.color_of(*v)) : "?") << "\n";
  }
  return ss.str();
}

std::string render_bistructure(const std::optional<hindman::BiStructure>& s,
                               const model::Coloring& c) {
  std::ostringstream ss;
  ss << "report: bichromatic\n";
  if (!s) {
    ss << "outcome: none\n";
    return ss.str();
  }
  ss << "outcome: found\n";
  ss << "color-i: " << s->color << "\n";
  ss << "S0: " << ll_list(s->s0) << "\n";
  for (std::size_t i = 0; i < s->seq.sets.size(); ++i)
    ss << "S" << (i + 1) << ": " << ll_list(s->seq.sets[i]) << "\n";
  // full audit table over S_0 u S_1..k
  std::vector<std::vector<long long>> all;
  all.push_back(s->s0);
  for (const auto& x : s->seq.sets) all.push_back(x);
  auto seq = hindman::SetSequence::make(all);
  for (const auto& pv : hindman::enumerate_pos_values(seq)) {
    bool meets = false;
    for (long long x : pv.F)
      for (long long y : s->s0)
        if (x == y) meets = true;
    auto v = to_i64(pv.value);
    ss << "value: F={" << ll_list(pv.F) << "} -> " << pv.value.get_str()
       << " color=" << (v ? std::to_string(c.color_of(*v)) : "?")
       << (meets ? " meets-S0" : "") << "\n";
  }
  return ss.str();
}

std::string render_bridge(const hindman::BridgePair& b) {
  std::ostringstream ss;
  ss << "report: bridge\n";
  ss << "a: " << b.a.get_str() << "\n";
  ss << "b: " << b.b.get_str() << "\n";
  ss << "F: " << big_list(b.F) << "\n";
  ss << "G: " << big_list(b.G) << "\n";
  BigInt sum = 0, prod = 1;
  for (const auto& x : b.F) sum += x;
  for (const auto& x : b.G) prod *= x;
  ss << "sum-F: " << sum.get_str() << "\n";
  ss << "prod-G: " << prod.get_str() << "\n";
  ss << "identity: " << (sum == prod ? "true" : "false") << "\n";
  return ss.str();
}

std::string render_vdw(const std::optional<long long>& d) {
  std::ostringstream ss;
  ss << "report: vdw-step\n";
  if (d)
    ss << "d: " << *d << "\n";
  else
    ss << "d: none\n";
  return ss.str();
}

}  // namespace sumprod::report
