#include "sumprod/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sumprod/cnf.hpp"
#include "sumprod/extract.hpp"
#include "sumprod/hindman.hpp"
#include "sumprod/report.hpp"
#include "sumprod/search.hpp"
#include "sumprod/thickness.hpp"
#include "sumprod/version.hpp"

namespace sumprod::cli {

namespace {

std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (long long v : parse_ll_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

void add_param_option(CLI::App* cmd, model::ParamMap* params) {
  cmd->add_option_function<std::vector<std::string>>(
      "--param",
      [params](const std::vector<std::string>& items) {
        for (const auto& it : items) {
          auto eq = it.find('=');
          if (eq == std::string::npos)
            throw CLI::ValidationError("--param", "expected k=v");
          (*params)[it.substr(0, eq)] = std::stoll(it.substr(eq + 1));
        }
      },
      "template parameter binding k=v (repeatable)");
}

}  // namespace

RunPlan parse_args(const std::vector<std::string>& args) {
  RunPlan p;
  CLI::App app{"additive-multiplicative Ramsey search toolkit"};
  app.require_subcommand(1);

  auto add_search_flags = [&](CLI::App* cmd) {
    cmd->add_option("--template", p.template_path, "template file")->required();
    add_param_option(cmd, &p.params);
    cmd->add_option("--lo", p.lo, "interval lower end");
    cmd->add_option("--budget-nodes", p.budget_nodes, "search node budget");
    cmd->add_option("--budget-seconds", p.budget_seconds, "wall clock budget");
    cmd->add_option("--threads", p.threads, "parallel subtree workers");
    cmd->add_flag("--no-fix-first", p.no_fix_first,
                  "disable the first-element symmetry break");
    cmd->add_option("--out", p.out_path, "write the report here too");
    cmd->add_option("--witness-out", p.witness_out, "write witness coloring file");
    cmd->add_option("--seed", p.seed, "recorded in the plan");
  };

  auto* forced = app.add_subcommand("forced", "decide forcing on [lo,N]");
  add_search_flags(forced);
  forced->add_option("--n", p.n, "interval upper end")->required();

  auto* witness = app.add_subcommand("witness", "find the least avoiding coloring");
  add_search_flags(witness);
  witness->add_option("--n", p.n, "interval upper end")->required();

  auto* threshold = app.add_subcommand("threshold", "minimal forcing N*");
  add_search_flags(threshold);
  threshold->add_option("--max-n", p.max_n, "search up to this N")->required();

  auto* verify = app.add_subcommand("verify", "check a coloring against a template");
  verify->add_option("--template", p.template_path)->required();
  add_param_option(verify, &p.params);
  verify->add_option("--coloring", p.coloring_spec, "file:<path> or rule:<name>:<k=v,...>")
      ->required();
  verify->add_option("--lo", p.lo);
  verify->add_option("--hi", p.hi);
  verify->add_option("--out", p.out_path);
  verify->add_option("--seed", p.seed);

  auto* cnf_cmd = app.add_subcommand("cnf", "DIMACS bridge");
  cnf_cmd->require_subcommand(1);
  auto* emit = cnf_cmd->add_subcommand("emit", "write the avoiding-coloring CNF");
  emit->add_option("--template", p.template_path)->required();
  add_param_option(emit, &p.params);
  emit->add_option("--lo", p.lo);
  emit->add_option("--n", p.n)->required();
  emit->add_option("--out", p.out_path, "CNF output path")->required();
  emit->add_flag("--fix-first", p.cnf_fix_first, "add the first-zero unit clause");
  emit->add_option("--seed", p.seed);
  auto* checkm = cnf_cmd->add_subcommand("check-model", "verify a solver model");
  checkm->add_option("--template", p.template_path)->required();
  add_param_option(checkm, &p.params);
  checkm->add_option("--lo", p.lo);
  checkm->add_option("--n", p.n)->required();
  checkm->add_option("--model", p.model_path, "model text file")->required();
  checkm->add_option("--out", p.out_path);
  checkm->add_option("--seed", p.seed);

  auto* structures = app.add_subcommand("structures", "monochromatic products-of-sums");
  structures->add_option("--coloring", p.coloring_spec)->required();
  structures->add_option("--lo", p.lo);
  structures->add_option("--hi", p.hi);
  structures->add_option("--sizes", p.sizes_text, "e.g. 2,1")->required();
  structures->add_option("--out", p.out_path);
  structures->add_option("--seed", p.seed);

  auto* bi = app.add_subcommand("bichromatic", "split products-of-sums structure");
  bi->add_option("--coloring", p.coloring_spec)->required();
  bi->add_option("--lo", p.lo);
  bi->add_option("--hi", p.hi);
  bi->add_option("--size0", p.size0, "|S_0|")->required();
  bi->add_option("--sizes", p.sizes_text)->required();
  bi->add_option("--out", p.out_path);
  bi->add_option("--seed", p.seed);

  auto* bridge = app.add_subcommand("bridge", "sum F = prod G construction");
  bridge->add_option("--s0", p.s0_text, "S_0 as comma list")->required();
  bridge->add_option("--s", p.s_texts, "S_i as comma list (repeatable)")->required();
  bridge->add_option("--pick", p.picks, "one element of each S_i (repeatable)")
      ->required();
  bridge->add_option("--out", p.out_path);
  bridge->add_option("--seed", p.seed);

  auto* vdw = app.add_subcommand("vdw-step", "common difference in FS(S)");
  vdw->add_option("--a", p.a_spec, "all|even|odd|mult:<k>|list:<v,v,..>")->required();
  vdw->add_option("--lo", p.lo);
  vdw->add_option("--hi", p.hi)->required();
  vdw->add_option("--s", p.s_list, "S as comma list")->required();
  vdw->add_option("--k", p.k, "progression length")->required();
  vdw->add_option("--tau", p.tau_text, "density threshold in (0,1]");
  vdw->add_option("--out", p.out_path);
  vdw->add_option("--seed", p.seed);

  auto* extract_cmd = app.add_subcommand("extract", "constructive thick-case walk");
  extract_cmd->add_option("--coloring", p.coloring_spec)->required();
  extract_cmd->add_option("--lo", p.lo);
  extract_cmd->add_option("--hi", p.hi);
  extract_cmd->add_option("--mode", p.mode, "xny or tower")->required();
  add_param_option(extract_cmd, &p.params);
  extract_cmd->add_option("--class", p.target_class, "auto, 0 or 1");
  extract_cmd->add_option("--floor", p.floor_value, "all outputs exceed this");
  extract_cmd->add_option("--out", p.out_path);
  extract_cmd->add_option("--seed", p.seed);

  auto* classify = app.add_subcommand("classify", "thick/syndetic detectors");
  classify->add_option("--coloring", p.coloring_spec)->required();
  classify->add_option("--lo", p.lo);
  classify->add_option("--hi", p.hi);
  classify->add_option("--fbound", p.f_bound);
  classify->add_option("--min-runs", p.min_runs);
  classify->add_option("--window", p.window);
  classify->add_option("--out", p.out_path);
  classify->add_option("--seed", p.seed);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (auto* sub : app.get_subcommands()) {
    p.subcommand = sub->get_name();
    if (p.subcommand == "cnf") {
      auto nested = sub->get_subcommands();
      p.subcommand = "cnf-" + nested.at(0)->get_name();
    }
  }
  return p;
}

std::string render_plan(const RunPlan& p) {
  std::ostringstream ss;
  if (p.subcommand.rfind("cnf-", 0) == 0)
    ss << "cnf " << p.subcommand.substr(4);
  else
    ss << p.subcommand;
  auto opt = [&](const std::string& flag, const std::string& v) {
    if (!v.empty()) ss << " " << flag << " " << v;
  };
  opt("--template", p.template_path);
  for (const auto& [k, v] : p.params)
    ss << " --param " << k << "=" << v;
  opt("--coloring", p.coloring_spec);
  ss << " --lo " << p.lo;
  if (p.n) ss << " --n " << p.n;
  if (p.max_n) ss << " --max-n " << p.max_n;
  if (p.hi) ss << " --hi " << p.hi;
  if (p.subcommand == "forced" || p.subcommand == "witness" ||
      p.subcommand == "threshold") {
    ss << " --budget-nodes " << p.budget_nodes;
    ss << " --budget-seconds " << p.budget_seconds;
    ss << " --threads " << p.threads;
    if (p.no_fix_first) ss << " --no-fix-first";
  }
  if (p.cnf_fix_first) ss << " --fix-first";
  opt("--model", p.model_path);
  opt("--sizes", p.sizes_text);
  if (p.size0) ss << " --size0 " << p.size0;
  opt("--s0", p.s0_text);
  for (const auto& s : p.s_texts) ss << " --s " << s;
  for (long long pk : p.picks) ss << " --pick " << pk;
  opt("--a", p.a_spec);
  opt("--s", p.s_list);
  if (p.subcommand == "vdw-step") {
    ss << " --k " << p.k;
    ss << " --tau " << p.tau_text;
  }
  opt("--mode", p.mode);
  if (p.subcommand == "extract") {
    ss << " --class " << p.target_class;
    ss << " --floor " << p.floor_value;
  }
  if (p.subcommand == "classify") {
    ss << " --fbound " << p.f_bound;
    ss << " --min-runs " << p.min_runs;
    ss << " --window " << p.window;
  }
  opt("--witness-out", p.witness_out);
  opt("--out", p.out_path);
  if (p.seed) ss << " --seed " << p.seed;
  return ss.str();
}

namespace {

model::ResolvedTemplate load_bound(const RunPlan& p) {
  model::Template t = model::load_template(p.template_path);
  return model::bind_template(t, p.params);
}

model::Coloring plan_coloring(const RunPlan& p) {
  return model::Coloring::parse_spec(p.coloring_spec, p.lo, p.hi);
}

search::Options plan_options(const RunPlan& p) {
  search::Options opt;
  opt.budget.max_nodes = p.budget_nodes;
  opt.budget.max_seconds = p.budget_seconds;
  opt.fix_first_color = !p.no_fix_first;
  opt.threads = p.threads;
  return opt;
}

std::vector<long long> build_a_set(const RunPlan& p) {
  std::vector<long long> a;
  if (p.a_spec.rfind("list:", 0) == 0) {
    a = parse_ll_list(p.a_spec.substr(5));
  } else if (p.a_spec == "all") {
    for (long long v = p.lo; v <= p.hi; ++v) a.push_back(v);
  } else if (p.a_spec == "even") {
    for (long long v = p.lo; v <= p.hi; ++v)
      if (v % 2 == 0) a.push_back(v);
  } else if (p.a_spec == "odd") {
    for (long long v = p.lo; v <= p.hi; ++v)
      if (v % 2 == 1) a.push_back(v);
  } else if (p.a_spec.rfind("mult:", 0) == 0) {
    long long k = std::stoll(p.a_spec.substr(5));
    for (long long v = p.lo; v <= p.hi; ++v)
      if (v % k == 0) a.push_back(v);
  } else {
    throw UsageError("bad --a spec: " + p.a_spec);
  }
  return a;
}

int run_plan(const RunPlan& p, std::ostream& out) {
  std::ostringstream rep;
  rep << "plan: " << render_plan(p) << "\n";
  rep << "engine: " << kEngineVersion << "\n";
  int code = 0;

  if (p.subcommand == "forced" || p.subcommand == "witness") {
    auto t = load_bound(p);
    auto cert = search::forced(t, p.lo, p.n, plan_options(p));
    rep << report::render(cert);
    if (cert.witness && !p.witness_out.empty()) {
      cert.witness->save(p.witness_out);
      rep << "witness-path: " << p.witness_out << "\n";
    }
    if (cert.verdict == search::Verdict::Inconclusive) code = 3;
  } else if (p.subcommand == "threshold") {
    auto t = load_bound(p);
    auto r = search::threshold(t, p.lo, p.max_n, plan_options(p));
    rep << report::render(r);
    if (r.witness && !p.witness_out.empty()) {
      r.witness->save(p.witness_out);
      rep << "witness-path: " << p.witness_out << "\n";
    }
    if (r.inconclusive || !r.n_star) code = 3;
  } else if (p.subcommand == "verify") {
    auto t = load_bound(p);
    auto c = plan_coloring(p);
    bool ok = search::verify_witness(t, c);
    rep << "report: verify\n";
    rep << "witness-valid: " << (ok ? "true" : "false") << "\n";
  } else if (p.subcommand == "cnf-emit") {
    auto t = load_bound(p);
    auto doc = cnf::encode(t, p.lo, p.n, p.cnf_fix_first);
    cnf::write_dimacs(doc, p.out_path);
    rep << "report: cnf-emit\n";
    rep << "cnf-path: " << p.out_path << "\n";
    rep << "vars: " << doc.var_count << "\n";
    rep << "clauses: " << doc.clauses.size() << "\n";
    out << rep.str();
    return 0;  // --out names the CNF here, not the report
  } else if (p.subcommand == "cnf-check-model") {
    auto t = load_bound(p);
    std::ifstream mf(p.model_path);
    if (!mf) throw std::runtime_error("cannot open model file: " + p.model_path);
    std::ostringstream mtext;
    mtext << mf.rdbuf();
    bool ok = cnf::check_model(t, p.lo, p.n, mtext.str());
    rep << "report: cnf-check-model\n";
    rep << "model-valid: " << (ok ? "true" : "false") << "\n";
  } else if (p.subcommand == "structures") {
    auto c = plan_coloring(p);
    auto s = hindman::find_structure(c, parse_int_list(p.sizes_text));
    rep << report::render_structure(s, c);
  } else if (p.subcommand == "bichromatic") {
    auto c = plan_coloring(p);
    auto s = hindman::find_bichromatic_structure(c, p.size0,
                                                 parse_int_list(p.sizes_text));
    rep << report::render_bistructure(s, c);
  } else if (p.subcommand == "bridge") {
    std::vector<std::vector<long long>> sets;
    sets.push_back(parse_ll_list(p.s0_text));
    for (const auto& s : p.s_texts) sets.push_back(parse_ll_list(s));
    auto seq = hindman::SetSequence::make(sets);
    auto b = hindman::bridge_sum_product(seq, p.picks);
    rep << report::render_bridge(b);
  } else if (p.subcommand == "vdw-step") {
    auto d = hindman::find_vdw_step(build_a_set(p), parse_ll_list(p.s_list), p.k,
                                    std::stod(p.tau_text), p.lo, p.hi);
    rep << report::render_vdw(d);
  } else if (p.subcommand == "extract") {
    auto c = plan_coloring(p);
    long long n = 1;
    if (auto it = p.params.find("n"); it != p.params.end()) n = it->second;
    int target;
    if (p.target_class == "0") target = 0;
    else if (p.target_class == "1") target = 1;
    else {
      auto cls = thick::classify_coloring(c, 5, 3,
                                          std::min<long long>(c.size(), 100'000));
      if (cls.label == thick::ColoringClass::ThickClass0) target = 0;
      else if (cls.label == thick::ColoringClass::ThickClass1) target = 1;
      else {
        rep << "report: extract\n";
        rep << "outcome: failure\n";
        rep << "failure-kind: witness-failure\n";
        rep << "failure-detail: no multiplicatively thick class detected ("
            << thick::to_string(cls.label) << "); balanced inputs route to the "
            << "search engine\n";
        out << rep.str();
        if (!p.out_path.empty()) {
          std::ofstream f(p.out_path);
          f << rep.str();
        }
        return 3;
      }
    }
    thick::ThicknessWitness w(c, target);
    extract::ExtractOutcome o =
        p.mode == "tower" ? extract::extract_tower(w, n, p.floor_value)
                          : extract::extract_xy_xny(w, n, p.floor_value);
    rep << report::render(o);
    rep << "witness-queries: " << w.queries().size() << "\n";
    if (!extract::succeeded(o)) code = 3;
  } else if (p.subcommand == "classify") {
    auto c = plan_coloring(p);
    auto cls = thick::classify_coloring(c, p.f_bound, p.min_runs, p.window);
    rep << report::render(cls);
  } else {
    throw UsageError("unknown subcommand " + p.subcommand);
  }

  out << rep.str();
  if (!p.out_path.empty() && p.subcommand != "cnf-emit") {
    std::ofstream f(p.out_path);
    if (!f) throw std::runtime_error("cannot write report to " + p.out_path);
    f << rep.str();
  }
  return code;
}

}  // namespace

int execute(const RunPlan& p, std::ostream& out) { return run_plan(p, out); }

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    RunPlan p = parse_args(args);
    return execute(p, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sumprod::cli
