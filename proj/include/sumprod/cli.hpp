#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sumprod/template.hpp"

namespace sumprod::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fully resolved invocation; serialized verbatim into every report.
struct RunPlan {
  std::string subcommand;  // forced, threshold, witness, verify, cnf-emit,
                           // cnf-check-model, structures, bichromatic,
                           // bridge, vdw-step, extract, classify
  std::string template_path;
  model::ParamMap params;
  long long lo = 1;
  long long n = 0;
  long long max_n = 0;
  long long hi = 0;
  std::string coloring_spec;
  long long budget_nodes = 100'000'000;
  double budget_seconds = 600.0;
  int threads = 1;
  bool no_fix_first = false;  // search symmetry breaking off
  bool cnf_fix_first = false; // optional unit clause in the encoder
  std::string out_path;
  std::string witness_out;
  std::string model_path;
  std::string sizes_text;
  int size0 = 0;
  std::string s0_text;
  std::vector<std::string> s_texts;
  std::vector<long long> picks;
  std::string a_spec;
  std::string s_list;
  int k = 1;
  std::string tau_text = "0.5";
  std::string mode;          // xny | tower
  std::string target_class = "auto";
  long long floor_value = 1;
  long long f_bound = 5;
  int min_runs = 3;
  long long window = 100'000;
  long long seed = 0;
};

// argv without the program name. Throws UsageError on bad flags.
RunPlan parse_args(const std::vector<std::string>& args);

// Canonical flag form; parse_args(split(render_plan(p))) reproduces p.
std::string render_plan(const RunPlan& p);

// Runs the plan, writing the report to `out`.
// Exit codes: 0 definitive, 1 internal error, 2 usage, 3 inconclusive /
// budget / threshold-exceeded / extraction failure.
int execute(const RunPlan& p, std::ostream& out);

int main_entry(int argc, char** argv);

}  // namespace sumprod::cli
