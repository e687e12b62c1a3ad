// gcbp: command-line front end for the bin packing solvers.
//
// Exit codes: 0 success, 1 usage or input error, 2 infeasible or failed
// verification, 3 budget exhausted.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gcbp/gcbp.hpp"

namespace {

using namespace gcbp;

constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;

std::uint64_t default_budget() {
  if (const char* env = std::getenv("GCBP_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable GCBP_BUDGET=" << env << "\n";
    }
  }
  return kDefaultNodeBudget;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int run_classify(const std::string& path, bool as_json) {
  const Instance inst = parse_instance_file(path);
  const auto cls = minimizer_k(inst.cost());
  if (as_json) {
    Json j;
    j["n"] = inst.size();
    j["k"] = cls.k;
    j["verdict"] = to_string(cls.verdict);
    Json f = Json::array();
    for (const auto& v : cls.f_over_j) f.push_back(to_string(v));
    j["average_cost"] = f;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "n        " << inst.size() << "\n"
            << "k        " << cls.k << "\n"
            << "verdict  " << to_string(cls.verdict) << "\n";
  for (std::size_t j = 0; j < cls.f_over_j.size(); ++j) {
    std::cout << "F(" << j + 1 << ") = " << to_string(cls.f_over_j[j]) << "\n";
  }
  return 0;
}

int run_solve(const std::string& path, const std::string& algorithm, const std::string& epsilon, std::uint64_t budget,
              bool force, const std::string& out_path) {
  const Instance inst = parse_instance_file(path);
  SolveOptions opts;
  opts.algorithm = parse_algorithm(algorithm);
  opts.epsilon = parse_rational(epsilon);
  inverse_epsilon(opts.epsilon);
  opts.budget = budget;
  opts.force = force;
  const SolveOutcome outcome = solve(inst, opts);

  const auto report = verify_packing(inst, outcome.packing);
  const AptasCertificate* cert = outcome.certificate ? &*outcome.certificate : nullptr;
  emit(out_path, packing_to_text(inst, outcome.packing, to_string(outcome.used), cert));
  const Rational cost = packing_cost(inst, outcome.packing);
  std::cerr << to_string(outcome.used) << ": " << outcome.packing.bins.size() << " bins, cost "
            << to_string(inst.cost().to_raw(cost)) << "\n";
  if (!report.ok()) {
    std::cerr << "verification failed: " << report.describe() << "\n";
    return kExitInfeasible;
  }
  if (cert && cert->degraded) {
    std::cerr << "budget exhausted; returning the best packing found so far\n";
    return kExitBudget;
  }
  return 0;
}

int run_verify(const std::string& instance_path, const std::string& packing_path) {
  const Instance inst = parse_instance_file(instance_path);
  const Packing p = parse_packing_file(packing_path);
  const auto report = verify_packing(inst, p);
  if (!report.ok()) {
    std::cout << "INVALID: " << report.describe() << "\n";
    return kExitInfeasible;
  }
  const Rational cost = packing_cost(inst, p);
  std::cout << "OK: " << p.bins.size() << " bins, cost " << to_string(inst.cost().to_raw(cost)) << "\n";
  return 0;
}

int run_bench_cmd(const std::vector<std::string>& paths, const std::string& algorithms, const std::string& epsilons,
                  std::uint64_t budget, std::size_t oracle_limit, bool timing, const std::string& format,
                  const std::string& out_path) {
  std::vector<BenchCase> cases;
  for (const auto& p : paths) cases.push_back(BenchCase{p, parse_instance_file(p)});
  BenchOptions opts;
  opts.algorithms = gcbp::detail::split(algorithms, ',');
  for (const auto& a : opts.algorithms) parse_algorithm(a);
  opts.epsilons.clear();
  for (const auto& e : gcbp::detail::split(epsilons, ',')) {
    opts.epsilons.push_back(parse_rational(e));
    inverse_epsilon(opts.epsilons.back());
  }
  opts.budget = budget;
  opts.oracle_limit = oracle_limit;
  opts.timing = timing;
  const auto rows = run_bench(cases, opts);
  std::ostringstream text;
  if (format == "table") {
    write_bench_table(rows, text);
  } else {
    write_bench_jsonl(rows, text);
  }
  emit(out_path, text.str());
  return 0;
}

std::vector<long> parse_integer_list(const std::string& text) {
  std::vector<long> out;
  for (const auto& token : gcbp::detail::split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "not an integer: '" + token + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bin packing with general cost structures"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string out_path;

  auto* classify = app.add_subcommand("classify", "Report the cost minimizer k and the complexity verdict");
  bool classify_json = false;
  classify->add_option("instance", instance_path, "Instance file")->required();
  classify->add_flag("--json", classify_json, "Print JSON");

  auto* solve_cmd = app.add_subcommand("solve", "Pack an instance");
  std::string algorithm = "auto";
  std::string epsilon = "1/2";
  std::uint64_t budget = default_budget();
  bool force = false;
  solve_cmd->add_option("instance", instance_path, "Instance file")->required();
  solve_cmd->add_option("-a,--algorithm", algorithm, "auto|k1|k2|aptas|oracle|greedy")->capture_default_str();
  solve_cmd->add_option("-e,--epsilon", epsilon, "Accuracy 1/q for aptas")->capture_default_str();
  solve_cmd->add_option("-b,--budget", budget, "Guesses plus branch-and-bound nodes (env GCBP_BUDGET)")
      ->capture_default_str();
  solve_cmd->add_flag("--force", force, "Run k1/k2 even when the cost function has another minimizer");
  solve_cmd->add_option("-o,--output", out_path, "Packing file (default stdout)");

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  std::size_t gen_n = 8;
  std::string size_model = "uniform:10";
  std::string cost_model = "random-monotone";
  std::uint64_t seed = 1;
  gen->add_option("-n,--items", gen_n, "Number of items")->capture_default_str();
  gen->add_option("--sizes", size_model, "uniform:D | discrete:a,b,...")->capture_default_str();
  gen->add_option("--cost", cost_model, "flat | linear | concave | step:K[:x] | random-monotone")
      ->capture_default_str();
  gen->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen->add_option("-o,--output", out_path, "Instance file (default stdout)");

  auto* reduce = app.add_subcommand("reduce-3p", "Build the instance of a 3-Partition reduction");
  std::string integers;
  long bound = 0;
  std::size_t target_k = 3;
  reduce->add_option("--integers", integers, "Comma-separated 3m integers")->required();
  reduce->add_option("--bound", bound, "Target triple sum")->required();
  reduce->add_option("-k", target_k, "Cost minimizer of the produced instance (>= 3)")->capture_default_str();
  reduce->add_option("-o,--output", out_path, "Instance file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check a packing against an instance");
  std::string packing_path;
  verify->add_option("instance", instance_path, "Instance file")->required();
  verify->add_option("packing", packing_path, "Packing file")->required();

  auto* bench = app.add_subcommand("bench", "Run algorithms over a set of instances");
  std::vector<std::string> bench_paths;
  std::string bench_algorithms = "greedy,aptas,oracle";
  std::string bench_eps = "1/2";
  std::size_t oracle_limit = kDefaultOracleLimit;
  bool timing = false;
  std::string format = "jsonl";
  bench->add_option("instances", bench_paths, "Instance files");
  bench->add_option("--algorithms", bench_algorithms, "Comma-separated algorithms")->capture_default_str();
  bench->add_option("--epsilon", bench_eps, "Comma-separated accuracies for aptas")->capture_default_str();
  bench->add_option("-b,--budget", budget, "Budget per aptas run (env GCBP_BUDGET)")->capture_default_str();
  bench->add_option("--oracle-limit", oracle_limit, "Largest n for the exact oracle")->capture_default_str();
  bench->add_flag("--timing", timing, "Record wall-clock times (output is then not reproducible)");
  bench->add_option("--format", format, "jsonl|table")->check(CLI::IsMember({"jsonl", "table"}))->capture_default_str();
  bench->add_option("-o,--output", out_path, "Report file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify) return run_classify(instance_path, classify_json);
    if (*solve_cmd) return run_solve(instance_path, algorithm, epsilon, budget, force, out_path);
    if (*gen) {
      emit(out_path, instance_to_text(generate_random_instance(gen_n, size_model, cost_model, seed)));
      return 0;
    }
    if (*reduce) {
      const Reduction r = reduce_3partition(ThreePartitionInput{parse_integer_list(integers), bound, target_k});
      emit(out_path, instance_to_text(r.file));
      std::cerr << "threshold m*f(k) = " << to_string(r.threshold) << "\n";
      return 0;
    }
    if (*verify) return run_verify(instance_path, packing_path);
    if (*bench) return run_bench_cmd(bench_paths, bench_algorithms, bench_eps, budget, oracle_limit, timing, format, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::BudgetExceeded: return kExitBudget;
      case ErrorKind::InternalInfeasible: return kExitInfeasible;
      default: return kExitInput;
    }
  }
  return 0;
}
