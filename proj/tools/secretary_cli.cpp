// Command line front end: reproducible experiments over the shared
// Q-queue J-choice K-best secretary problem.
//
// Exit codes: 0 success, 1 input error, 2 certificate failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secretary/secretary.hpp"

namespace {

using namespace secretary;

std::optional<int> opt_horizon(int value) {
  return value > 0 ? std::optional<int>(value) : std::nullopt;
}

ValidatedSpec load_and_validate(const std::string& path) {
  return validate_spec(load_spec_file(path));
}

ThresholdTable thresholds_for(const ValidatedSpec& spec, const std::string& csv_path,
                              std::optional<int> horizon) {
  if (csv_path.empty()) return solve_dual(spec, horizon).second;
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open thresholds file: " + csv_path);
  return read_thresholds_csv(in, spec, horizon);
}

// --exclusive "J_1:n_1,J_2:n_2,...": per-queue quotas and sizes. Each queue
// is an independent fractional J_q-choice K-best problem interviewing its
// first n_q arrivals, with ranks still global over n.
struct ExclusiveQueue {
  int quota = 0;
  int size = 0;
};

std::vector<ExclusiveQueue> parse_exclusive(const std::string& text) {
  std::vector<ExclusiveQueue> queues;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("--exclusive: expected J_q:n_q, got '" + item + "'");
    ExclusiveQueue q;
    try {
      q.quota = std::stoi(item.substr(0, colon));
      q.size = std::stoi(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("--exclusive: bad numbers in '" + item + "'");
    }
    if (q.quota < 1) throw std::runtime_error("--exclusive: each J_q must be >= 1");
    if (q.size < 1) throw std::runtime_error("--exclusive: each n_q must be >= 1");
    queues.push_back(q);
  }
  if (queues.empty()) throw std::runtime_error("--exclusive: empty queue list");
  return queues;
}

int cmd_thresholds(const std::string& spec_path, int horizon, const std::string& out_path,
                   const std::string& exclusive) {
  const ProblemSpec raw = load_spec_file(spec_path);
  std::ostringstream csv;
  if (exclusive.empty()) {
    const ValidatedSpec spec = validate_spec(raw);
    const auto [dual, table] = solve_dual(spec, opt_horizon(horizon));
    write_thresholds_csv(table, csv);
  } else {
    const auto queues = parse_exclusive(exclusive);
    int quota_sum = 0, size_sum = 0;
    for (const auto& q : queues) {
      quota_sum += q.quota;
      size_sum += q.size;
    }
    if (quota_sum != raw.quotas)
      throw std::runtime_error("--exclusive: per-queue quotas must sum to J");
    if (size_sum != raw.n) throw std::runtime_error("--exclusive: per-queue sizes must sum to n");
    if (static_cast<int>(queues.size()) != raw.queues)
      throw std::runtime_error("--exclusive: need one J_q:n_q entry per queue");
    csv << "q,j,k,threshold\n";
    for (std::size_t qi = 0; qi < queues.size(); ++qi) {
      ProblemSpec per = raw;
      per.queues = 1;
      per.quotas = queues[qi].quota;
      const ValidatedSpec spec = validate_spec(per);
      const auto [dual, table] = solve_dual(spec, queues[qi].size);
      for (int j = 1; j <= table.quotas; ++j)
        for (int k = 1; k <= table.ranks; ++k)
          csv << (qi + 1) << ',' << j << ',' << k << ',' << table.at(1, j, k) << '\n';
    }
  }
  std::cout << csv.str();
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write: " + out_path);
    out << csv.str();
  }
  return 0;
}

int cmd_run(const std::string& spec_path, const std::string& thresholds_path,
            const std::string& instance_path) {
  const ValidatedSpec spec = load_and_validate(spec_path);
  const ThresholdTable table = thresholds_for(spec, thresholds_path, std::nullopt);
  const std::vector<int> arrival = load_instance_file(instance_path);
  const RunResult result = run_instance(spec, table, arrival);
  for (const auto& hire : result.hires)
    std::cout << "q=" << hire.queue << " i=" << hire.position
              << " global_rank=" << hire.global_rank << '\n';
  std::cout << "payoff=" << format_real(result.payoff) << '\n';
  return 0;
}

int cmd_exact(const std::string& spec_path, const std::string& thresholds_path, int horizon,
              const std::string& dump_x_path) {
  const ValidatedSpec spec = load_and_validate(spec_path);
  const ThresholdTable table = thresholds_for(spec, thresholds_path, opt_horizon(horizon));
  const PrimalSolution primal = primal_from_thresholds(spec, table);
  if (!dump_x_path.empty()) {
    std::ofstream out(dump_x_path);
    if (!out) throw std::runtime_error("cannot write: " + dump_x_path);
    write_x_csv(primal, out);
  }
  std::cout << "ratio=" << format_real(primal.objective) << '\n';
  return 0;
}

int cmd_simulate(const std::string& spec_path, const std::string& thresholds_path,
                 std::int64_t trials, std::uint64_t seed, int threads) {
  const ValidatedSpec spec = load_and_validate(spec_path);
  const ThresholdTable table = thresholds_for(spec, thresholds_path, std::nullopt);
  const SimulationReport report = monte_carlo(spec, table, trials, seed, threads);
  write_simulation_report(report, std::cout);
  return 0;
}

int cmd_verify(const std::string& spec_path, int horizon) {
  const ValidatedSpec spec = load_and_validate(spec_path);
  const auto [dual, table] = solve_dual(spec, opt_horizon(horizon));
  const PrimalSolution primal = primal_from_thresholds(spec, table);
  const CertificateReport report = certify_optimal(spec, primal, dual);
  write_certificate_report(report, std::cout);
  return report.certified ? 0 : 2;
}

int cmd_analyze(const std::string& kase, int n, int k_max) {
  if (kase == "table1") {
    std::cout << "K,ratio\n";
    for (const auto& [k, ratio] : table1_reproduce(n, k_max))
      std::cout << k << ',' << format_real(ratio) << '\n';
  } else if (kase == "kbound") {
    std::cout << "K,bound\n";
    for (int k = 2; k <= k_max; ++k)
      std::cout << k << ',' << format_real(k_best_lower_bound(k)) << '\n';
  } else if (kase == "222") {
    const TwoQueueConstants c = solve_222_constants();
    std::cout << "gamma_11=" << format_real(c.gamma_11) << '\n'
              << "gamma_12=" << format_real(c.gamma_12) << '\n'
              << "gamma_21=" << format_real(c.gamma_21) << '\n'
              << "gamma_22=" << format_real(c.gamma_22) << '\n'
              << "ratio_222=" << format_real(c.ratio_222) << '\n';
  } else {
    throw std::runtime_error("unknown --case: " + kase);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal protocol toolkit for the shared Q-queue J-choice K-best secretary problem"};
  app.require_subcommand(1);

  std::string spec_path, thresholds_path, instance_path, out_path, dump_x_path, exclusive, kase;
  int horizon = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  int n = 10000, k_max = 10;

  auto* thresholds_cmd =
      app.add_subcommand("thresholds", "compute the crucial-position table (preprocessing)");
  thresholds_cmd->add_option("spec", spec_path, "problem spec file")->required();
  thresholds_cmd->add_option("--horizon", horizon, "interview only the first m positions per queue");
  thresholds_cmd->add_option("--out", out_path, "also write the CSV to this path");
  thresholds_cmd->add_option("--exclusive", exclusive,
                             "per-queue quotas and sizes J_1:n_1,J_2:n_2,...");

  auto* run_cmd = app.add_subcommand("run", "play one arrival order through the protocol");
  run_cmd->add_option("spec", spec_path, "problem spec file")->required();
  run_cmd->add_option("thresholds", thresholds_path, "threshold CSV")->required();
  run_cmd->add_option("instance", instance_path, "arrival permutation file")->required();

  auto* exact_cmd = app.add_subcommand("exact", "exact competitive ratio of the protocol");
  exact_cmd->add_option("spec", spec_path, "problem spec file")->required();
  exact_cmd->add_option("--thresholds", thresholds_path, "threshold CSV (default: solve)");
  exact_cmd->add_option("--horizon", horizon, "fractional horizon m");
  exact_cmd->add_option("--dump-x", dump_x_path, "write the induced primal solution as CSV");

  auto* simulate_cmd = app.add_subcommand("simulate", "seeded Monte Carlo estimate of the ratio");
  simulate_cmd->add_option("spec", spec_path, "problem spec file")->required();
  simulate_cmd->add_option("--trials", trials, "number of trials")->required();
  simulate_cmd->add_option("--seed", seed, "64-bit seed")->required();
  simulate_cmd->add_option("--threads", threads, "worker count (does not change output)");
  simulate_cmd->add_option("--thresholds", thresholds_path, "threshold CSV (default: solve)");

  auto* verify_cmd = app.add_subcommand("verify", "optimality certificate for the protocol");
  verify_cmd->add_option("spec", spec_path, "problem spec file")->required();
  verify_cmd->add_option("--horizon", horizon, "fractional horizon m");

  auto* analyze_cmd = app.add_subcommand("analyze", "closed-form and tabulated analysis");
  analyze_cmd->add_option("--case", kase, "table1, kbound or 222")->required();
  analyze_cmd->add_option("--n", n, "candidate count for table1 (default 10000)");
  analyze_cmd->add_option("--kmax", k_max, "largest K (default 10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (thresholds_cmd->parsed()) return cmd_thresholds(spec_path, horizon, out_path, exclusive);
    if (run_cmd->parsed()) return cmd_run(spec_path, thresholds_path, instance_path);
    if (exact_cmd->parsed()) return cmd_exact(spec_path, thresholds_path, horizon, dump_x_path);
    if (simulate_cmd->parsed()) return cmd_simulate(spec_path, thresholds_path, trials, seed, threads);
    if (verify_cmd->parsed()) return cmd_verify(spec_path, horizon);
    if (analyze_cmd->parsed()) return cmd_analyze(kase, n, k_max);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
