#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "secretary/primal.hpp"
#include "secretary/protocol.hpp"

namespace secretary {

struct FeasibilityResult {
  bool feasible = false;
  double max_violation = 0.0;
};

// Evaluates every crucial constraint of the primal program plus
// nonnegativity against the solution itself (not against the construction
// that produced it). max_violation is the largest negative residual.
inline FeasibilityResult check_primal_feasible(const ValidatedSpec& s, const PrimalSolution& sol) {
  double worst = 0.0;
  std::vector<KahanSum> hired_mass(static_cast<std::size_t>(sol.quotas) + 1);
  for (int t = 1; t <= sol.flat_size(); ++t) {
    const int i = (t - 1) / sol.queues + 1;
    for (int j = 1; j <= sol.quotas; ++j) {
      const double mass =
          j == 1 ? 1.0 - hired_mass[1].value() : hired_mass[j - 1].value() - hired_mass[j].value();
      for (int k = 1; k <= sol.ranks; ++k) {
        const double x = sol.at(t, j, k);
        worst = std::min(worst, mass - x);  // crucial constraint x <= mass
        worst = std::min(worst, x);         // nonnegativity
      }
    }
    const double inv_i = 1.0 / i;
    for (int j = 1; j <= sol.quotas; ++j) {
      KahanSum row;
      for (int k = 1; k <= sol.ranks; ++k) row.add(sol.at(t, j, k));
      hired_mass[j].add(row.value() * inv_i);
    }
  }
  (void)s;
  return {worst >= -1e-9, worst < 0.0 ? -worst : 0.0};
}

// Dual feasibility with violations measured relative to each constraint's
// right-hand side b_i^k/(nW).
inline FeasibilityResult check_dual_feasible(const ValidatedSpec& s, const DualSolution& sol) {
  const BTable b(s, sol.horizon);
  const double inv_nw = 1.0 / (static_cast<double>(s.n()) * s.offline_optimum());
  double worst = 0.0;
  std::vector<KahanSum> suffix(static_cast<std::size_t>(sol.quotas) + 2);
  for (int t = sol.flat_size(); t >= 1; --t) {
    const int i = (t - 1) / sol.queues + 1;
    const double inv_i = 1.0 / i;
    for (int j = 1; j <= sol.quotas; ++j) {
      const double carried = (suffix[j].value() - suffix[j + 1].value()) * inv_i;
      for (int k = 1; k <= sol.ranks; ++k) {
        const double rhs = b(i, k) * inv_nw;
        const double y = sol.at(t, j, k);
        const double scale = rhs > 0.0 ? rhs : 1.0;
        worst = std::min(worst, (y + carried - rhs) / scale);
        worst = std::min(worst, y);  // nonnegativity
      }
    }
    for (int j = 1; j <= sol.quotas; ++j)
      for (int k = 1; k <= sol.ranks; ++k) suffix[j].add(sol.at(t, j, k));
  }
  return {worst >= -1e-9, worst < 0.0 ? -worst : 0.0};
}

// Executable form of the optimality certificate: primal and dual
// feasibility, complementary slackness and a vanishing duality gap together
// prove the threshold protocol optimal over all protocols, since any
// protocol induces a feasible primal point.
struct CertificateReport {
  FeasibilityResult primal;
  FeasibilityResult dual;
  long slackness_violations = 0;
  double max_product_x_dual_slack = 0.0;  // max |x * dual slack|, normalized
  double max_product_y_primal_slack = 0.0;
  double primal_objective_value = 0.0;
  double dual_objective_value = 0.0;
  double duality_gap_abs = 0.0;
  double duality_gap_rel = 0.0;
  bool certified = false;
};

inline CertificateReport certify_optimal(const ValidatedSpec& s, const PrimalSolution& primal,
                                         const DualSolution& dual) {
  if (primal.n != dual.n || primal.queues != dual.queues || primal.quotas != dual.quotas ||
      primal.ranks != dual.ranks || primal.horizon != dual.horizon)
    throw std::invalid_argument("primal/dual dimensions differ");
  if (primal.n != s.n() || primal.queues != s.queues() || primal.quotas != s.quotas() ||
      primal.ranks != s.ranks())
    throw std::invalid_argument("solutions do not match spec");

  CertificateReport rep;
  rep.primal = check_primal_feasible(s, primal);
  rep.dual = check_dual_feasible(s, dual);

  const int flat = primal.flat_size();
  const int quotas = primal.quotas, ranks = primal.ranks, queues = primal.queues;
  const BTable b(s, primal.horizon);
  const double inv_nw = 1.0 / (static_cast<double>(s.n()) * s.offline_optimum());

  // Normalize both variable families by their maxima; both scale with 1/nW.
  double x_max = 0.0, y_max = 0.0;
  for (int t = 1; t <= flat; ++t)
    for (int j = 1; j <= quotas; ++j)
      for (int k = 1; k <= ranks; ++k) {
        x_max = std::max(x_max, std::abs(primal.at(t, j, k)));
        y_max = std::max(y_max, std::abs(dual.at(t, j, k)));
      }
  if (x_max == 0.0) x_max = 1.0;
  if (y_max == 0.0) y_max = 1.0;

  // Primal slack per index, then dual slack on a backward sweep.
  std::vector<double> primal_slack(static_cast<std::size_t>(flat) * quotas * ranks, 0.0);
  {
    std::vector<KahanSum> hired_mass(static_cast<std::size_t>(quotas) + 1);
    for (int t = 1; t <= flat; ++t) {
      const int i = (t - 1) / queues + 1;
      for (int j = 1; j <= quotas; ++j) {
        const double mass = j == 1 ? 1.0 - hired_mass[1].value()
                                   : hired_mass[j - 1].value() - hired_mass[j].value();
        for (int k = 1; k <= ranks; ++k)
          primal_slack[(static_cast<std::size_t>(t - 1) * quotas + (j - 1)) * ranks + (k - 1)] =
              mass - primal.at(t, j, k);
      }
      const double inv_i = 1.0 / i;
      for (int j = 1; j <= quotas; ++j) {
        KahanSum row;
        for (int k = 1; k <= ranks; ++k) row.add(primal.at(t, j, k));
        hired_mass[j].add(row.value() * inv_i);
      }
    }
  }
  {
    std::vector<KahanSum> suffix(static_cast<std::size_t>(quotas) + 2);
    for (int t = flat; t >= 1; --t) {
      const int i = (t - 1) / queues + 1;
      const double inv_i = 1.0 / i;
      for (int j = 1; j <= quotas; ++j) {
        const double carried = (suffix[j].value() - suffix[j + 1].value()) * inv_i;
        for (int k = 1; k <= ranks; ++k) {
          const double rhs = b(i, k) * inv_nw;
          const double dual_slack = dual.at(t, j, k) + carried - rhs;
          const double dual_slack_rel = dual_slack / (rhs > 0.0 ? rhs : 1.0);
          const double xs =
              primal_slack[(static_cast<std::size_t>(t - 1) * quotas + (j - 1)) * ranks + (k - 1)];
          const double px = std::abs(primal.at(t, j, k) / x_max * dual_slack_rel);
          const double py = std::abs(dual.at(t, j, k) / y_max * xs);
          rep.max_product_x_dual_slack = std::max(rep.max_product_x_dual_slack, px);
          rep.max_product_y_primal_slack = std::max(rep.max_product_y_primal_slack, py);
          if (px > 1e-9) ++rep.slackness_violations;
          if (py > 1e-9) ++rep.slackness_violations;
        }
      }
      for (int j = 1; j <= quotas; ++j)
        for (int k = 1; k <= ranks; ++k) suffix[j].add(dual.at(t, j, k));
    }
  }

  rep.primal_objective_value = detail::primal_objective_value(s, primal);
  rep.dual_objective_value = dual_objective(dual);
  rep.duality_gap_abs = std::abs(rep.primal_objective_value - rep.dual_objective_value);
  const double denom = std::max(std::abs(rep.primal_objective_value),
                                std::abs(rep.dual_objective_value));
  rep.duality_gap_rel = denom > 0.0 ? rep.duality_gap_abs / denom : 0.0;

  rep.certified = rep.primal.feasible && rep.dual.feasible && rep.slackness_violations == 0 &&
                  rep.duality_gap_rel <= 1e-9;
  return rep;
}

inline void write_certificate_report(const CertificateReport& rep, std::ostream& out) {
  const auto line = [&out](const char* name, bool pass, double violation) {
    out << "check=" << name << " status=" << (pass ? "pass" : "fail")
        << " max_violation=" << format_real(violation) << '\n';
  };
  line("primal_feasible", rep.primal.feasible, rep.primal.max_violation);
  line("dual_feasible", rep.dual.feasible, rep.dual.max_violation);
  line("slackness", rep.slackness_violations == 0,
       std::max(rep.max_product_x_dual_slack, rep.max_product_y_primal_slack));
  line("duality_gap", rep.duality_gap_rel <= 1e-9, rep.duality_gap_rel);
  out << "verdict=" << (rep.certified ? "certified" : "failed") << '\n';
}

// Exhaustive ground truth: mean protocol payoff over all n! arrival orders,
// divided by the offline optimum. Lexicographic enumeration, compensated
// accumulation; n is capped where n! stays enumerable.
inline double brute_force_expected_ratio(const ValidatedSpec& s, const ThresholdTable& thr) {
  if (s.n() > 9) throw std::invalid_argument("brute force requires n <= 9");
  std::vector<int> arrival(static_cast<std::size_t>(s.n()));
  std::iota(arrival.begin(), arrival.end(), 1);
  RunWorkspace ws;
  RunResult run;
  KahanSum total;
  std::int64_t count = 0;
  do {
    run_instance(s, thr, arrival, ws, run);
    total.add(run.payoff);
    ++count;
  } while (std::next_permutation(arrival.begin(), arrival.end()));
  return total.value() / static_cast<double>(count) / s.offline_optimum();
}

}  // namespace secretary
