#pragma once

#include <ostream>
#include <stdexcept>
#include <vector>

#include "secretary/b_table.hpp"
#include "secretary/dual.hpp"
#include "secretary/problem.hpp"
#include "secretary/util.hpp"

namespace secretary {

// The (0,1)-solution x_{q,i}^{j|k} of the primal program induced by a
// threshold table. Layer j = 0 is the dummy (x_{1,1}^{0|1} = 1, others 0).
// The objective equals the protocol's competitive ratio alpha(Q,J,K).
struct PrimalSolution {
  int n = 0;
  int queues = 0;
  int quotas = 0;
  int ranks = 0;
  int horizon = 0;
  std::vector<double> x;  // ((t-1)*(J+1) + j)*K + (k-1), j in 0..J
  double objective = 0.0;

  [[nodiscard]] std::size_t index(int t, int j, int k) const {
    return (static_cast<std::size_t>(t - 1) * (quotas + 1) + j) * ranks + (k - 1);
  }
  [[nodiscard]] double at(int t, int j, int k) const { return x[index(t, j, k)]; }
  [[nodiscard]] double at(int q, int i, int j, int k) const {
    return at(flatten(q, i, queues), j, k);
  }
  [[nodiscard]] int flat_size() const { return queues * horizon; }
};

namespace detail {

// Objective in the b-collapsed form z = (1/nW) sum b_i^l x^{j|l}; identical
// to the quadruple sum of the primal program but O(n J K) and reusing the
// b table.
inline double primal_objective_value(const ValidatedSpec& s, const PrimalSolution& sol) {
  const BTable b(s, sol.horizon);
  const double inv_nw = 1.0 / (static_cast<double>(s.n()) * s.offline_optimum());
  KahanSum acc;
  for (int t = 1; t <= sol.flat_size(); ++t) {
    const int i = (t - 1) / sol.queues + 1;
    for (int j = 1; j <= sol.quotas; ++j)
      for (int k = 1; k <= sol.ranks; ++k) acc.add(b(i, k) * sol.at(t, j, k));
  }
  return acc.value() * inv_nw;
}

}  // namespace detail

inline double primal_objective(const ValidatedSpec& s, PrimalSolution& sol) {
  sol.objective = detail::primal_objective_value(s, sol);
  return sol.objective;
}

// Builds the (0,1)-solution the protocol induces (the constructive half of
// the optimality argument): sweeping global order, round_mass[j] carries
// Pr(exactly j-1 hires happened before this candidate); x is that mass at
// and after the crucial position, zero before it.
inline PrimalSolution primal_from_thresholds(const ValidatedSpec& s, const ThresholdTable& thr) {
  if (!thr.matches(s)) throw std::invalid_argument("thresholds do not match spec");
  const int queues = s.queues(), quotas = s.quotas(), ranks = s.ranks();
  const int m = thr.horizon;
  const int flat = queues * m;

  PrimalSolution sol;
  sol.n = s.n();
  sol.queues = queues;
  sol.quotas = quotas;
  sol.ranks = ranks;
  sol.horizon = m;
  sol.x.assign(static_cast<std::size_t>(flat) * (quotas + 1) * ranks, 0.0);
  sol.x[sol.index(1, 0, 1)] = 1.0;  // dummy layer

  // hired_mass[j] = sum over processed positions of (1/i_s) sum_l x^{j|l},
  // i.e. Pr(at least j hires happened strictly before the next position).
  std::vector<KahanSum> hired_mass(static_cast<std::size_t>(quotas) + 1);
  for (int t = 1; t <= flat; ++t) {
    const int i = (t - 1) / queues + 1;
    const int q = (t - 1) % queues + 1;
    for (int j = 1; j <= quotas; ++j) {
      const double mass =
          j == 1 ? 1.0 - hired_mass[1].value() : hired_mass[j - 1].value() - hired_mass[j].value();
      for (int k = 1; k <= ranks; ++k)
        if (i >= thr.at(q, j, k)) sol.x[sol.index(t, j, k)] = mass;
    }
    const double inv_i = 1.0 / i;
    for (int j = 1; j <= quotas; ++j) {
      KahanSum row;
      for (int k = 1; k <= ranks; ++k) row.add(sol.at(t, j, k));
      hired_mass[j].add(row.value() * inv_i);
    }
  }
  primal_objective(s, sol);
  return sol;
}

// Audit dump, "q,i,j,k,x" including the dummy layer j = 0.
inline void write_x_csv(const PrimalSolution& sol, std::ostream& out) {
  out << "q,i,j,k,x\n";
  for (int q = 1; q <= sol.queues; ++q)
    for (int i = 1; i <= sol.horizon; ++i)
      for (int j = 0; j <= sol.quotas; ++j)
        for (int k = 1; k <= sol.ranks; ++k)
          out << q << ',' << i << ',' << j << ',' << k << ','
              << format_real(sol.at(q, i, j, k)) << '\n';
}

}  // namespace secretary
