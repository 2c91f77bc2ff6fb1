#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secretary/b_table.hpp"
#include "secretary/problem.hpp"
#include "secretary/util.hpp"

namespace secretary {

// Crucial positions i_{q,j,k}: the earliest within-queue position at which
// the protocol hires a locally k-th best candidate in round j. horizon+1
// means "never active". Fully determines the deterministic protocol.
struct ThresholdTable {
  int n = 0;
  int queues = 0;
  int quotas = 0;
  int ranks = 0;
  int horizon = 0;                 // within-queue positions interviewed (m)
  std::vector<std::int32_t> pos;   // (q,j,k) row-major, values in 1..horizon+1

  [[nodiscard]] int at(int q, int j, int k) const {
    return pos[(static_cast<std::size_t>(q - 1) * quotas + (j - 1)) * ranks + (k - 1)];
  }
  [[nodiscard]] std::int32_t& at(int q, int j, int k) {
    return pos[(static_cast<std::size_t>(q - 1) * quotas + (j - 1)) * ranks + (k - 1)];
  }
  [[nodiscard]] bool matches(const ValidatedSpec& s) const {
    return n == s.n() && queues == s.queues() && quotas == s.quotas() && ranks == s.ranks();
  }
};

// The (0,1)-solution y_{q,i}^{j|k} of the dual program produced by the
// preprocessing sweep, stored in flattened global order t = (i-1)Q + q.
// Layer j = J+1 is the dummy and stays identically zero.
struct DualSolution {
  int n = 0;
  int queues = 0;
  int quotas = 0;
  int ranks = 0;
  int horizon = 0;
  std::vector<double> y;  // ((t-1)*(J+1) + (j-1))*K + (k-1), j in 1..J+1
  double objective = 0.0;

  [[nodiscard]] std::size_t index(int t, int j, int k) const {
    return (static_cast<std::size_t>(t - 1) * (quotas + 1) + (j - 1)) * ranks + (k - 1);
  }
  [[nodiscard]] double at(int t, int j, int k) const { return y[index(t, j, k)]; }
  [[nodiscard]] double at(int q, int i, int j, int k) const {
    return at(flatten(q, i, queues), j, k);
  }
  [[nodiscard]] int flat_size() const { return queues * horizon; }
};

// min z = sum over (q,i,k) of y^{1|k}.
inline double dual_objective(const DualSolution& d) {
  KahanSum acc;
  for (int t = 1; t <= d.flat_size(); ++t)
    for (int k = 1; k <= d.ranks; ++k) acc.add(d.at(t, 1, k));
  return acc.value();
}

// Preprocessing sweep: computes the dual (0,1)-solution and the crucial
// positions. Positions are swept from the back; one suffix accumulator per
// round carries sum_{s>t} sum_l y_s^{j|l}, which collapses both inter-queue
// sums of the constraint after flattening. O(m Q J K) after the b table.
//
// A horizon m < n/Q truncates the sweep while b keeps the full n: that is
// the fractional variant, where only the first m arrivals per queue are
// interviewed.
inline std::pair<DualSolution, ThresholdTable> solve_dual(const ValidatedSpec& s,
                                                          std::optional<int> horizon = {}) {
  const int m = horizon.value_or(s.positions_per_queue());
  if (m < 1 || m > s.positions_per_queue())
    throw std::invalid_argument("horizon out of range");
  const int queues = s.queues(), quotas = s.quotas(), ranks = s.ranks();
  const int flat = queues * m;
  const double inv_nw = 1.0 / (static_cast<double>(s.n()) * s.offline_optimum());

  const BTable b(s, m);

  DualSolution d;
  d.n = s.n();
  d.queues = queues;
  d.quotas = quotas;
  d.ranks = ranks;
  d.horizon = m;
  d.y.assign(static_cast<std::size_t>(flat) * (quotas + 1) * ranks, 0.0);

  // suffix[j] = sum over strictly later flattened positions of sum_l y^{j|l};
  // suffix[J+1] stays 0 for the dummy layer.
  std::vector<KahanSum> suffix(static_cast<std::size_t>(quotas) + 2);
  for (int t = flat; t >= 1; --t) {
    const int i = (t - 1) / queues + 1;
    const double inv_i = 1.0 / i;
    for (int j = 1; j <= quotas; ++j) {
      const double carried = (suffix[j].value() - suffix[j + 1].value()) * inv_i;
      for (int k = 1; k <= ranks; ++k) {
        const double rhs = b(i, k) * inv_nw;
        const double v = rhs - carried;
        // The sign test "y <= 0" is ill-conditioned right at the crossover;
        // the relative guard keeps a roundoff-positive value from producing
        // a spurious single-position threshold.
        d.y[d.index(t, j, k)] = (v <= 1e-13 * (rhs > 1.0 ? rhs : 1.0)) ? 0.0 : v;
      }
    }
    for (int j = 1; j <= quotas; ++j)
      for (int k = 1; k <= ranks; ++k) suffix[j].add(d.at(t, j, k));
  }
  d.objective = dual_objective(d);

  ThresholdTable thr;
  thr.n = s.n();
  thr.queues = queues;
  thr.quotas = quotas;
  thr.ranks = ranks;
  thr.horizon = m;
  thr.pos.assign(static_cast<std::size_t>(queues) * quotas * ranks,
                 static_cast<std::int32_t>(m + 1));
  for (int q = 1; q <= queues; ++q)
    for (int j = 1; j <= quotas; ++j)
      for (int k = 1; k <= ranks; ++k)
        for (int i = 1; i <= m; ++i)
          if (d.at(q, i, j, k) > 0.0) {
            thr.at(q, j, k) = static_cast<std::int32_t>(i);
            break;
          }
  return {std::move(d), std::move(thr)};
}

// --- threshold table CSV --------------------------------------------------
// Header "q,j,k,threshold", one row per (q,j,k), 1-based positions.

inline void write_thresholds_csv(const ThresholdTable& thr, std::ostream& out) {
  out << "q,j,k,threshold\n";
  for (int q = 1; q <= thr.queues; ++q)
    for (int j = 1; j <= thr.quotas; ++j)
      for (int k = 1; k <= thr.ranks; ++k)
        out << q << ',' << j << ',' << k << ',' << thr.at(q, j, k) << '\n';
}

inline ThresholdTable read_thresholds_csv(std::istream& in, const ValidatedSpec& s,
                                          std::optional<int> horizon = {}) {
  const int m = horizon.value_or(s.positions_per_queue());
  if (m < 1 || m > s.positions_per_queue())
    throw std::invalid_argument("horizon out of range");
  ThresholdTable thr;
  thr.n = s.n();
  thr.queues = s.queues();
  thr.quotas = s.quotas();
  thr.ranks = s.ranks();
  thr.horizon = m;
  thr.pos.assign(static_cast<std::size_t>(thr.queues) * thr.quotas * thr.ranks, 0);
  std::vector<char> seen(thr.pos.size(), 0);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("threshold csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "q,j,k,threshold")
    throw std::runtime_error("threshold csv: expected header q,j,k,threshold");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int q = 0, j = 0, k = 0;
    long v = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream row(line);
    if (!(row >> q >> c1 >> j >> c2 >> k >> c3 >> v) || c1 != ',' || c2 != ',' || c3 != ',')
      throw std::runtime_error("threshold csv line " + std::to_string(line_no) + ": bad row");
    if (q < 1 || q > thr.queues || j < 1 || j > thr.quotas || k < 1 || k > thr.ranks)
      throw std::runtime_error("threshold csv line " + std::to_string(line_no) +
                               ": index out of range");
    if (v < 1 || v > m + 1)
      throw std::runtime_error("threshold csv line " + std::to_string(line_no) +
                               ": threshold out of range");
    const std::size_t idx =
        (static_cast<std::size_t>(q - 1) * thr.quotas + (j - 1)) * thr.ranks + (k - 1);
    if (seen[idx])
      throw std::runtime_error("threshold csv line " + std::to_string(line_no) +
                               ": duplicate entry");
    seen[idx] = 1;
    thr.pos[idx] = static_cast<std::int32_t>(v);
  }
  for (std::size_t idx = 0; idx < seen.size(); ++idx)
    if (!seen[idx]) throw std::runtime_error("threshold csv: missing entries");
  return thr;
}

}  // namespace secretary
