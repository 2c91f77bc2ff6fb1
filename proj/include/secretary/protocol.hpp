#pragma once

#include <algorithm>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "secretary/dual.hpp"
#include "secretary/problem.hpp"

namespace secretary {

struct HireRecord {
  int queue = 0;
  int position = 0;    // within-queue position at hire time
  int local_rank = 0;  // rank among the queue's candidates seen so far
  int global_rank = 0; // final global rank (0 when the session only saw ranks)
};

// Online state of the Adaptive Observation-Selection protocol. One step
// interviews position i in every queue simultaneously; queues with smaller
// number decide first and a hire raises the shared round count immediately,
// so later queues in the same step already see it.
class SessionState {
 public:
  SessionState(const ValidatedSpec& s, const ThresholdTable& thr)
      : thresholds_(&thr), queues_(s.queues()), quotas_(s.quotas()), ranks_(s.ranks()),
        steps_(thr.horizon) {
    if (!thr.matches(s)) throw std::invalid_argument("thresholds do not match spec");
    hires_.reserve(static_cast<std::size_t>(quotas_));
  }

  // Decide hires for the next position; returns how many were made. ranks
  // [q-1] must be the arriving candidate's rank among the i candidates seen
  // so far in queue q (1 = best); ranks worse than K may be clamped to K+1.
  // A candidate is hired in round j+1 exactly when it is locally r-th best
  // with r <= K and the position has reached the crucial position i_{q,j+1,r}.
  int advance_step(std::span<const int> ranks, std::span<unsigned char> decisions) {
    if (step_ >= steps_) throw std::invalid_argument("session already consumed all steps");
    if (static_cast<int>(ranks.size()) != queues_ ||
        static_cast<int>(decisions.size()) != queues_)
      throw std::invalid_argument("advance_step: need one rank and one decision per queue");
    // Locals keep the loop in registers; the byte-wide decision stores would
    // otherwise force member reloads every iteration.
    const int i = step_ + 1;
    const int quotas = quotas_, rank_cap = ranks_;
    const std::int32_t* thresholds = thresholds_->pos.data();
    int hired = hired_;
    for (int q = 1; q <= queues_; ++q) {
      const int r = ranks[static_cast<std::size_t>(q) - 1];
      if (r < 1 || r > i) throw std::invalid_argument("rank out of range");
      bool hire = false;
      if (hired < quotas && r <= rank_cap &&
          i >= thresholds[(static_cast<std::size_t>(q - 1) * quotas + hired) * rank_cap + (r - 1)]) {
        hire = true;
        ++hired;
        hires_.push_back(HireRecord{q, i, r, 0});
      }
      decisions[static_cast<std::size_t>(q) - 1] = hire ? 1 : 0;
    }
    const int made = hired - hired_;
    hired_ = hired;
    ++step_;
    return made;
  }

  std::vector<bool> advance_step(std::span<const int> ranks) {
    std::vector<unsigned char> buf(static_cast<std::size_t>(queues_), 0);
    advance_step(ranks, buf);
    return {buf.begin(), buf.end()};
  }

  [[nodiscard]] int hired() const { return hired_; }
  [[nodiscard]] int step() const { return step_; }
  [[nodiscard]] bool finished() const { return step_ >= steps_ || hired_ >= quotas_; }
  [[nodiscard]] const std::vector<HireRecord>& hires() const { return hires_; }

  void reset() {
    hired_ = 0;
    step_ = 0;
    hires_.clear();
  }

 private:
  const ThresholdTable* thresholds_;
  int queues_, quotas_, ranks_, steps_;
  int hired_ = 0;
  int step_ = 0;
  std::vector<HireRecord> hires_;
};

inline SessionState start_session(const ValidatedSpec& s, const ThresholdTable& thr) {
  return SessionState(s, thr);
}

struct RunResult {
  std::vector<HireRecord> hires;
  double payoff = 0.0;
};

// Reusable buffers for repeated runs over the same spec (Monte Carlo, brute
// force). Behaviour is identical to the plain overload except that the
// arrival sequence is trusted to be a permutation.
struct RunWorkspace {
  std::vector<int> best;  // per queue, up to K best values seen, ascending
  std::vector<int> len;   // filled prefix of each queue's buffer
  std::vector<int> ranks;
  std::vector<unsigned char> decisions;
};

// Plays one arrival order through the protocol. arrival[p-1] is the global
// rank of the candidate arriving at global position p (1 = best overall);
// position p joins queue ((p-1) mod Q)+1. Local ranks come from truncated
// order-statistic insertion: only the K best values per queue matter, any
// worse candidate can never be hired.
#if defined(__GNUC__)
__attribute__((flatten))
#endif
inline void
run_instance(const ValidatedSpec& s, const ThresholdTable& thr,
             std::span<const int> arrival, RunWorkspace& ws, RunResult& out) {
  const int queues = s.queues(), ranks_count = s.ranks();
  if (thr.horizon != s.positions_per_queue())
    throw std::invalid_argument("thresholds were built for a truncated horizon");
  SessionState session(s, thr);
  ws.best.assign(static_cast<std::size_t>(queues) * ranks_count, 0);
  ws.len.assign(static_cast<std::size_t>(queues), 0);
  ws.ranks.assign(static_cast<std::size_t>(queues), 0);
  ws.decisions.assign(static_cast<std::size_t>(queues), 0);
  out.hires.clear();
  out.payoff = 0.0;

  const int steps = s.positions_per_queue();
  const int quotas = s.quotas();
  // Locals: stores through these cannot invalidate each other's base
  // pointers, which keeps the per-candidate loop in registers.
  const int* const values = arrival.data();
  int* const best_base = ws.best.data();
  int* const len_base = ws.len.data();
  int* const rank_base = ws.ranks.data();
  const std::span<const int> ranks_view(ws.ranks);
  const std::span<unsigned char> decisions_view(ws.decisions);

  int p = 0;
  for (int i = 1; i <= steps; ++i) {
    for (int q = 0; q < queues; ++q, ++p) {
      const int v = values[p];
      int* const buf = best_base + static_cast<std::size_t>(q) * ranks_count;
      const int len = len_base[q];
      int pos = 0;
      while (pos < len && buf[pos] < v) ++pos;
      int r = pos + 1;
      if (pos < ranks_count) {
        const int last = len < ranks_count ? len : ranks_count - 1;
        for (int b = last; b > pos; --b) buf[b] = buf[b - 1];
        buf[pos] = v;
        if (len < ranks_count) len_base[q] = len + 1;
      } else {
        r = ranks_count + 1;  // worse than every tracked value; never hired
      }
      rank_base[q] = r;
    }
    if (session.advance_step(ranks_view, decisions_view) > 0) {
      for (int q = 0; q < queues; ++q) {
        if (!decisions_view[static_cast<std::size_t>(q)]) continue;
        const int v = values[(i - 1) * queues + q];
        HireRecord rec = session.hires()[out.hires.size()];
        rec.global_rank = v;
        out.hires.push_back(rec);
        if (v <= ranks_count) out.payoff += s.weight(v);
      }
      if (session.hired() == quotas) break;
    }
  }
}

inline RunResult run_instance(const ValidatedSpec& s, const ThresholdTable& thr,
                              std::span<const int> arrival) {
  if (static_cast<int>(arrival.size()) != s.n())
    throw std::invalid_argument("arrival must list all n candidates");
  std::vector<char> seen(static_cast<std::size_t>(s.n()) + 1, 0);
  for (std::size_t p = 0; p < arrival.size(); ++p) {
    const int v = arrival[p];
    if (v < 1 || v > s.n() || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("arrival is not a permutation (position " +
                                  std::to_string(p + 1) + ")");
    seen[static_cast<std::size_t>(v)] = 1;
  }
  RunWorkspace ws;
  RunResult out;
  run_instance(s, thr, arrival, ws, out);
  return out;
}

// --- instance file: whitespace-separated permutation of 1..n ---------------

inline std::vector<int> parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<int> arrival;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      arrival.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error("instance token " + std::to_string(arrival.size() + 1) +
                               ": bad value '" + tok + "'");
    }
  }
  return arrival;
}

inline std::vector<int> load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str());
}

}  // namespace secretary
