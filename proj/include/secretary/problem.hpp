#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace secretary {

// Instance of the shared Q-queue J-choice K-best secretary problem.
// n candidates arrive one by one in uniformly random order; arrival p joins
// queue ((p-1) mod Q)+1. The J hire quotas are shared by all queues and
// hiring the globally k-th best candidate pays w_k (nothing beyond rank K).
struct ProblemSpec {
  int n = 0;                    // total candidate count
  int queues = 0;               // Q
  int quotas = 0;               // J
  int ranks = 0;                // K
  std::vector<double> weights;  // w_1 >= ... >= w_K > 0; empty means all 1
};

// Offline optimum W = sum of the min(J,K) largest weights.
inline double offline_optimum(const ProblemSpec& s) {
  double w = 0.0;
  const int top = s.quotas < s.ranks ? s.quotas : s.ranks;
  for (int l = 0; l < top; ++l) w += s.weights.empty() ? 1.0 : s.weights[l];
  return w;
}

// A ProblemSpec whose invariants were checked, plus derived quantities.
// Only validate_spec can build one.
class ValidatedSpec {
 public:
  [[nodiscard]] const ProblemSpec& spec() const { return spec_; }
  [[nodiscard]] int n() const { return spec_.n; }
  [[nodiscard]] int queues() const { return spec_.queues; }
  [[nodiscard]] int quotas() const { return spec_.quotas; }
  [[nodiscard]] int ranks() const { return spec_.ranks; }
  [[nodiscard]] const std::vector<double>& weights() const { return spec_.weights; }
  [[nodiscard]] double weight(int rank) const { return spec_.weights[rank - 1]; }
  // Positions interviewed per queue, m = n/Q.
  [[nodiscard]] int positions_per_queue() const { return spec_.n / spec_.queues; }
  [[nodiscard]] double offline_optimum() const { return offline_opt_; }

 private:
  friend ValidatedSpec validate_spec(ProblemSpec s);
  explicit ValidatedSpec(ProblemSpec s)
      : spec_(std::move(s)), offline_opt_(secretary::offline_optimum(spec_)) {}

  ProblemSpec spec_;
  double offline_opt_;
};

// Checks every spec invariant and reports the first violated one.
// Empty weights are filled in as all ones.
inline ValidatedSpec validate_spec(ProblemSpec s) {
  if (s.n < 1) throw std::invalid_argument("n must be positive");
  if (s.queues < 1) throw std::invalid_argument("Q must be positive");
  if (s.quotas < 1) throw std::invalid_argument("J must be positive");
  if (s.ranks < 1) throw std::invalid_argument("K must be positive");
  if (s.queues > s.n) throw std::invalid_argument("Q exceeds n");
  if (s.quotas > s.n) throw std::invalid_argument("J exceeds n");
  if (s.ranks > s.n) throw std::invalid_argument("K exceeds n");
  if (s.n % s.queues != 0) throw std::invalid_argument("n not multiple of Q");
  if (s.weights.empty()) s.weights.assign(static_cast<std::size_t>(s.ranks), 1.0);
  if (static_cast<int>(s.weights.size()) != s.ranks)
    throw std::invalid_argument("weights must have K entries");
  for (int k = 0; k < s.ranks; ++k) {
    if (!(s.weights[k] > 0.0)) throw std::invalid_argument("weights must be positive");
    if (k > 0 && s.weights[k] > s.weights[k - 1])
      throw std::invalid_argument("weights increasing");
  }
  return ValidatedSpec(std::move(s));
}

// Bijection between global arrival order t and (queue q, within-queue
// position i): t = (i-1)*Q + q.
struct FlatIndex {
  int t;  // global arrival order, 1..n
  int q;  // queue number, 1..Q
  int i;  // within-queue position, 1..n/Q
};

inline int flatten(int q, int i, int queues) { return (i - 1) * queues + q; }

inline FlatIndex unflatten(int t, int queues) {
  return FlatIndex{t, (t - 1) % queues + 1, (t - 1) / queues + 1};
}

// --- problem spec file: line-oriented key=value text -----------------------
// Keys: n, Q, J, K, weights (comma-separated reals; omitted means all 1).

inline ProblemSpec parse_spec_text(const std::string& text) {
  ProblemSpec s;
  bool saw_n = false, saw_q = false, saw_j = false, saw_k = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("spec line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    try {
      if (key == "n") {
        s.n = std::stoi(val);
        saw_n = true;
      } else if (key == "Q") {
        s.queues = std::stoi(val);
        saw_q = true;
      } else if (key == "J") {
        s.quotas = std::stoi(val);
        saw_j = true;
      } else if (key == "K") {
        s.ranks = std::stoi(val);
        saw_k = true;
      } else if (key == "weights") {
        s.weights.clear();
        std::istringstream ws(val);
        std::string tok;
        while (std::getline(ws, tok, ',')) s.weights.push_back(std::stod(tok));
      } else {
        throw std::runtime_error("spec line " + std::to_string(line_no) + ": unknown key '" +
                                 key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("spec line " + std::to_string(line_no) + ": bad value '" + val +
                               "'");
    } catch (const std::out_of_range&) {
      throw std::runtime_error("spec line " + std::to_string(line_no) + ": value out of range");
    }
  }
  if (!saw_n || !saw_q || !saw_j || !saw_k)
    throw std::runtime_error("spec file must define n, Q, J and K");
  return s;
}

inline ProblemSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

}  // namespace secretary
