#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "secretary/problem.hpp"

namespace secretary {

namespace detail {

// b_i^k = sum_{l=k}^K w_l * C(i-1,k-1) C(n-i,l-k) / C(n-1,l-1).
// It is n/i times the expected weight eventually collected by hiring the
// candidate who is k-th best among the first i interviewed in a queue.
// Binomial ratios go through log-gamma so the table stays finite for n up
// to ~1e6 where the raw binomials overflow.
template <class LogFactorial>
double b_eval(int n, int ranks, const std::vector<double>& w, int i, int k, LogFactorial&& lf) {
  if (k > i) return 0.0;  // local rank k cannot occur before position k
  const double lc_seen = lf(i - 1) - lf(k - 1) - lf(i - k);
  double sum = 0.0;
  for (int l = k; l <= ranks; ++l) {
    if (l - k > n - i) break;  // C(n-i, l-k) = 0 from here on
    const double lc_rest = lf(n - i) - lf(l - k) - lf(n - i - l + k);
    const double lc_all = lf(n - 1) - lf(l - 1) - lf(n - l);
    sum += w[static_cast<std::size_t>(l) - 1] * std::exp(lc_seen + lc_rest - lc_all);
  }
  return sum;
}

inline double lgamma_fact(int x) { return std::lgamma(static_cast<double>(x) + 1.0); }

}  // namespace detail

// Single-entry evaluation of b_i^k.
inline double b_value(const ValidatedSpec& s, int position, int rank) {
  if (position < 1 || position > s.n()) throw std::out_of_range("b_value: position out of range");
  if (rank < 1 || rank > s.ranks()) throw std::out_of_range("b_value: rank out of range");
  return detail::b_eval(s.n(), s.ranks(), s.weights(), position, rank, detail::lgamma_fact);
}

// Bulk table of b_i^k for i = 1..max_position, k = 1..K. Built in O(n K^2)
// with a shared log-factorial cache; entries match b_value bitwise.
class BTable {
 public:
  BTable(const ValidatedSpec& s, int max_position)
      : max_pos_(max_position), ranks_(s.ranks()), v_(static_cast<std::size_t>(max_position) * s.ranks()) {
    if (max_position < 1 || max_position > s.n())
      throw std::out_of_range("BTable: max_position out of range");
    std::vector<double> lf(static_cast<std::size_t>(s.n()) + 1);
    for (int x = 0; x <= s.n(); ++x) lf[static_cast<std::size_t>(x)] = detail::lgamma_fact(x);
    const auto look = [&lf](int x) { return lf[static_cast<std::size_t>(x)]; };
    for (int i = 1; i <= max_position; ++i)
      for (int k = 1; k <= ranks_; ++k)
        v_[static_cast<std::size_t>(i - 1) * ranks_ + (k - 1)] =
            detail::b_eval(s.n(), ranks_, s.weights(), i, k, look);
  }

  [[nodiscard]] double operator()(int i, int k) const {
    return v_[static_cast<std::size_t>(i - 1) * ranks_ + (k - 1)];
  }
  [[nodiscard]] int max_position() const { return max_pos_; }
  [[nodiscard]] int ranks() const { return ranks_; }

 private:
  int max_pos_;
  int ranks_;
  std::vector<double> v_;
};

}  // namespace secretary
