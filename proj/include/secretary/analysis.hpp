#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "secretary/dual.hpp"
#include "secretary/primal.hpp"
#include "secretary/problem.hpp"

namespace secretary {

namespace detail {

// Plain bisection after a sign-change scan; every function handed in here is
// one-dimensional and smooth on its interval, so robustness wins over speed.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double scan_step = 1e-3, double tol = 1e-10) {
  double a = lo, fa = f(a);
  double b = 0.0, fb = 0.0;
  bool bracketed = false;
  for (double x = lo + scan_step; x <= hi + 0.5 * scan_step; x += scan_step) {
    b = x < hi ? x : hi;
    fb = f(b);
    if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) {
      bracketed = true;
      break;
    }
    a = b;
    fa = fb;
  }
  if (!bracketed) throw std::runtime_error("root not bracketed");
  if (fa == 0.0) return a;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Limit value of the three-phase strategy at the analysed phase boundaries
// x = K^(-2/K), gamma1 = 1-x, gamma2 = 1-x^2; a closed-form lower bound on
// the exact ratio alpha(1,1,K). Approaches 1 like 1 - O(ln^2 K / K^2).
inline double k_best_lower_bound(int k_best) {
  if (k_best < 2)
    throw std::invalid_argument("k_best_lower_bound requires K >= 2 (x = 1 degenerates at K = 1)");
  const double K = k_best;
  const double x = std::pow(K, -2.0 / K);
  const double g1 = 1.0 - x;
  const double g2 = 1.0 - x * x;
  const double r = g1 / g2;
  return (1.0 - r) * (1.0 - std::pow(1.0 - g1, K)) -
         (r - g1 * g2 + K * g1) * std::pow(1.0 - g2, K) + r - g1 * g2;
}

// One run of the three-phase strategy for the 1-queue 1-choice K-best
// problem: observe before floor(gamma1*n); then hire the first best-so-far;
// from floor(gamma2*n) on, hire the first best-or-second-best-so-far.
// Pays 1 when the hired candidate ends up in the global top K.
inline double three_phase_run(int n, int k_best, double gamma1, double gamma2,
                              std::span<const int> arrival) {
  if (!(0.0 <= gamma1 && gamma1 <= gamma2 && gamma2 <= 1.0))
    throw std::invalid_argument("need 0 <= gamma1 <= gamma2 <= 1");
  if (k_best < 1 || k_best > n) throw std::invalid_argument("K out of range");
  if (static_cast<int>(arrival.size()) != n)
    throw std::invalid_argument("arrival must list all n candidates");
  const auto phase1_start = static_cast<int>(std::floor(gamma1 * n));
  const auto phase2_start = static_cast<int>(std::floor(gamma2 * n));
  int best = n + 1, second = n + 1;
  for (int p = 1; p <= n; ++p) {
    const int v = arrival[static_cast<std::size_t>(p) - 1];
    const bool top1 = v < best;
    const bool top2 = v < second;
    if (p >= phase2_start ? top2 : (p >= phase1_start && top1))
      return v <= k_best ? 1.0 : 0.0;
    if (top1) {
      second = best;
      best = v;
    } else if (top2) {
      second = v;
    }
  }
  return 0.0;
}

// Limiting constants of the equal-weight shared (2,2,2) problem. The gamma
// values are the limits of crucial positions over n; ratio_222 is the
// protocol's competitive ratio, about 0.372.
struct TwoQueueConstants {
  double gamma_11 = 0.0;
  double gamma_12 = 0.0;
  double gamma_21 = 0.0;
  double gamma_22 = 0.0;
  double ratio_222 = 0.0;
  // Remaining dual mass R at the phase boundaries, from the closed forms.
  double r1_at_gamma22 = 0.0;
  double r1_at_gamma12 = 0.0;
  double r1_at_gamma21 = 0.0;
  double r2_at_gamma21 = 0.0;
  double r2_at_gamma12 = 0.0;
};

namespace detail_222 {

// Closed forms of the limiting dual suffix mass R(gamma, round) for the
// equal-weight (2,2,2) instance, one function per validity interval; gamma
// is the within-sequence position divided by n.

// Round 2, gamma in [gamma22, 1/2].
inline double r2_tail(double g) { return 2.0 * g / 3.0 - 16.0 * std::pow(g, 4) / 3.0; }

// Round 2, gamma in [gamma21, gamma22).
inline double r2_mid(double g, double g22) {
  return 0.5 * g * g + 2.0 * g - 2.0 * g * g / g22 - g * g * std::log(g22 / g);
}

// Round 1, gamma in [gamma22, 1/2].
inline double r1_tail(double g) {
  const double g4 = std::pow(g, 4);
  return 14.0 * g / 9.0 - 112.0 * g4 / 9.0 - 64.0 * g4 / 3.0 * std::log(1.0 / (2.0 * g));
}

// Round 1, gamma in [gamma12, gamma22).
inline double r1_high(double g, double g22, double r1_g22) {
  const double g2 = g * g;
  return 10.0 * g / 3.0 + (1.0 - std::log(g22 / g) - 2.0 / g22) * 2.0 * g2 +
         (2.0 / (3.0 * std::pow(g22, 3)) - 2.0 / (g22 * g22) + r1_g22 / std::pow(g22, 4)) * g2 *
             g2;
}

// Round 1, gamma in [gamma21, gamma12).
inline double r1_mid(double g, double g12, double g22, double r1_g12) {
  const double lg = std::log(g12 / g);
  return 6.0 * g - (6.0 / g12 + 4.0 / g22 * lg + lg * std::log(g22 * g22 / (g12 * g)) -
                    r1_g12 / (g12 * g12)) *
                       g * g;
}

// Round 1, gamma in [gamma11, gamma21).
inline double r1_low(double g, double g21, double r2_g21, double r1_g21) {
  const double g2 = g * g;
  const double ratio = g2 / (g21 * g21);
  return 2.0 * g - 2.0 * g2 / g21 - g2 * std::log(g21 / g) + r2_g21 * (1.0 - ratio) +
         r1_g21 * ratio;
}

}  // namespace detail_222

// Solves the four boundary equations by bisection (tolerance 1e-10), in
// dependency order gamma22, gamma21, gamma12, gamma11; the ratio is the
// round-1 mass at gamma11.
inline TwoQueueConstants solve_222_constants() {
  using namespace detail_222;
  TwoQueueConstants c;

  // (1/2) g^2 - (2/3) g + (16/3) g^4 = 0 on (0,1).
  c.gamma_22 = detail::bisect(
      [](double g) { return 0.5 * g * g - 2.0 * g / 3.0 + 16.0 * std::pow(g, 4) / 3.0; }, 1e-3,
      1.0 - 1e-3);
  const double g22 = c.gamma_22;

  // Round-2 mass meets the threshold condition at gamma21.
  c.gamma_21 = detail::bisect(
      [g22](double g) { return r2_mid(g, g22) - g * (1.0 - 0.5 * g); }, 1e-3, g22 - 1e-6);
  const double g21 = c.gamma_21;

  c.r1_at_gamma22 = r1_tail(g22);
  const double r1_g22 = c.r1_at_gamma22;

  // Round-1 mass (high piece) meets g^2/2 + R_2(g) at gamma12.
  c.gamma_12 = detail::bisect(
      [g22, r1_g22](double g) {
        return r1_high(g, g22, r1_g22) - 0.5 * g * g - r2_mid(g, g22);
      },
      g21 + 1e-6, g22 - 1e-6);
  const double g12 = c.gamma_12;

  c.r1_at_gamma12 = r1_high(g12, g22, r1_g22);
  c.r2_at_gamma21 = r2_mid(g21, g22);
  c.r2_at_gamma12 = r2_mid(g12, g22);
  c.r1_at_gamma21 = r1_mid(g21, g12, g22, c.r1_at_gamma12);

  const double r2_g21 = c.r2_at_gamma21;
  const double r1_g21 = c.r1_at_gamma21;
  c.gamma_11 = detail::bisect(
      [g21, r2_g21, r1_g21](double g) {
        return r1_low(g, g21, r2_g21, r1_g21) - g * (1.0 - 0.5 * g) - r2_g21;
      },
      1e-3, g21 - 1e-6);

  c.ratio_222 = r1_low(c.gamma_11, g21, r2_g21, r1_g21);
  return c;
}

// Exact ratios alpha(1,1,K) for K = 1..k_max at the given n, equal weights.
inline std::vector<std::pair<int, double>> table1_reproduce(int n, int k_max) {
  if (k_max < 1 || k_max > 30) throw std::invalid_argument("k_max must be in 1..30");
  std::vector<std::pair<int, double>> rows;
  rows.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const ValidatedSpec s = validate_spec(ProblemSpec{n, 1, 1, k, {}});
    const auto [dual, thresholds] = solve_dual(s);
    const PrimalSolution primal = primal_from_thresholds(s, thresholds);
    rows.emplace_back(k, primal.objective);
  }
  return rows;
}

}  // namespace secretary
