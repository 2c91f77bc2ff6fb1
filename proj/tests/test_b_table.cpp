#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <gmpxx.h>
#include <vector>

#include "secretary/b_table.hpp"

using namespace secretary;

namespace {

// Exact-rational evaluation of the defining sum; the oracle the floating
// point path is checked against. Lives only in test code.
mpq_class exact_b(int n, int ranks, const std::vector<mpq_class>& w, int i, int k) {
  mpq_class sum = 0;
  for (int l = k; l <= ranks; ++l) {
    if (l - k > n - i || k - 1 > i - 1) continue;
    mpz_class seen, rest, all;
    mpz_bin_uiui(seen.get_mpz_t(), static_cast<unsigned long>(i - 1),
                 static_cast<unsigned long>(k - 1));
    mpz_bin_uiui(rest.get_mpz_t(), static_cast<unsigned long>(n - i),
                 static_cast<unsigned long>(l - k));
    mpz_bin_uiui(all.get_mpz_t(), static_cast<unsigned long>(n - 1),
                 static_cast<unsigned long>(l - 1));
    sum += w[static_cast<std::size_t>(l) - 1] * mpq_class(seen * rest) / mpq_class(all);
  }
  return sum;
}

std::vector<mpq_class> to_rational(const std::vector<double>& w) {
  std::vector<mpq_class> out;
  out.reserve(w.size());
  for (double x : w) out.emplace_back(x);  // exact: test weights are dyadic
  return out;
}

std::vector<double> geometric_weights(int ranks) {
  std::vector<double> w(static_cast<std::size_t>(ranks));
  double v = 1.0;
  for (int k = 0; k < ranks; ++k, v *= 0.5) w[static_cast<std::size_t>(k)] = v;
  return w;
}

}  // namespace

TEST_CASE("b at the boundary positions") {
  const auto s = validate_spec(ProblemSpec{12, 1, 2, 3, {1.0, 0.5, 0.25}});
  // i = n: only the l = k term survives, so b_n^k = w_k.
  CHECK(b_value(s, 12, 1) == Catch::Approx(1.0).margin(1e-12));
  CHECK(b_value(s, 12, 2) == Catch::Approx(0.5).margin(1e-12));
  CHECK(b_value(s, 12, 3) == Catch::Approx(0.25).margin(1e-12));
  // i = 1, k = 1: every binomial ratio collapses to 1.
  CHECK(b_value(s, 1, 1) == Catch::Approx(1.75).margin(1e-12));
}

TEST_CASE("b frozen example n=6 K=2") {
  // 1 + C(2,0) C(3,1) / C(5,1) = 1 + 3/5.
  const auto s = validate_spec(ProblemSpec{6, 1, 1, 2, {1.0, 1.0}});
  CHECK(b_value(s, 3, 1) == Catch::Approx(1.6).margin(1e-12));
  const mpq_class exact = exact_b(6, 2, {1, 1}, 3, 1);
  CHECK(exact == mpq_class(8, 5));
}

TEST_CASE("b agrees with the exact-rational oracle") {
  for (int n : {6, 37, 200}) {
    for (int ranks : {1, 2, 5}) {
      if (ranks > n) continue;
      for (int family = 0; family < 2; ++family) {
        const std::vector<double> w =
            family == 0 ? std::vector<double>(static_cast<std::size_t>(ranks), 1.0)
                        : geometric_weights(ranks);
        const auto s = validate_spec(ProblemSpec{n, 1, 1, ranks, w});
        const auto wq = to_rational(w);
        const BTable table(s, n);
        for (int i = 1; i <= n; ++i)
          for (int k = 1; k <= ranks; ++k) {
            const double approx = table(i, k);
            const double exact = mpq_class(exact_b(n, ranks, wq, i, k)).get_d();
            if (exact == 0.0) {
              REQUIRE(std::abs(approx) < 1e-15);
            } else {
              REQUIRE(std::abs(approx - exact) <= 1e-10 * std::abs(exact));
            }
          }
      }
    }
  }
}

TEST_CASE("bulk table matches single-entry evaluation bitwise") {
  const auto s = validate_spec(ProblemSpec{50, 1, 2, 4, geometric_weights(4)});
  const BTable table(s, 50);
  for (int i = 1; i <= 50; ++i)
    for (int k = 1; k <= 4; ++k) REQUIRE(table(i, k) == b_value(s, i, k));
}

TEST_CASE("monotonicity of b (position and rank)") {
  for (int n : {7, 40, 200}) {
    for (int ranks : {1, 3, 5}) {
      if (ranks > n) continue;
      for (int family = 0; family < 2; ++family) {
        const std::vector<double> w =
            family == 0 ? std::vector<double>(static_cast<std::size_t>(ranks), 1.0)
                        : geometric_weights(ranks);
        const auto s = validate_spec(ProblemSpec{n, 1, 1, ranks, w});
        const BTable table(s, n);
        for (int k = 1; k <= ranks; ++k)
          for (int i = 1; i < n; ++i) {
            const double lhs = i * table(i, k);
            const double rhs = (i + 1) * table(i + 1, k);
            REQUIRE(lhs <= rhs + 1e-10 * std::max(std::abs(lhs), std::abs(rhs)));
          }
        for (int i = 1; i <= n; ++i)
          for (int k = 1; k < ranks; ++k) REQUIRE(table(i, k) >= table(i, k + 1) - 1e-12);
      }
    }
  }
}

TEST_CASE("b rejects out-of-range indices") {
  const auto s = validate_spec(ProblemSpec{6, 1, 1, 2, {1.0, 1.0}});
  CHECK_THROWS_AS(b_value(s, 0, 1), std::out_of_range);
  CHECK_THROWS_AS(b_value(s, 7, 1), std::out_of_range);
  CHECK_THROWS_AS(b_value(s, 1, 0), std::out_of_range);
  CHECK_THROWS_AS(b_value(s, 1, 3), std::out_of_range);
  CHECK_THROWS_AS(BTable(s, 0), std::out_of_range);
}
