#include <catch2/catch_amalgamated.hpp>

#include "secretary/problem.hpp"

using namespace secretary;

TEST_CASE("validate_spec accepts a well-formed spec") {
  const auto s = validate_spec(ProblemSpec{10, 2, 2, 2, {1.0, 1.0}});
  CHECK(s.n() == 10);
  CHECK(s.positions_per_queue() == 5);
  CHECK(s.offline_optimum() == 2.0);
}

TEST_CASE("validate_spec reports the first violated invariant") {
  CHECK_THROWS_WITH(validate_spec(ProblemSpec{10, 3, 1, 1, {1.0}}), "n not multiple of Q");
  CHECK_THROWS_WITH(validate_spec(ProblemSpec{10, 2, 1, 2, {1.0, 2.0}}), "weights increasing");
  CHECK_THROWS_WITH(validate_spec(ProblemSpec{0, 1, 1, 1, {1.0}}), "n must be positive");
  CHECK_THROWS_WITH(validate_spec(ProblemSpec{4, 8, 1, 1, {1.0}}), "Q exceeds n");
  CHECK_THROWS_WITH(validate_spec(ProblemSpec{4, 1, 8, 1, {1.0}}), "J exceeds n");
  CHECK_THROWS_WITH(validate_spec(ProblemSpec{4, 1, 1, 8, std::vector<double>(8, 1.0)}),
                    "K exceeds n");
  CHECK_THROWS_WITH(validate_spec(ProblemSpec{4, 1, 1, 2, {1.0}}), "weights must have K entries");
  CHECK_THROWS_WITH(validate_spec(ProblemSpec{4, 1, 1, 2, {1.0, 0.0}}),
                    "weights must be positive");
}

TEST_CASE("empty weights default to all ones") {
  const auto s = validate_spec(ProblemSpec{6, 2, 2, 3, {}});
  CHECK(s.weights() == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("offline optimum sums the min(J,K) largest weights") {
  CHECK(offline_optimum(ProblemSpec{9, 1, 1, 3, {1, 1, 1}}) == 1.0);
  CHECK(offline_optimum(ProblemSpec{9, 1, 3, 2, {2, 1}}) == 3.0);
  CHECK(offline_optimum(ProblemSpec{9, 1, 2, 2, {1, 1}}) == 2.0);
}

TEST_CASE("flatten and unflatten are mutually inverse") {
  for (int queues : {1, 2, 3, 4, 7}) {
    const int n = queues * 6;
    for (int t = 1; t <= n; ++t) {
      const FlatIndex f = unflatten(t, queues);
      CHECK(flatten(f.q, f.i, queues) == t);
      CHECK(t == (f.i - 1) * queues + f.q);
      CHECK((1 <= f.q && f.q <= queues));
    }
  }
}

TEST_CASE("spec file parsing") {
  SECTION("full file") {
    const ProblemSpec s = parse_spec_text("n=10\nQ=2\nJ=2\nK=2\nweights=1,0.5\n");
    CHECK(s.n == 10);
    CHECK(s.queues == 2);
    CHECK(s.weights == std::vector<double>{1.0, 0.5});
  }
  SECTION("weights omitted means all ones after validation") {
    const ProblemSpec s = parse_spec_text("n=10\nQ=2\nJ=1\nK=2");
    CHECK(s.weights.empty());
    CHECK(validate_spec(s).weights() == std::vector<double>{1.0, 1.0});
  }
  SECTION("blank lines and comments are skipped") {
    CHECK_NOTHROW(parse_spec_text("# spec\n\nn=4\nQ=1\nJ=1\nK=1\n"));
  }
  SECTION("unknown key") { CHECK_THROWS(parse_spec_text("n=4\nQ=1\nJ=1\nK=1\nfoo=1\n")); }
  SECTION("missing key") { CHECK_THROWS(parse_spec_text("n=4\nQ=1\nJ=1\n")); }
  SECTION("bad value") { CHECK_THROWS(parse_spec_text("n=four\nQ=1\nJ=1\nK=1\n")); }
  SECTION("missing file") { CHECK_THROWS(load_spec_file("/nonexistent/spec.txt")); }
}
