#include <doctest.h>

#include <sstream>

#include "regionsim/lemma_suite.hpp"
#include "support/oracles.hpp"

using namespace regionsim;

TEST_CASE("lemma suite passes on small graphs and reports every check") {
  LemmaSuiteOptions o;
  o.sizes = {10, 20};
  o.graphs_per_size = 8;
  o.routes_per_graph = 3;
  const auto r = run_lemma_suite(o);
  CHECK(r.passed());
  CHECK(r.failures.empty());
  CHECK(r.graphs == 16);
  CHECK(r.labels_checked == 8 * 10 + 8 * 20);
  CHECK(r.containment_checked == r.labels_checked);
  CHECK(r.routes_checked > 0);
  CHECK(r.max_ratio >= 1.0);
}

TEST_CASE("lemma suite tightness rows match the closed form") {
  LemmaSuiteOptions o;
  o.sizes = {10};
  o.graphs_per_size = 1;
  const auto r = run_lemma_suite(o);
  REQUIRE_FALSE(r.tightness.empty());
  for (const auto& row : r.tightness) {
    CAPTURE(row.arc_count);
    CAPTURE(row.eps);
    CHECK(row.expected == doctest::Approx(oracle::tightness_ratio(row.arc_count, 1.0, row.eps)).epsilon(1e-12));
    CHECK(row.ratio == doctest::Approx(row.expected).epsilon(1e-9));
  }
}

TEST_CASE("lemma suite is deterministic for a fixed seed") {
  LemmaSuiteOptions o;
  o.sizes = {12};
  o.graphs_per_size = 5;
  std::ostringstream a, b;
  write_lemma_report(a, run_lemma_suite(o));
  write_lemma_report(b, run_lemma_suite(o));
  CHECK(a.str() == b.str());
  CHECK_FALSE(a.str().empty());
}
