#include "doctest.h"
#include "oracles.hpp"

#include "props.hpp"

#include "jlab/sampling.hpp"

#include <set>

using namespace jlab;

namespace {

props::Sizes small_sizes() {
  props::Sizes s;
  s.p_operator_instances = 40;
  s.hyperplanes = 300;
  s.convexity_instances = 40;
  s.schur_instances = 40;
  s.gluing_pairs = 1;
  s.gluing_res = 16;
  s.gluing_radii = {2, 3};
  s.lelong_instances = 4;
  return s;
}

}  // namespace

TEST_CASE("compressed-inverse trace matches an explicit basis") {
  Rng rng(4);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    const auto a = random_positive_definite(rng, n);
    const auto b = random_positive_definite(rng, n);
    Eigen::VectorXcd nu(n);
    for (int i = 0; i < n; ++i) nu(i) = Complex(g(rng), g(rng));
    CHECK(props::hyperplane_trace(a.matrix().inverse(), b.matrix(), nu) ==
          doctest::Approx(oracle::explicit_hyperplane_trace(a.matrix(), b.matrix(), nu)).epsilon(1e-9));
  }
}

TEST_CASE("sampled supremum approaches the closed form") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_positive_definite(rng, 3);
    const auto b = random_positive_definite(rng, 3);
    const double p = p_operator(a, b);
    const double sup = props::sampled_hyperplane_sup(a.matrix(), b.matrix(), 2000, true, 100 + trial);
    CHECK(sup <= p + 1e-9 * p);
    CHECK(p - sup < 1e-3 * std::max(1.0, p));
  }
}

TEST_CASE("instance seeds") {
  std::set<std::uint64_t> seen;
  for (const auto& suite : props::suite_names())
    for (int i = 0; i < 50; ++i) seen.insert(props::instance_seed(7, suite, i));
  CHECK(seen.size() == 50 * props::suite_names().size());
  CHECK(props::instance_seed(7, "convexity", 3) == props::instance_seed(7, "convexity", 3));
  CHECK(props::instance_seed(7, "convexity", 3) != props::instance_seed(8, "convexity", 3));
}

TEST_CASE("suites are deterministic and pass at small sizes") {
  const auto sizes = small_sizes();
  for (const auto& name : props::suite_names()) {
    const auto a = props::run_suite(name, 99, sizes, {});
    const auto b = props::run_suite(name, 99, sizes, {});
    CHECK(props::suite_to_json(a, false) == props::suite_to_json(b, false));
    CHECK_MESSAGE(a.violations == 0, name);
    CHECK(a.instances > 0);
  }
  CHECK_THROWS(props::run_suite("no-such-suite", 1, sizes, {}));
}

TEST_CASE("replay detects a tampered tolerance") {
  const auto sizes = small_sizes();
  props::Tolerances tight;
  tight.schur = -1e6;  // every instance violates
  const auto r = props::run_suite("schur-gap", 5, sizes, tight);
  REQUIRE(r.violations == r.instances);
  const auto record = props::violation_to_json(r.violating.front());
  const auto outcome = props::replay(record);
  CHECK(outcome.violated);
  CHECK(outcome.reproduced);
  auto relaxed = record;
  relaxed["tolerance"] = 1e-9;
  CHECK_FALSE(props::replay(relaxed).violated);
  auto edited = record;
  edited["statistic"] = 123.0;
  CHECK_FALSE(props::replay(edited).reproduced);
}
