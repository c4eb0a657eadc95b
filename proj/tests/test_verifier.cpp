#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "subnormal/errors.hpp"
#include "subnormal/verifier.hpp"

using namespace subnormal;
using doctest::Approx;
using oracle::sq;

namespace {

bool throws_code(auto&& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

const double kRoot3 = std::sqrt(3.0);

GeneralData example_data(double lambda0_sq) {
  return {{std::sqrt(lambda0_sq)}, {{1.0, std::sqrt(2.0)}, {1.0, kRoot3}}};
}

std::vector<AtomicMeasure> example_measures() {
  return {AtomicMeasure::dirac(2.0), AtomicMeasure({3.0 - kRoot3, 3.0 + kRoot3}, {0.5, 0.5})};
}

const ProblemShape kShape{2, 1, 2};

}  // namespace

TEST_CASE("equal-mass mixed witness passes up to lambda0^2 = 12/7") {
  const auto mu = example_measures();
  const VerificationReport at = verify_measures(kShape, example_data(12.0 / 7.0), mu);
  CHECK(at.passed());
  const ConditionResult* slack = at.find("trunkInequality");
  REQUIRE(slack);
  CHECK(std::abs(slack->residual) < 1e-15);
  CHECK(at.xi == Approx(3.0 + kRoot3));

  const VerificationReport above = verify_measures(kShape, example_data(1.8), mu);
  CHECK_FALSE(above.passed());
  CHECK(above.find("trunkInequality")->status == ConditionStatus::Fail);
  CHECK(above.find("negMomentSum")->pass());
}

TEST_CASE("inequality slack inside the tolerance is a boundary pass") {
  const double lambda0_sq = 12.0 / 7.0 * (1.0 + 5e-10);
  const VerificationReport r = verify_measures(kShape, example_data(lambda0_sq), example_measures());
  CHECK(r.find("trunkInequality")->status == ConditionStatus::BoundaryPass);
  CHECK(r.passed());
  CHECK(to_string(ConditionStatus::BoundaryPass) == "boundary-pass");
}

TEST_CASE("flat completion passes") {
  const GeneralData d{{1.0}, {{1.0, 2.0}, {std::sqrt(3.0), 2.0}}};  // 1/4 + 3/4 = 1
  const std::vector<AtomicMeasure> mu{AtomicMeasure::dirac(4.0), AtomicMeasure::dirac(4.0)};
  CHECK(verify_measures(kShape, d, mu).passed());
}

TEST_CASE("shape mismatches") {
  const auto mu = example_measures();
  CHECK(throws_code([&] { verify_measures({3, 1, 2}, example_data(1.0), mu); }, ErrorCode::ShapeMismatch));
  CHECK(throws_code([&] { verify_measures({2, 2, 2}, example_data(1.0), mu); }, ErrorCode::ShapeMismatch));
  CHECK(throws_code([&] { verify_measures({2, 1, 3}, example_data(1.0), mu); }, ErrorCode::ShapeMismatch));
  const std::vector<AtomicMeasure> one{AtomicMeasure::dirac(2.0)};
  CHECK(throws_code([&] { verify_measures(kShape, example_data(1.0), one); }, ErrorCode::ShapeMismatch));
}

TEST_CASE("an atom at zero fails the negative moment conditions") {
  const std::vector<AtomicMeasure> mu{AtomicMeasure({0.0, 4.0}, {0.5, 0.5}), AtomicMeasure::dirac(3.0)};
  const VerificationReport r = verify_measures(kShape, example_data(1.0), mu);
  CHECK_FALSE(r.passed());
  CHECK(std::isinf(r.find("negMomentSum")->residual));
  CHECK_FALSE(r.find("zeroAtomCheck[0]")->pass());
  CHECK(r.find("trunkInequality")->status == ConditionStatus::Fail);
}

TEST_CASE("extra atoms are reported but do not fail the measure check") {
  // data synthesized from the measure so every moment condition holds
  const AtomicMeasure three({1.0, 2.0, 4.0}, {0.25, 0.5, 0.25});
  const double m1 = moment(three, 1);
  const double n1 = moment(three, -1);
  const GeneralData d{{0.1}, {{std::sqrt(0.5 / n1), std::sqrt(m1)}, {std::sqrt(0.5 / n1), std::sqrt(m1)}}};
  const VerificationReport r = verify_measures(kShape, d, std::vector<AtomicMeasure>{three, three});
  CHECK(r.passed());
  const ConditionResult* bound = r.find("atomCountBound[0]");
  REQUIRE(bound);
  CHECK_FALSE(bound->pass());
  CHECK_FALSE(bound->required);
}

TEST_CASE("general trunk and depth") {
  // kappa = 2, p = 3, data synthesized from the measures by direct sums.
  const std::vector<AtomicMeasure> mu{AtomicMeasure({1.0, 3.0}, {0.5, 0.5}), AtomicMeasure({2.0, 5.0}, {0.3, 0.7})};
  const std::vector<double> w{1.0, 2.0};
  double neg1 = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    neg1 += w[i] * oracle::atom_moment({mu[i].atoms().begin(), mu[i].atoms().end()},
                                       {mu[i].masses().begin(), mu[i].masses().end()}, -1);
  }
  GeneralData d;
  double neg2 = 0.0;
  double neg3 = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::vector<double> s(mu[i].atoms().begin(), mu[i].atoms().end());
    const std::vector<double> m(mu[i].masses().begin(), mu[i].masses().end());
    const double l1_sq = w[i] / neg1;
    neg2 += l1_sq * oracle::atom_moment(s, m, -2);
    neg3 += l1_sq * oracle::atom_moment(s, m, -3);
    const double g1 = oracle::atom_moment(s, m, 1);
    const double g2 = oracle::atom_moment(s, m, 2);
    d.branches.push_back({std::sqrt(l1_sq), std::sqrt(g1), std::sqrt(g2 / g1)});
  }
  const double lambda0_sq = 1.0 / neg2;
  const double lambda1_sq = 1.0 / (lambda0_sq * neg3) * 0.9;  // strict slack of 10%
  d.trunk = {std::sqrt(lambda0_sq), std::sqrt(lambda1_sq)};

  const VerificationReport r = verify_measures({2, 2, 3}, d, mu);
  CHECK(r.passed());
  CHECK(r.find("trunkEquality[1]"));
  CHECK(r.find("firstMomentMatch[1,2]"));
  CHECK(r.find("trunkInequality")->residual == Approx(0.1));

  d.trunk[0] *= 1.01;
  const VerificationReport off = verify_measures({2, 2, 3}, d, mu);
  CHECK_FALSE(off.find("trunkEquality[1]")->pass());
}

TEST_CASE("constructed completions pass end to end") {
  std::mt19937_64 rng(31);
  int yes = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const InitialData d = oracle::random_data(rng, 2 + trial % 3);
    const CompletionDecision c = exists_completion(d);
    if (!c.yes) continue;
    ++yes;
    const CompletionResult res = construct_completion(d, *c.witness);
    const VerificationReport r = verify_completion(d, res);
    CHECK(r.passed());
    for (const CompletionBranch& b : res.branches) {
      CHECK(b.measure.size() <= 2);
      CHECK_FALSE(has_atom_at_zero(b.measure));
    }
  }
  CHECK(yes > 100);
}

TEST_CASE("tampered completion fails") {
  const InitialData d{std::sqrt(12.0 / 7.0), {{1.0, std::sqrt(2.0)}, {1.0, kRoot3}}};
  CompletionResult res = construct_completion(d, {{1.0, 1.5}, {}});
  REQUIRE(verify_completion(d, res).passed());
  CompletionBranch& b = res.branches[1];
  b.weights = WeightTriple(b.weights.x(), b.weights.y(), b.weights.y());
  const VerificationReport r = verify_completion(d, res);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.find("branchKind[1]")->pass());
  CHECK_FALSE(r.find("weightMomentMatch[1,3]")->pass());
}

TEST_CASE("depth one on a flat completion") {
  const InitialData d{1.0, {{1.0, 2.0}, {std::sqrt(3.0), 2.0}}};
  const CompletionResult res = construct_completion(d, {{1.0, 1.0}, {}});
  const VerificationReport r = verify_completion(d, res, 1);
  CHECK(r.passed());
  CHECK(r.find("weightMomentMatch[0,1]"));
  CHECK_FALSE(r.find("weightMomentMatch[0,2]"));
}

TEST_CASE("brute force grid") {
  const InitialData example{1.0, {{1.0, std::sqrt(2.0)}, {1.0, kRoot3}}};
  CHECK(*brute_force_beta(example, 10000) == Approx(0.5).epsilon(1e-3));

  const InitialData interior{1.0, {{1.0, 2.0}, {1.0, 2.0}}};
  CHECK(*brute_force_beta(interior, 10000) == Approx(0.5).epsilon(1e-6));

  const InitialData infeasible{1.0, {{1.0, 1.0}, {1.0, 1.0}}};
  CHECK_FALSE(brute_force_beta(infeasible, 1000));

  const InitialData four{1.0, {{1.0, 3.0}, {1.0, 3.0}, {1.0, 3.0}, {1.0, 3.0}}};
  CHECK(throws_code([&] { brute_force_beta(four, 1000); }, ErrorCode::ShapeMismatch));
}

TEST_CASE("brute force bounds beta from above for eta = 3") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const InitialData d = oracle::random_data(rng, 3);
    const double want = oracle::subset_kkt_beta(oracle::rates(d), oracle::quads(d));
    const auto grid = brute_force_beta(d, 40000);
    if (std::isinf(want)) {
      CHECK_FALSE(grid);
      continue;
    }
    if (!grid) continue;  // slice thinner than the 1e-9 offset
    CHECK(*grid >= want * (1.0 - 1e-12));
    CHECK(*grid - want < 1e-3 * std::max(1.0, want));
  }
}

TEST_CASE("no false negatives at grid scale") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 500; ++trial) {
    const InitialData d = oracle::random_data(rng, 2);
    const TwoAtomicDecision two = exists_two_atomic(d);
    if (two.yes) continue;
    const auto grid = brute_force_beta(d, 20000);
    if (!grid) continue;
    CHECK(*grid >= two.threshold * (1.0 - 1e-9));
  }
}
