// Acceptance gate: each criterion prints one PASS/FAIL line; exit status is
// nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "subnormal/cli/commands.hpp"
#include "subnormal/solver.hpp"
#include "subnormal/stampfli.hpp"
#include "subnormal/verifier.hpp"

using namespace subnormal;
using oracle::sq;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

std::string instance_text(const InitialData& d) {
  cli::Json branches = cli::Json::array();
  for (const Branch& b : d.branches) branches.push_back({{"l1", b.l1}, {"l2", b.l2}});
  cli::Json doc{{"shape", {{"eta", d.eta()}, {"kappa", 1}, {"p", 2}}}, {"lambda0", d.lambda0}, {"branches", branches}};
  return doc.dump();
}

// Mixed witness: delta(2) and the equal-mass measure on 3 -+ sqrt3.
Outcome mixed_example() {
  const double root3 = std::sqrt(3.0);
  const std::vector<AtomicMeasure> mu{AtomicMeasure::dirac(2.0), AtomicMeasure({3.0 - root3, 3.0 + root3}, {0.5, 0.5})};
  const double edge = 12.0 / 7.0;
  const double levels[] = {edge - 1e-6, edge, edge + 1e-6};
  const bool expected[] = {true, true, false};
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    const GeneralData d{{std::sqrt(levels[k])}, {{1.0, std::sqrt(2.0)}, {1.0, root3}}};
    const VerificationReport r = verify_measures({2, 1, 2}, d, mu, 1e-9);
    ok = ok && r.passed() == expected[k];
    detail += fmt("%s%s(slack %.2e)", k ? ", " : "", r.passed() ? "pass" : "fail", r.find("trunkInequality")->residual);
  }
  return {ok, detail};
}

// Two-branch closed form against the grid and the water-filling minimizer.
Outcome closed_form_beta() {
  std::mt19937_64 rng(1002);
  int count[3] = {0, 0, 0};
  int bad_grid = 0;
  int bad_numeric = 0;
  int bad_label = 0;
  double worst_grid = 0.0;
  double worst_numeric = 0.0;
  while (count[0] + count[1] + count[2] < 300) {
    const double a1 = uniform(rng, 0.3, 2.0);
    const double b1 = uniform(rng, 0.3, 2.0);
    const double a2 = uniform(rng, 0.5, 8.0);
    const double b2 = uniform(rng, 0.5, 8.0);
    const double sigma = a2 / (a1 + b1);
    const double tau = a2 * (b2 - b1) / (a1 * b2);
    if (!(tau > 1.0 + 1e-6) || std::abs(sigma - 1.0) < 1e-6 || std::abs(sigma - tau) < 1e-6) continue;
    const int regime = sigma <= 1.0 ? 0 : (sigma < tau ? 1 : 2);
    if (count[regime] == 100) continue;
    ++count[regime];

    const InitialData d{1.0, {{std::sqrt(a1), std::sqrt(a2)}, {std::sqrt(b1), std::sqrt(b2)}}};
    const BetaResult closed = beta_eta2_closed(d);
    const BetaRegime want[] = {BetaRegime::SigmaLow, BetaRegime::Interior, BetaRegime::TauHigh};
    if (closed.regime != want[regime] || rel(*closed.sigma, sigma) > 1e-12 || rel(*closed.tau, tau) > 1e-12) ++bad_label;
    const double grid = *brute_force_beta(d, 100000);
    const double numeric = beta_numeric(d).value;
    worst_grid = std::max(worst_grid, std::abs(grid - closed.value));
    worst_numeric = std::max(worst_numeric, rel(numeric, closed.value));
    if (std::abs(grid - closed.value) > 1e-3) ++bad_grid;
    if (rel(numeric, closed.value) > 1e-10) ++bad_numeric;
  }
  return {bad_grid == 0 && bad_numeric == 0 && bad_label == 0,
          fmt("300 instances (100 per regime); max |grid - closed| %.2e, max rel |numeric - closed| %.2e, "
              "label mismatches %d",
              worst_grid, worst_numeric, bad_label)};
}

Outcome rate_round_trip() {
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  int unordered = 0;
  for (int k = 0; k < 1000; ++k) {
    const double x = uniform(rng, 0.1, 10.0);
    const RateTheta rt{uniform(rng, 1.0 + 1e-4, 50.0), uniform(rng, 1.0 + 1e-4, 50.0)};
    const WeightTriple t = triple_from_params(x, rt);
    const RateTheta back = params_from_triple(t);
    worst = std::max({worst, rel(back.r, rt.r), rel(back.theta, rt.theta)});
    if (!(t.x() < t.y() && t.y() < t.z() && t.is_generic())) ++unordered;
  }
  return {worst <= 1e-9 && unordered == 0,
          fmt("1000 samples; max relative error %.2e, non-increasing triples %d", worst, unordered)};
}

Outcome negative_moments() {
  std::mt19937_64 rng(1004);
  double worst_neg = 0.0;
  double worst_gamma = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = uniform(rng, 0.1, 10.0);
    const double y = x * (1.0 + uniform(rng, 0.01, 2.0));
    const double z = y * (1.0 + uniform(rng, 0.01, 2.0));
    const WeightTriple t(x, y, z);
    const AtomicMeasure xi = stampfli_measure(t);
    worst_neg = std::max({worst_neg, rel(neg_moment1(t), moment(xi, -1)), rel(neg_moment2(t), moment(xi, -2))});
    const double gamma[] = {x * x, x * x * y * y, x * x * y * y * z * z};
    for (int n = 1; n <= 3; ++n) worst_gamma = std::max(worst_gamma, rel(moment(xi, n), gamma[n - 1]));
  }
  return {worst_neg <= 1e-10 && worst_gamma <= 1e-10,
          fmt("1000 triples; max rel error negative moments %.2e, weight products %.2e", worst_neg, worst_gamma)};
}

Outcome end_to_end() {
  std::mt19937_64 rng(1005);
  int yes = 0;
  int broken = 0;
  for (int k = 0; k < 500; ++k) {
    const InitialData d = oracle::random_data(rng, 2 + static_cast<std::size_t>(k % 3));
    const cli::CommandResult res = cli::run_instance_command("solve", instance_text(d));
    if (res.exit_code == cli::kExitNo) continue;
    if (res.exit_code != cli::kExitSuccess) {
      ++broken;
      continue;
    }
    ++yes;
    bool ok = res.report["verification"]["pass"].get<bool>();
    for (const auto& b : res.report["completion"]["branches"]) {
      const auto& atoms = b["measure"]["atoms"];
      ok = ok && atoms.size() <= 2 && atoms[0].get<double>() > 0.0;
    }
    if (!ok) ++broken;
  }
  return {broken == 0 && yes > 0, fmt("500 instances, %d YES, %d failing verification or construction", yes, broken)};
}

Outcome necessary_conditions() {
  std::mt19937_64 rng(1006);
  int yes = 0;
  int violated = 0;
  for (int k = 0; k < 1000; ++k) {
    const InitialData d = oracle::random_data(rng, 2 + static_cast<std::size_t>(k % 3));
    if (!exists_two_atomic(d).yes) continue;
    ++yes;
    for (const InequalityCheck& c : necessary_checks(d)) violated += c.holds ? 0 : 1;
  }

  int counter_yes = 0;
  int not_violated = 0;
  for (int which = 0; which < 4; ++which) {
    for (int k = 0; k < 50; ++k) {
      InitialData d = oracle::random_data(rng, 2 + static_cast<std::size_t>(k % 3));
      const double eta = static_cast<double>(d.eta());
      double first = 0.0;
      double quad = 0.0;
      for (const Branch& b : d.branches) {
        first += sq(b.l1);
        quad += sq(b.l1) / sq(sq(b.l2));
      }
      switch (which) {
        case 0: d.lambda0 = std::sqrt(first * uniform(rng, 1.0, 1.5)); break;
        case 1: d.lambda0 = std::sqrt(uniform(rng, 1.0, 1.5) / quad); break;
        case 2:
          for (Branch& b : d.branches) b.l2 = b.l1 * std::sqrt(eta * uniform(rng, 0.6, 1.0));
          break;
        default:
          for (Branch& b : d.branches) b.l2 = std::sqrt(first * uniform(rng, 0.5, 1.0));
          break;
      }
      if (necessary_checks(d)[static_cast<std::size_t>(which)].holds) ++not_violated;
      if (exists_two_atomic(d).yes) ++counter_yes;
    }
  }
  return {violated == 0 && yes > 0 && counter_yes == 0 && not_violated == 0,
          fmt("%d YES instances with %d violated inequalities; 200 counterexamples, %d answered YES", yes, violated,
              counter_yes)};
}

Outcome witness_families() {
  std::mt19937_64 rng(1007);
  int failures = 0;
  double worst_residual = 0.0;
  for (std::size_t family = 0; family < 4; ++family) {
    int made = 0;
    while (made < 300) {
      InitialData d = oracle::random_data(rng, 2 + static_cast<std::size_t>(made % 3));
      const double eta = static_cast<double>(d.eta());
      double first = 0.0;
      for (const Branch& b : d.branches) first += sq(b.l1);
      if (family == 0) {
        for (Branch& b : d.branches) b.l2 = std::sqrt(first * uniform(rng, 1.05, 3.0));
      } else if (family == 2) {
        for (Branch& b : d.branches) b.l2 = b.l1 * std::sqrt(eta * uniform(rng, 1.05, 3.0));
      }
      const std::vector<double> a = oracle::rates(d);
      const std::vector<double> c = oracle::quads(d);
      const double s = std::accumulate(a.begin(), a.end(), 0.0);
      double inv_l2 = 0.0;
      for (const Branch& b : d.branches) inv_l2 += 1.0 / sq(b.l2);

      std::vector<double> r;
      bool hypothesis = true;
      for (std::size_t i = 0; i < d.eta(); ++i) {
        const Branch& b = d.branches[i];
        switch (family) {
          case 0: r.push_back(sq(b.l2) / first); break;
          case 1: r.push_back(1.0 / s); break;
          case 2: r.push_back(sq(b.l2) / (eta * sq(b.l1))); break;
          default: r.push_back(1.0 / (sq(b.l1) * inv_l2)); break;
        }
        hypothesis = hypothesis && r.back() > 1.0;
      }
      if (!hypothesis) continue;
      double objective = 0.0;
      for (std::size_t i = 0; i < d.eta(); ++i) objective += c[i] * r[i] * r[i];
      double lambda0_sq = uniform(rng, 0.3, 0.99) / objective;
      if (family == 0) lambda0_sq = std::min(lambda0_sq, first * uniform(rng, 0.3, 0.99));
      d.lambda0 = std::sqrt(lambda0_sq);
      ++made;

      const SufficientCondition cond = sufficient_checks(d)[family];
      double residual = -1.0;
      bool same = cond.witness.has_value();
      for (std::size_t i = 0; same && i < d.eta(); ++i) {
        residual += a[i] * cond.witness->r[i];
        same = rel(cond.witness->r[i], r[i]) <= 1e-12;
      }
      worst_residual = std::max(worst_residual, std::abs(residual));
      bool ok = cond.hypothesis_holds && same && std::abs(residual) <= 1e-12 && cond.strict_bound_holds &&
                cond.objective < 1.0 / lambda0_sq;
      if (ok) ok = verify_completion(d, construct_completion(d, *cond.witness)).passed();
      if (!ok) ++failures;
    }
  }
  return {failures == 0, fmt("4 families x 300 instances; max |sum r a - 1| %.2e, failures %d", worst_residual, failures)};
}

Outcome flat_cases() {
  struct Row {
    double l2_sq;
    double lambda0_sq;
    FlatCase want;
    bool completion;
    bool two_atomic;
  };
  const Row rows[] = {
      {1.5, 1.0, FlatCase::NoCompletion_Hyponormality, false, false},
      {1.5, 2.0, FlatCase::NoCompletion_Hyponormality, false, false},
      {2.0, 1.0, FlatCase::NoTwoAtomic_OneAtomicOnly, true, false},
      {2.0, 2.0, FlatCase::NoTwoAtomic_OneAtomicOnly, true, false},
      {3.0, 1.0, FlatCase::TwoAtomicExists, true, true},
      {3.0, 2.0, FlatCase::NoTwoAtomic_MustBeOneAtomic, false, false},
  };
  bool ok = true;
  std::string detail;
  for (const Row& row : rows) {
    const double l2 = std::sqrt(row.l2_sq);
    const InitialData d{std::sqrt(row.lambda0_sq), {{1.0, l2}, {1.0, l2}}};
    const FlatCase got = classify_flat(d);
    const cli::CommandResult solve = cli::run_instance_command("solve", instance_text(d));
    const bool yes = solve.exit_code == cli::kExitSuccess;
    const bool two = solve.report["two_atomic"]["decision"] == "YES";
    ok = ok && got == row.want && yes == row.completion && two == row.two_atomic &&
         (yes || solve.exit_code == cli::kExitNo);
    detail += fmt("%s(%g,%g)->%d/%s", detail.empty() ? "" : " ", row.l2_sq, row.lambda0_sq,
                  static_cast<int>(got) + 1, yes ? "YES" : "NO");
  }
  return {ok, detail};
}

Outcome least_norm_identity() {
  std::mt19937_64 rng(1009);
  int below = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 4);
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = uniform(rng, 0.1, 3.0);
      b[i] = uniform(rng, 0.1, 3.0);
    }
    const LeastNormResult res = weighted_least_norm(a, b);
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) weight += a[i] * a[i] / b[i];
    const double closed = 1.0 / weight;
    double at = 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      at += b[i] * res.r[i] * res.r[i];
      dot += a[i] * res.r[i];
    }
    worst = std::max({worst, rel(res.value, closed), rel(at, closed), std::abs(dot - 1.0)});
    for (int m = 0; m < 100; ++m) {
      std::vector<double> r(n);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        r[i] = uniform(rng, 0.01, 2.0);
        sum += a[i] * r[i];
      }
      double value = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        r[i] /= sum;
        value += b[i] * r[i] * r[i];
      }
      if (value < closed * (1.0 - 1e-12)) ++below;
    }
  }
  return {below == 0 && worst <= 1e-12,
          fmt("200 (a, b) x 100 profiles; %d below the bound, max attainment error %.2e", below, worst)};
}

Outcome support_closed_form() {
  std::mt19937_64 rng(1010);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = uniform(rng, 0.1, 10.0);
    const RateTheta rt{uniform(rng, 1.0 + 1e-4, 50.0), uniform(rng, 1.0 + 1e-4, 50.0)};
    const double top = support_sup(stampfli_measure(triple_from_params(x, rt)));
    worst = std::max(worst, rel(support_sup_closed(x, rt), top));
  }
  return {worst <= 1e-10, fmt("1000 samples; max relative error %.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"mixed example verifies iff lambda0^2 <= 12/7", mixed_example},
      {"two-branch closed-form beta vs grid and water-filling", closed_form_beta},
      {"(x, r, theta) round trip", rate_round_trip},
      {"negative moments and weight products vs atomic sums", negative_moments},
      {"end-to-end soundness of solve", end_to_end},
      {"necessary inequalities", necessary_conditions},
      {"closed-form witness families", witness_families},
      {"flat classification vs solve", flat_cases},
      {"weighted least-norm identity", least_norm_identity},
      {"closed-form support supremum", support_closed_form},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const Outcome o = criteria[k].second();
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
