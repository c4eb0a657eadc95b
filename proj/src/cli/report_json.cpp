#include "subnormal/cli/report_json.hpp"

#include <cmath>

namespace subnormal::cli {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json numbers(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Json to_json(const AtomicMeasure& mu) {
  return {{"atoms", numbers(mu.atoms())}, {"masses", numbers(mu.masses())}};
}

Json to_json(const RateProfile& profile) {
  Json out{{"r", numbers(profile.r)}};
  if (profile.theta) out["theta"] = numbers(*profile.theta);
  return out;
}

Json to_json(const BetaResult& beta) {
  Json out{{"value", number(beta.value)},
           {"attained", beta.attained},
           {"regime", std::string(to_string(beta.regime))}};
  out["sigma"] = beta.sigma ? number(*beta.sigma) : Json(nullptr);
  out["tau"] = beta.tau ? number(*beta.tau) : Json(nullptr);
  out["minimizer"] = beta.empty() ? Json(nullptr) : numbers(beta.minimizer.r);
  return out;
}

Json to_json(const VerificationReport& report) {
  Json conditions = Json::array();
  for (const ConditionResult& c : report.conditions) {
    conditions.push_back({{"name", c.name},
                          {"pass", c.pass()},
                          {"status", std::string(to_string(c.status))},
                          {"required", c.required},
                          {"residual", number(c.residual)},
                          {"tolerance", number(c.tolerance)}});
  }
  return {{"pass", report.passed()}, {"xi", number(report.xi)}, {"conditions", std::move(conditions)}};
}

Json to_json(const CompletionResult& result) {
  Json branches = Json::array();
  for (const CompletionBranch& b : result.branches) {
    branches.push_back({{"kind", b.kind == BranchKind::OneAtomic ? "OneAtomic" : "TwoAtomic"},
                        {"weights", {number(b.weights.x()), number(b.weights.y()), number(b.weights.z())}},
                        {"measure", to_json(b.measure)}});
  }
  return {{"tau", result.tau ? number(*result.tau) : Json(nullptr)}, {"branches", std::move(branches)}};
}

Json to_json(const SufficientCondition& cond) {
  return {{"name", cond.name},
          {"hypothesis_holds", cond.hypothesis_holds},
          {"witness", cond.witness ? numbers(cond.witness->r) : Json(nullptr)},
          {"feasibility_residual", number(cond.feasibility_residual)},
          {"objective", number(cond.objective)},
          {"rates_above_one", cond.rates_above_one},
          {"strict_bound_holds", cond.strict_bound_holds}};
}

Json to_json(const InequalityCheck& check) {
  return {{"name", check.name}, {"lhs", number(check.lhs)}, {"rhs", number(check.rhs)}, {"holds", check.holds}};
}

}  // namespace subnormal::cli
