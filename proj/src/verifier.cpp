#include "subnormal/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "subnormal/errors.hpp"
#include "subnormal/stampfli.hpp"

namespace subnormal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGridOffset = 1e-9;

std::string indexed(std::string_view name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

std::string indexed(std::string_view name, std::size_t i, std::size_t n) {
  return std::string(name) + "[" + std::to_string(i) + "," + std::to_string(n) + "]";
}

ConditionResult equality(std::string name, double residual, double tol) {
  const bool ok = std::abs(residual) <= tol;
  return {std::move(name), residual, tol, ok ? ConditionStatus::Pass : ConditionStatus::Fail};
}

ConditionResult slack(std::string name, double value, double tol) {
  ConditionStatus status = ConditionStatus::Fail;
  if (value >= 0.0) {
    status = ConditionStatus::Pass;
  } else if (value >= -tol) {
    status = ConditionStatus::BoundaryPass;
  }
  return {std::move(name), value, tol, status};
}

double mass_at_zero(const AtomicMeasure& mu) {
  return has_atom_at_zero(mu) ? mu.masses().front() : 0.0;
}

// Sum of w_i^2 * int s^{-k} d mu_i, +inf if any measure charges zero.
double negative_sum(const GeneralData& data, std::span<const AtomicMeasure> measures, int k) {
  double total = 0.0;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    if (has_atom_at_zero(measures[i])) return kInf;
    const double w = data.branches[i].front();
    total += w * w * moment(measures[i], -k);
  }
  return total;
}

void check_shape(const ProblemShape& shape, const GeneralData& data, std::size_t measure_count) {
  if (shape.eta < 1 || shape.kappa < 1 || shape.p < 1) {
    throw Error(ErrorCode::ShapeMismatch, "eta, kappa and p must be positive");
  }
  const auto eta = static_cast<std::size_t>(shape.eta);
  if (data.branches.size() != eta || measure_count != eta) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(eta) + " branches and measures, got " +
                                              std::to_string(data.branches.size()) + " and " +
                                              std::to_string(measure_count));
  }
  if (data.trunk.size() != static_cast<std::size_t>(shape.kappa)) {
    throw Error(ErrorCode::ShapeMismatch, "trunk length " + std::to_string(data.trunk.size()) +
                                              " differs from kappa = " + std::to_string(shape.kappa));
  }
  for (std::size_t i = 0; i < eta; ++i) {
    if (data.branches[i].size() != static_cast<std::size_t>(shape.p)) {
      throw Error(ErrorCode::ShapeMismatch, "branch " + std::to_string(i + 1) + " has " +
                                                std::to_string(data.branches[i].size()) + " weights, p = " +
                                                std::to_string(shape.p));
    }
  }
  auto positive = [](double w) { return std::isfinite(w) && w > 0.0; };
  bool ok = std::all_of(data.trunk.begin(), data.trunk.end(), positive);
  for (const auto& b : data.branches) ok = ok && std::all_of(b.begin(), b.end(), positive);
  if (!ok) throw Error(ErrorCode::InvalidData, "weights must be finite and positive");
}

}  // namespace

std::string_view to_string(ConditionStatus status) noexcept {
  switch (status) {
    case ConditionStatus::Pass: return "pass";
    case ConditionStatus::BoundaryPass: return "boundary-pass";
    case ConditionStatus::Fail: return "fail";
  }
  return "unknown";
}

bool VerificationReport::passed() const noexcept {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return !c.required || c.pass(); });
}

const ConditionResult* VerificationReport::find(std::string_view name) const noexcept {
  for (const ConditionResult& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

GeneralData to_general(const InitialData& data) {
  GeneralData out;
  out.trunk = {data.lambda0};
  for (const Branch& b : data.branches) out.branches.push_back({b.l1, b.l2});
  return out;
}

VerificationReport verify_measures(const ProblemShape& shape, const GeneralData& data,
                                   std::span<const AtomicMeasure> measures, double tol) {
  check_shape(shape, data, measures.size());
  VerificationReport report;
  auto& out = report.conditions;

  for (std::size_t i = 0; i < measures.size(); ++i) {
    double product = 1.0;
    for (int n = 1; n < shape.p; ++n) {
      const double w = data.branches[i][static_cast<std::size_t>(n)];
      product *= w * w;
      out.push_back(equality(indexed("firstMomentMatch", i, n), (moment(measures[i], n) - product) / product, tol));
    }
  }

  out.push_back(equality("negMomentSum", negative_sum(data, measures, 1) - 1.0, tol));

  // rhs_k = 1 / prod_{j<k} lambda_{-j}^2
  double rhs = 1.0;
  for (int k = 1; k <= shape.kappa; ++k) {
    const double w = data.trunk[static_cast<std::size_t>(k - 1)];
    rhs /= w * w;
    const double total = negative_sum(data, measures, k + 1);
    if (k < shape.kappa) {
      out.push_back(equality(indexed("trunkEquality", static_cast<std::size_t>(k)), (total - rhs) / rhs, tol));
    } else {
      out.push_back(slack("trunkInequality", (rhs - total) / rhs, tol));
    }
  }

  report.xi = 0.0;
  for (const AtomicMeasure& mu : measures) report.xi = std::max(report.xi, support_sup(mu));
  out.push_back({"supSupport", 0.0, tol, std::isfinite(report.xi) ? ConditionStatus::Pass : ConditionStatus::Fail});

  const int bound = (shape.kappa + shape.p + 2) / 2;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const double excess = static_cast<double>(measures[i].size()) - bound;
    ConditionResult c{indexed("atomCountBound", i), excess, 0.0,
                      excess <= 0.0 ? ConditionStatus::Pass : ConditionStatus::Fail};
    c.required = false;
    out.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const double m0 = mass_at_zero(measures[i]);
    out.push_back({indexed("zeroAtomCheck", i), m0, 0.0, m0 == 0.0 ? ConditionStatus::Pass : ConditionStatus::Fail});
  }
  return report;
}

VerificationReport verify_completion(const InitialData& data, const CompletionResult& result, std::size_t depth,
                                     double tol) {
  validate(data);
  const std::size_t eta = data.eta();
  if (result.branches.size() != eta) {
    throw Error(ErrorCode::ShapeMismatch, "completion has " + std::to_string(result.branches.size()) +
                                              " branches, data has " + std::to_string(eta));
  }
  std::vector<AtomicMeasure> measures;
  measures.reserve(eta);
  for (const CompletionBranch& b : result.branches) measures.push_back(b.measure);

  const ProblemShape shape{static_cast<int>(eta), 1, 2};
  VerificationReport report = verify_measures(shape, to_general(data), measures, tol);
  auto& out = report.conditions;
  for (ConditionResult& c : out) {
    if (c.name.starts_with("atomCountBound")) c.required = true;
  }

  for (std::size_t i = 0; i < eta; ++i) {
    const CompletionBranch& b = result.branches[i];
    const AtomicMeasure& mu = b.measure;

    const bool kind_ok = b.kind == BranchKind::TwoAtomic
                             ? b.weights.is_generic() && mu.size() == 2
                             : b.weights.kind() == TripleKind::Flat && mu.size() == 1;
    out.push_back({indexed("branchKind", i), 0.0, 0.0, kind_ok ? ConditionStatus::Pass : ConditionStatus::Fail});

    const double l2 = data.branches[i].l2;
    out.push_back(equality(indexed("weightData", i), (b.weights.x() - l2) / l2, tol));

    if (depth == 0) continue;
    std::vector<double> weights = weight_sequence(b.weights, std::max<std::size_t>(depth, 3));
    weights.resize(depth);

    double drop = 0.0;
    for (std::size_t k = 1; k < weights.size(); ++k) {
      drop = std::max(drop, (weights[k - 1] - weights[k]) / weights[k - 1]);
    }
    out.push_back(equality(indexed("weightMonotonicity", i), drop, tol));

    const double ceiling = std::sqrt(support_sup(mu));
    const double top = *std::max_element(weights.begin(), weights.end());
    out.push_back(slack(indexed("weightBound", i), (ceiling - top) / ceiling, tol));

    double gamma = 1.0;
    for (std::size_t n = 1; n <= depth; ++n) {
      gamma *= weights[n - 1] * weights[n - 1];
      out.push_back(equality(indexed("weightMomentMatch", i, n),
                             (moment(mu, static_cast<int>(n)) - gamma) / gamma, tol));
    }
  }
  return report;
}

std::optional<double> brute_force_beta(const InitialData& data, std::size_t grid_points) {
  validate(data);
  if (data.eta() > 3) {
    throw Error(ErrorCode::ShapeMismatch, "brute force supports eta = 2 or 3, got " + std::to_string(data.eta()));
  }
  if (grid_points < 2) throw Error(ErrorCode::InvalidData, "grid_points must be at least 2");
  const std::vector<double> a = rate_coefficients(data);
  const std::vector<double> c = quadratic_coefficients(data);
  const double lo = 1.0 + kGridOffset;

  auto sample = [](double from, double to, std::size_t count, std::size_t k) {
    return count == 1 ? from : from + (to - from) * static_cast<double>(k) / static_cast<double>(count - 1);
  };

  std::optional<double> best;
  auto consider = [&](double value) {
    if (!best || value < *best) best = value;
  };

  if (data.eta() == 2) {
    const double hi = (1.0 - a[1] * lo) / a[0];
    if (hi < lo) return std::nullopt;
    for (std::size_t k = 0; k < grid_points; ++k) {
      const double r1 = sample(lo, hi, grid_points, k);
      const double r2 = (1.0 - a[0] * r1) / a[1];
      consider(c[0] * r1 * r1 + c[1] * r2 * r2);
    }
    return best;
  }

  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(grid_points))));
  const double hi1 = (1.0 - (a[1] + a[2]) * lo) / a[0];
  if (hi1 < lo) return std::nullopt;
  for (std::size_t k = 0; k < side; ++k) {
    const double r1 = sample(lo, hi1, side, k);
    const double hi2 = (1.0 - a[0] * r1 - a[2] * lo) / a[1];
    if (hi2 < lo) continue;
    for (std::size_t m = 0; m < side; ++m) {
      const double r2 = sample(lo, hi2, side, m);
      const double r3 = (1.0 - a[0] * r1 - a[1] * r2) / a[2];
      consider(c[0] * r1 * r1 + c[1] * r2 * r2 + c[2] * r3 * r3);
    }
  }
  return best;
}

}  // namespace subnormal
