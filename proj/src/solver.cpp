#include "subnormal/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "subnormal/errors.hpp"
#include "subnormal/tolerances.hpp"

namespace subnormal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sq(double v) { return v * v; }

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

double sum_l1_squared(const InitialData& data) {
  double s = 0.0;
  for (const Branch& b : data.branches) s += sq(b.l1);
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double quadratic_value(std::span<const double> c, std::span<const double> r) {
  double v = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * r[i] * r[i];
  return v;
}

// Minimizes sum c_i r_i^2 subject to sum a_i r_i = 1, r_i >= 1, assuming
// sum a_i < 1. Clamped coordinates are exactly 1. Each pass clamps every free
// coordinate whose interior KKT value falls below 1 (or within kBoundaryTol of
// it, as long as some free coordinate stays clear of the bound). Coordinates
// are never released, so at most eta passes run.
std::vector<double> water_fill(std::span<const double> c, std::span<const double> a) {
  const std::size_t n = c.size();
  std::vector<bool> clamped(n, false);
  std::vector<double> r(n, 1.0);
  for (std::size_t pass = 0; pass <= n; ++pass) {
    double rest = 1.0;
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (clamped[i]) {
        rest -= a[i];
      } else {
        weight += a[i] * a[i] / c[i];
      }
    }
    bool any_clear = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (clamped[i]) continue;
      r[i] = rest * (a[i] / c[i]) / weight;
      if (r[i] > 1.0 + kBoundaryTol) any_clear = true;
    }
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (clamped[i]) continue;
      const bool marginal = r[i] <= 1.0 + kBoundaryTol;
      if (r[i] < 1.0 || (marginal && any_clear)) {
        clamped[i] = true;
        r[i] = 1.0;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return r;
}

void require_positive(double v, const std::string& what) {
  if (!std::isfinite(v) || !(v > 0.0)) throw Error(ErrorCode::InvalidData, what + " must be finite and positive");
}

}  // namespace

void validate(const InitialData& data) {
  require_positive(data.lambda0, "lambda0");
  if (data.eta() < 2) throw Error(ErrorCode::InvalidData, "at least two branches are required");
  for (std::size_t i = 0; i < data.eta(); ++i) {
    require_positive(data.branches[i].l1, "l1 of branch " + std::to_string(i + 1));
    require_positive(data.branches[i].l2, "l2 of branch " + std::to_string(i + 1));
  }
}

std::string_view to_string(BetaRegime regime) noexcept {
  switch (regime) {
    case BetaRegime::SigmaLow: return "SigmaLow";
    case BetaRegime::Interior: return "Interior";
    case BetaRegime::TauHigh: return "TauHigh";
    case BetaRegime::Numeric: return "Numeric";
  }
  return "Unknown";
}

std::string_view to_string(FlatCase c) noexcept {
  switch (c) {
    case FlatCase::NoCompletion_Hyponormality: return "NoCompletion_Hyponormality";
    case FlatCase::NoTwoAtomic_OneAtomicOnly: return "NoTwoAtomic_OneAtomicOnly";
    case FlatCase::TwoAtomicExists: return "TwoAtomicExists";
    case FlatCase::NoTwoAtomic_MustBeOneAtomic: return "NoTwoAtomic_MustBeOneAtomic";
  }
  return "Unknown";
}

bool BetaResult::empty() const noexcept { return value == kNegInf; }

std::vector<double> rate_coefficients(const InitialData& data) {
  std::vector<double> a;
  a.reserve(data.eta());
  for (const Branch& b : data.branches) a.push_back(sq(b.l1 / b.l2));
  return a;
}

std::vector<double> quadratic_coefficients(const InitialData& data) {
  std::vector<double> c;
  c.reserve(data.eta());
  for (const Branch& b : data.branches) c.push_back(sq(b.l1) / sq(sq(b.l2)));
  return c;
}

BetaResult beta_eta2_closed(const InitialData& data) {
  validate(data);
  if (data.eta() != 2) {
    throw Error(ErrorCode::ShapeMismatch, "closed-form beta needs exactly 2 branches, got " + std::to_string(data.eta()));
  }
  const double a1 = sq(data.branches[0].l1);
  const double a2 = sq(data.branches[0].l2);
  const double b1 = sq(data.branches[1].l1);
  const double b2 = sq(data.branches[1].l2);
  const double sigma = a2 / (a1 + b1);
  const double tau = a2 * (b2 - b1) / (a1 * b2);

  BetaResult out;
  out.sigma = sigma;
  out.tau = tau;
  if (sigma <= 1.0) {
    out.regime = BetaRegime::SigmaLow;
  } else if (sigma < tau) {
    out.regime = BetaRegime::Interior;
  } else {
    out.regime = BetaRegime::TauHigh;
  }

  if (tau <= 1.0) {
    out.value = kNegInf;
    return out;
  }

  // Along the constraint, r2 = (b2/b1)(1 - (a1/a2) r1) with 1 < r1 < tau.
  auto second = [&](double r1) { return b2 / b1 * (1.0 - a1 / a2 * r1); };
  switch (out.regime) {
    case BetaRegime::SigmaLow:
      out.value = (sq(a1 - a2) + a1 * b1) / (sq(a2) * b1);
      out.minimizer.r = {1.0, second(1.0)};
      break;
    case BetaRegime::Interior:
      out.value = 1.0 / (a1 + b1);
      out.minimizer.r = {sigma, second(sigma)};
      out.attained = true;
      break;
    default:
      out.value = (sq(b2 - b1) + a1 * b1) / (a1 * sq(b2));
      out.minimizer.r = {tau, 1.0};
      break;
  }
  return out;
}

BetaResult beta_numeric(const InitialData& data) {
  validate(data);
  const std::vector<double> a = rate_coefficients(data);
  const std::vector<double> c = quadratic_coefficients(data);

  BetaResult out;
  out.regime = BetaRegime::Numeric;
  if (std::accumulate(a.begin(), a.end(), 0.0) >= 1.0) {
    out.value = kNegInf;
    return out;
  }
  out.minimizer.r = water_fill(c, a);
  out.value = quadratic_value(c, out.minimizer.r);
  out.attained = std::all_of(out.minimizer.r.begin(), out.minimizer.r.end(),
                             [](double r) { return r > 1.0 + kBoundaryTol; });
  return out;
}

LeastNormResult weighted_least_norm(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "a and b differ in length");
  if (a.size() < 2) throw Error(ErrorCode::LengthMismatch, "at least two coefficients are required");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0 && b[i] > 0.0 && std::isfinite(a[i]) && std::isfinite(b[i]))) {
      throw Error(ErrorCode::InvalidData, "coefficients must be finite and positive");
    }
  }
  double weight = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) weight += a[i] * a[i] / b[i];

  LeastNormResult out{1.0 / weight, {}, true};
  out.r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.r.push_back(1.0 / (b[i] / a[i] * weight));
    if (!(weight < a[i] / b[i])) out.all_above_one = false;
  }
  return out;
}

TwoAtomicDecision exists_two_atomic(const InitialData& data) {
  validate(data);
  TwoAtomicDecision out;
  out.beta = data.eta() == 2 ? beta_eta2_closed(data) : beta_numeric(data);
  out.threshold = 1.0 / sq(data.lambda0);
  if (out.beta.empty()) return out;
  // Rates within kEqTol of 1 cannot carry a 2-atomic measure.
  const std::vector<double> a = rate_coefficients(data);
  if (std::abs(std::accumulate(a.begin(), a.end(), 0.0) - 1.0) <= kEqTol) {
    out.boundary = true;
    return out;
  }
  out.boundary = close_rel(out.beta.value, out.threshold, kEqTol);
  out.yes = !out.boundary && out.beta.value < out.threshold;
  return out;
}

CompletionDecision exists_completion(const InitialData& data) {
  validate(data);
  const std::vector<double> a = rate_coefficients(data);
  const std::vector<double> c = quadratic_coefficients(data);

  CompletionDecision out;
  out.threshold = 1.0 / sq(data.lambda0);
  out.rate_sum = std::accumulate(a.begin(), a.end(), 0.0);

  if (out.rate_sum > 1.0 + kEqTol) {
    out.reason = "hyponormality violated: sum of l1^2/l2^2 exceeds 1";
    return out;
  }

  if (std::abs(out.rate_sum - 1.0) <= kEqTol) {
    RateProfile flat{std::vector<double>(data.eta(), 1.0), std::nullopt};
    out.objective = std::accumulate(c.begin(), c.end(), 0.0);
    out.boundary = close_rel(out.objective, out.threshold, kEqTol);
    out.yes = out.boundary || out.objective <= out.threshold;
    if (out.yes) {
      out.witness = std::move(flat);
      out.one_atomic.resize(data.eta());
      std::iota(out.one_atomic.begin(), out.one_atomic.end(), std::size_t{0});
    } else {
      out.reason = "flat completion violates the trunk inequality";
    }
    return out;
  }

  const BetaResult beta = beta_numeric(data);
  out.objective = beta.value;
  out.boundary = close_rel(beta.value, out.threshold, kEqTol);
  out.yes = !out.boundary && beta.value < out.threshold;
  if (out.yes) {
    out.witness = beta.minimizer;
    for (std::size_t i = 0; i < data.eta(); ++i) {
      if (beta.minimizer.r[i] == 1.0) out.one_atomic.push_back(i);
    }
  } else if (sq(data.lambda0) > sum_l1_squared(data)) {
    out.reason = "hyponormality violated: lambda0^2 exceeds sum of l1^2";
  } else if (out.boundary) {
    out.reason = "minimum over r >= 1 equals 1/lambda0^2 within tolerance; strict inequality not certified";
  } else {
    out.reason = "minimum over r >= 1 is not below 1/lambda0^2";
  }
  return out;
}

CompletionResult construct_completion(const InitialData& data, const RateProfile& profile) {
  validate(data);
  const std::size_t eta = data.eta();
  if (profile.r.size() != eta) {
    throw Error(ErrorCode::LengthMismatch, "profile has " + std::to_string(profile.r.size()) + " rates for " +
                                               std::to_string(eta) + " branches");
  }
  if (profile.theta && profile.theta->size() != eta) {
    throw Error(ErrorCode::LengthMismatch, "profile theta has the wrong length");
  }
  for (double r : profile.r) {
    if (!std::isfinite(r) || r < 1.0 - kEqTol) throw Error(ErrorCode::InfeasibleProfile, "rates must be >= 1");
  }
  const std::vector<double> a = rate_coefficients(data);
  const std::vector<double> c = quadratic_coefficients(data);
  const double residual = dot(a, profile.r) - 1.0;
  if (std::abs(residual) > kEqTol) {
    throw Error(ErrorCode::InfeasibleProfile, "sum r_i l1_i^2/l2_i^2 - 1 = " + std::to_string(residual));
  }

  const double threshold = 1.0 / sq(data.lambda0);
  std::vector<bool> flat(eta);
  double flat_load = 0.0;
  double rate_load = 0.0;
  bool any_two_atomic = false;
  for (std::size_t i = 0; i < eta; ++i) {
    flat[i] = std::abs(profile.r[i] - 1.0) <= kEqTol;
    if (flat[i]) {
      flat_load += c[i];
    } else {
      any_two_atomic = true;
      rate_load += sq(profile.r[i]) * c[i];
    }
  }

  CompletionResult out;
  std::vector<double> theta(eta, 0.0);
  if (any_two_atomic) {
    if (profile.theta) {
      double load = flat_load;
      for (std::size_t i = 0; i < eta; ++i) {
        if (!flat[i]) load += (*profile.theta)[i] * sq(profile.r[i]) * c[i];
      }
      if (load > threshold * (1.0 + kEqTol)) {
        throw Error(ErrorCode::NoThetaBudget, "supplied theta exceeds the trunk budget 1/lambda0^2");
      }
      theta = *profile.theta;
    } else {
      const double theta_max = (threshold - flat_load) / rate_load;
      if (!(theta_max > 1.0)) {
        throw Error(ErrorCode::NoThetaBudget, "no theta > 1 fits the trunk budget (theta_max = " +
                                                  std::to_string(theta_max) + ")");
      }
      const double tau = std::min(2.0, 0.5 * (1.0 + theta_max));
      if (tau - 1.0 < kEqTol) {
        throw Error(ErrorCode::NoThetaBudget, "trunk budget too thin for a safe theta (theta_max = " +
                                                  std::to_string(theta_max) + ")");
      }
      std::fill(theta.begin(), theta.end(), tau);
      out.tau = tau;
    }
  }

  out.branches.reserve(eta);
  for (std::size_t i = 0; i < eta; ++i) {
    const double x = data.branches[i].l2;
    if (flat[i]) {
      out.branches.push_back({BranchKind::OneAtomic, WeightTriple::from_gaps(x, 0.0, 0.0), AtomicMeasure::dirac(x * x)});
    } else {
      WeightTriple t = triple_from_params(x, {profile.r[i], theta[i]});
      AtomicMeasure xi = stampfli_measure(t);
      out.branches.push_back({BranchKind::TwoAtomic, t, std::move(xi)});
    }
  }
  return out;
}

std::vector<SufficientCondition> sufficient_checks(const InitialData& data) {
  validate(data);
  const std::size_t eta = data.eta();
  const auto n = static_cast<double>(eta);
  const std::vector<double> a = rate_coefficients(data);
  const std::vector<double> c = quadratic_coefficients(data);
  const double lambda0_sq = sq(data.lambda0);
  const double threshold = 1.0 / lambda0_sq;
  const double first_sum = sum_l1_squared(data);
  const double rate_sum = std::accumulate(a.begin(), a.end(), 0.0);
  const double quad_sum = std::accumulate(c.begin(), c.end(), 0.0);

  double inv_l2_sq = 0.0;
  double inv_l1_sq = 0.0;
  double mixed = 0.0;
  for (const Branch& b : data.branches) {
    inv_l2_sq += 1.0 / sq(b.l2);
    inv_l1_sq += 1.0 / sq(b.l1);
    mixed += 1.0 / (sq(b.l1) * sq(sq(b.l2)));
  }

  auto make = [&](std::string name, bool hypothesis, auto rate_of) {
    SufficientCondition cond;
    cond.name = std::move(name);
    cond.hypothesis_holds = hypothesis;
    RateProfile profile;
    profile.r.reserve(eta);
    for (std::size_t i = 0; i < eta; ++i) profile.r.push_back(rate_of(i));
    cond.feasibility_residual = dot(a, profile.r) - 1.0;
    cond.objective = quadratic_value(c, profile.r);
    cond.rates_above_one = std::all_of(profile.r.begin(), profile.r.end(), [](double r) { return r > 1.0; });
    cond.strict_bound_holds = cond.objective < threshold;
    if (hypothesis) cond.witness = std::move(profile);
    return cond;
  };

  std::vector<SufficientCondition> out;

  bool dominant = lambda0_sq < first_sum;
  for (const Branch& b : data.branches) dominant = dominant && first_sum < sq(b.l2);
  out.push_back(make("dominant_second_generation", dominant,
                     [&](std::size_t i) { return sq(data.branches[i].l2) / first_sum; }));

  const bool uniform = rate_sum < 1.0 && lambda0_sq * quad_sum < sq(rate_sum);
  out.push_back(make("uniform_rate", uniform, [&](std::size_t) { return 1.0 / rate_sum; }));

  bool share = lambda0_sq * inv_l1_sq < n * n;
  for (const Branch& b : data.branches) share = share && n * sq(b.l1) < sq(b.l2);
  out.push_back(make("equal_share", share,
                     [&](std::size_t i) { return sq(data.branches[i].l2) / (n * sq(data.branches[i].l1)); }));

  bool inverse = lambda0_sq * mixed < sq(inv_l2_sq);
  for (const Branch& b : data.branches) inverse = inverse && sq(b.l1) * inv_l2_sq < 1.0;
  out.push_back(make("inverse_first_generation", inverse,
                     [&](std::size_t i) { return 1.0 / (sq(data.branches[i].l1) * inv_l2_sq); }));
  return out;
}

std::vector<InequalityCheck> necessary_checks(const InitialData& data) {
  validate(data);
  const std::vector<double> a = rate_coefficients(data);
  const std::vector<double> c = quadratic_coefficients(data);
  const double first_sum = sum_l1_squared(data);
  double max_l2_sq = 0.0;
  for (const Branch& b : data.branches) max_l2_sq = std::max(max_l2_sq, sq(b.l2));

  auto check = [](std::string name, double lhs, double rhs) {
    return InequalityCheck{std::move(name), lhs, rhs, lhs < rhs};
  };
  return {
      check("lambda0_below_first_generation", sq(data.lambda0), first_sum),
      check("trunk_budget", std::accumulate(c.begin(), c.end(), 0.0), 1.0 / sq(data.lambda0)),
      check("rate_sum_below_one", std::accumulate(a.begin(), a.end(), 0.0), 1.0),
      check("first_generation_below_max_second", first_sum, max_l2_sq),
  };
}

FlatCase classify_flat(const InitialData& data) {
  validate(data);
  const double level = sq(data.branches.front().l2);
  for (const Branch& b : data.branches) {
    if (!close_rel(sq(b.l2), level, kEqTol)) {
      throw Error(ErrorCode::NotFlat, "second-generation weights are not all equal");
    }
  }
  const double first_sum = sum_l1_squared(data);
  const double lambda0_sq = sq(data.lambda0);

  if (lambda0_sq > first_sum && !close_rel(lambda0_sq, first_sum, kEqTol)) {
    return FlatCase::NoCompletion_Hyponormality;
  }
  if (close_rel(level, first_sum, kEqTol)) return FlatCase::NoTwoAtomic_OneAtomicOnly;
  if (level < first_sum) return FlatCase::NoCompletion_Hyponormality;
  if (close_rel(lambda0_sq, first_sum, kEqTol)) return FlatCase::NoTwoAtomic_MustBeOneAtomic;
  return FlatCase::TwoAtomicExists;
}

OneGenerationResult one_generation_check(double lambda0, std::span<const double> l1) {
  require_positive(lambda0, "lambda0");
  if (l1.size() < 2) throw Error(ErrorCode::InvalidData, "at least two branches are required");
  double first_sum = 0.0;
  for (double w : l1) {
    require_positive(w, "l1");
    first_sum += w * w;
  }
  OneGenerationResult out;
  out.exists = sq(lambda0) < first_sum;
  if (out.exists) out.witness_l2.assign(l1.size(), std::sqrt(2.0 * first_sum));
  return out;
}

}  // namespace subnormal
