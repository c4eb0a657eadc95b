#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subnormal/measures.hpp"
#include "subnormal/stampfli.hpp"

namespace subnormal {

/// Branch count, trunk length and number of data generations of T_{eta,kappa,p}.
struct ProblemShape {
  int eta = 2;
  int kappa = 1;
  int p = 2;
};

/// First- and second-generation weights (lambda_{i,1}, lambda_{i,2}) of one branch.
struct Branch {
  double l1;
  double l2;
};

/// Two-generation data on T_{eta,1}: lambda_0 and one Branch per branch.
struct InitialData {
  double lambda0;
  std::vector<Branch> branches;

  std::size_t eta() const noexcept { return branches.size(); }
};

/// Throws Error{InvalidData} unless eta >= 2 and every weight is finite and positive.
void validate(const InitialData& data);

/// Rate profile {r_i}, optionally with per-branch theta_i.
struct RateProfile {
  std::vector<double> r;
  std::optional<std::vector<double>> theta;
};

enum class BetaRegime { SigmaLow, Interior, TauHigh, Numeric };

std::string_view to_string(BetaRegime regime) noexcept;

/// Infimum of sum r_i^2 l1_i^2 / l2_i^4 over r_i > 1 with sum r_i l1_i^2 / l2_i^2 = 1.
struct BetaResult {
  double value;           // -inf when the open constraint set is empty
  bool attained = false;  // minimum reached inside the open set
  RateProfile minimizer;  // minimizer over the closure {r >= 1}
  BetaRegime regime = BetaRegime::Numeric;
  std::optional<double> sigma;
  std::optional<double> tau;

  bool empty() const noexcept;
};

/// a_i = l1_i^2 / l2_i^2 (coefficients of the first negative moment equation).
std::vector<double> rate_coefficients(const InitialData& data);
/// c_i = l1_i^2 / l2_i^4 (coefficients of the quadratic form).
std::vector<double> quadratic_coefficients(const InitialData& data);

/// Piecewise closed form of beta(2) with sigma = a2/(a1 + b1),
/// tau = a2 (b2 - b1)/(a1 b2), a_j = lambda_{1,j}^2, b_j = lambda_{2,j}^2.
/// Error{ShapeMismatch} unless eta = 2.
BetaResult beta_eta2_closed(const InitialData& data);

/// beta(eta) by exact active-set water-filling on the closed set {r >= 1}.
/// Coordinates whose interior value is within kBoundaryTol of 1 are clamped to 1.
BetaResult beta_numeric(const InitialData& data);

struct LeastNormResult {
  double value;
  std::vector<double> r;
  bool all_above_one;  // sum_j a_j^2/b_j < a_i/b_i for every i
};

/// min { sum b_i r_i^2 : r_i > 0, sum a_i r_i = 1 } = 1 / sum a_i^2/b_i.
LeastNormResult weighted_least_norm(std::span<const double> a, std::span<const double> b);

struct TwoAtomicDecision {
  bool yes = false;
  bool boundary = false;  // beta within kEqTol (relative) of 1/lambda0^2
  BetaResult beta;
  double threshold = 0.0;  // 1 / lambda0^2
};

/// Completion with every branch measure 2-atomic: -inf < beta(eta) < 1/lambda0^2.
/// A rate sum within kEqTol of 1 answers NO with the boundary flag set.
TwoAtomicDecision exists_two_atomic(const InitialData& data);

struct CompletionDecision {
  bool yes = false;
  bool boundary = false;
  std::optional<RateProfile> witness;
  std::vector<std::size_t> one_atomic;  // branches with r_i = 1 in the witness
  double rate_sum = 0.0;                // sum_i l1_i^2 / l2_i^2
  double objective = 0.0;               // sum r_i^2 c_i at the witness, when any
  double threshold = 0.0;
  std::string reason;
};

/// Any subnormal completion on T_{eta,1} (1- or 2-atomic branch measures).
CompletionDecision exists_completion(const InitialData& data);

enum class BranchKind { OneAtomic, TwoAtomic };

struct CompletionBranch {
  BranchKind kind;
  WeightTriple weights;  // (lambda_{i,2}, lambda^_{i,3}, lambda^_{i,4})
  AtomicMeasure measure;

  double lambda3_hat() const noexcept { return weights.y(); }
  double lambda4_hat() const noexcept { return weights.z(); }
};

struct CompletionResult {
  std::vector<CompletionBranch> branches;
  std::optional<double> tau;  // common theta of the 2-atomic branches
};

/// Branches with |r_i - 1| <= kEqTol get delta(lambda_{i,2}^2); the others get
/// the Stampfli measure of triple_from_params(lambda_{i,2}, (r_i, tau)) with
/// tau = min(2, (1 + theta_max)/2), unless the profile carries its own theta.
CompletionResult construct_completion(const InitialData& data, const RateProfile& profile);

struct SufficientCondition {
  std::string name;
  bool hypothesis_holds = false;
  std::optional<RateProfile> witness;
  double feasibility_residual = 0.0;  // sum r_i a_i - 1
  double objective = 0.0;             // sum r_i^2 c_i
  bool rates_above_one = false;
  bool strict_bound_holds = false;    // objective < 1/lambda0^2
};

/// The four closed-form witness families; a condition only counts when its
/// hypothesis holds. Returns all four entries in a fixed order.
std::vector<SufficientCondition> sufficient_checks(const InitialData& data);

struct InequalityCheck {
  std::string name;
  double lhs;
  double rhs;
  bool holds;  // lhs < rhs
};

/// The four strict inequalities every 2-atomic completion forces.
std::vector<InequalityCheck> necessary_checks(const InitialData& data);

enum class FlatCase {
  NoCompletion_Hyponormality,
  NoTwoAtomic_OneAtomicOnly,
  TwoAtomicExists,
  NoTwoAtomic_MustBeOneAtomic,
};

std::string_view to_string(FlatCase c) noexcept;

/// Classification of data whose second-generation weights all coincide.
/// Error{NotFlat} otherwise.
FlatCase classify_flat(const InitialData& data);

struct OneGenerationResult {
  bool exists = false;
  std::vector<double> witness_l2;  // lambda_{i,2} with lambda_{i,2}^2 = 2 sum_j lambda_{j,1}^2
};

/// One-generation data: 2-atomic completion iff lambda0^2 < sum lambda_{i,1}^2.
OneGenerationResult one_generation_check(double lambda0, std::span<const double> l1);

}  // namespace subnormal
