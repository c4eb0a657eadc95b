#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subnormal/measures.hpp"
#include "subnormal/solver.hpp"
#include "subnormal/tolerances.hpp"

namespace subnormal {

/// Initial data on T_{eta,kappa,p}.
struct GeneralData {
  std::vector<double> trunk;                  // lambda_0, lambda_{-1}, ..., lambda_{-kappa+1}
  std::vector<std::vector<double>> branches;  // lambda_{i,1}, ..., lambda_{i,p}
};

GeneralData to_general(const InitialData& data);

enum class ConditionStatus { Pass, BoundaryPass, Fail };

std::string_view to_string(ConditionStatus status) noexcept;

struct ConditionResult {
  std::string name;
  double residual;  // relative; inequalities report signed slack
  double tolerance;
  ConditionStatus status;
  bool required = true;  // informational entries never fail the report

  bool pass() const noexcept { return status != ConditionStatus::Fail; }
};

struct VerificationReport {
  std::vector<ConditionResult> conditions;
  double xi = 0.0;  // largest atom over all branch measures

  bool passed() const noexcept;
  const ConditionResult* find(std::string_view name) const noexcept;
};

/// Checks the moment conditions for a family of atomic branch measures:
/// first moments against weight products, the negative-moment sum, the trunk
/// equalities and the trunk inequality, finiteness of the support and the
/// atom-count bound floor((kappa + p + 2)/2) (informational).
/// Error{ShapeMismatch} when the data or measure count disagrees with shape.
VerificationReport verify_measures(const ProblemShape& shape, const GeneralData& data,
                                   std::span<const AtomicMeasure> measures, double tol = kVerifyTol);

/// verify_measures at (eta, 1, 2) plus per-branch structure: at most 2 atoms,
/// none at zero, branch kind consistent with the triple, tail weights up to
/// depth nondecreasing and bounded by sqrt(sup supp), and measure moments
/// equal to the products of squared weights for n = 1..depth.
VerificationReport verify_completion(const InitialData& data, const CompletionResult& result,
                                     std::size_t depth = kVerifyDepth, double tol = kVerifyTol);

/// Grid minimum of sum c_i r_i^2 over {r_i >= 1 + 1e-9, sum a_i r_i = 1}.
/// eta = 2 uses grid_points samples of r_1; eta = 3 a square grid with about
/// grid_points cells. nullopt when the slice is empty. Error{ShapeMismatch}
/// for eta > 3.
std::optional<double> brute_force_beta(const InitialData& data, std::size_t grid_points);

}  // namespace subnormal
