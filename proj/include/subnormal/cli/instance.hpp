#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "subnormal/measures.hpp"
#include "subnormal/solver.hpp"
#include "subnormal/verifier.hpp"

namespace subnormal::cli {

/// Rejected input. `where` is a field path ("branches[1].l2") or "line L, column C".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string where, const std::string& message);

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct InstanceOptions {
  std::optional<double> tol;
  std::optional<int> depth;
  std::optional<int> grid_points;
};

struct Instance {
  ProblemShape shape;
  GeneralData data;
  std::optional<std::vector<AtomicMeasure>> measures;
  std::optional<RateProfile> profile;
  InstanceOptions options;
  std::string sha256;  // of the raw instance text

  /// Two-generation view; SchemaError unless kappa = 1 and p = 2.
  InitialData initial(std::string_view command) const;
};

/// Parses and validates an instance document. Branch entries carry l1, l2
/// (when p >= 2) and "tail" (lambda_{i,3..p}, when p >= 3); "trunk" lists
/// lambda_{-1}, ..., lambda_{-kappa+1} when kappa >= 2.
Instance parse_instance(std::string_view text);

std::string sha256_hex(std::string_view bytes);

}  // namespace subnormal::cli
