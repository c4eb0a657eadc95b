#pragma once

#include <json.hpp>

#include "subnormal/solver.hpp"
#include "subnormal/stampfli.hpp"
#include "subnormal/verifier.hpp"

namespace subnormal::cli {

using Json = nlohmann::ordered_json;

/// Finite values as numbers, others as "inf", "-inf" or "nan".
Json number(double v);
Json numbers(std::span<const double> v);

Json to_json(const AtomicMeasure& mu);
Json to_json(const RateProfile& profile);
Json to_json(const BetaResult& beta);
Json to_json(const VerificationReport& report);
Json to_json(const CompletionResult& result);
Json to_json(const SufficientCondition& cond);
Json to_json(const InequalityCheck& check);

}  // namespace subnormal::cli
