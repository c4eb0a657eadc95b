#include "subnormal/cli/commands.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "subnormal/errors.hpp"
#include "subnormal/tolerances.hpp"

namespace subnormal::cli {

namespace {

Json header(std::string_view command, const std::string& sha) {
  return {{"tool", "subnormal"}, {"version", kToolVersion}, {"command", command}, {"instance_sha256", sha}};
}

Json error_report(std::string_view command, const std::string& sha, std::string_view code, const std::string& where,
                  const std::string& message) {
  Json out = header(command, sha);
  out["status"] = "error";
  out["error"] = {{"code", code}, {"field", where}, {"message", message}};
  return out;
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidData:
    case ErrorCode::InvalidMeasure:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::LengthMismatch:
    case ErrorCode::NotFlat:
      return true;
    default:
      return false;
  }
}

// Runs body, turning exceptions into error reports. Domain errors count as
// input errors when `inputs_are_domain` is set (raw stampfli arguments).
CommandResult guarded(std::string_view command, const std::string& sha, const std::function<CommandResult()>& body,
                      bool inputs_are_domain = false) {
  try {
    return body();
  } catch (const SchemaError& e) {
    return {kExitUsage, error_report(command, sha, "SchemaError", e.where(), e.what())};
  } catch (const Error& e) {
    const bool input = is_input_error(e.code()) ||
                       (inputs_are_domain && (e.code() == ErrorCode::InvalidTriple || e.code() == ErrorCode::OutOfDomain));
    return {input ? kExitUsage : kExitNumerical, error_report(command, sha, to_string(e.code()), "", e.what())};
  } catch (const std::exception& e) {
    return {kExitNumerical, error_report(command, sha, "InternalError", "", e.what())};
  }
}

double verify_tol(const Instance& inst, const GlobalOptions& global) {
  return global.tol.value_or(inst.options.tol.value_or(kVerifyTol));
}

std::size_t verify_depth(const Instance& inst) {
  return static_cast<std::size_t>(inst.options.depth.value_or(static_cast<int>(kVerifyDepth)));
}

Json indices(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (std::size_t i : v) out.push_back(i);
  return out;
}

std::string_view kind_name(TripleKind kind) {
  switch (kind) {
    case TripleKind::Generic: return "Generic";
    case TripleKind::Flat: return "Flat";
    case TripleKind::ZeroAtom: return "ZeroAtom";
  }
  return "Unknown";
}

}  // namespace

int worst_exit(int a, int b) noexcept {
  auto rank = [](int code) {
    switch (code) {
      case kExitUsage: return 3;
      case kExitNumerical: return 2;
      case kExitNo: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

CommandResult cmd_solve(const Instance& inst, const GlobalOptions& global) {
  return guarded("solve", inst.sha256, [&]() -> CommandResult {
    const InitialData data = inst.initial("solve");
    const double tol = verify_tol(inst, global);
    const std::size_t depth = verify_depth(inst);

    const CompletionDecision decision = exists_completion(data);
    const TwoAtomicDecision two = exists_two_atomic(data);

    Json out = header("solve", inst.sha256);
    out["decision"] = decision.yes ? "YES" : "NO";
    out["boundary"] = decision.boundary;
    out["reason"] = decision.yes ? Json(nullptr) : Json(decision.reason);
    out["rate_sum"] = number(decision.rate_sum);
    out["objective"] = number(decision.objective);
    out["threshold"] = number(decision.threshold);
    out["two_atomic"] = {{"decision", two.yes ? "YES" : "NO"},
                         {"boundary", two.boundary},
                         {"threshold", number(two.threshold)},
                         {"beta", to_json(two.beta)}};

    Json necessary = Json::array();
    for (const InequalityCheck& c : necessary_checks(data)) necessary.push_back(to_json(c));
    out["necessary"] = std::move(necessary);
    Json sufficient = Json::array();
    for (const SufficientCondition& c : sufficient_checks(data)) sufficient.push_back(to_json(c));
    out["sufficient"] = std::move(sufficient);

    if (!decision.yes) return {kExitNo, std::move(out)};

    const RateProfile profile = inst.profile.value_or(*decision.witness);
    const CompletionResult completion = construct_completion(data, profile);
    const VerificationReport report = verify_completion(data, completion, depth, tol);

    Json built = {{"profile_source", inst.profile ? "instance" : "solver"},
                  {"witness", to_json(profile)},
                  {"one_atomic", indices(decision.one_atomic)}};
    built.update(to_json(completion));
    out["completion"] = std::move(built);
    out["verification"] = to_json(report);
    return {report.passed() ? kExitSuccess : kExitNumerical, std::move(out)};
  });
}

CommandResult cmd_beta(const Instance& inst, const GlobalOptions&) {
  return guarded("beta", inst.sha256, [&]() -> CommandResult {
    const InitialData data = inst.initial("beta");
    const BetaResult beta = data.eta() == 2 ? beta_eta2_closed(data) : beta_numeric(data);
    Json out = header("beta", inst.sha256);
    out.update(to_json(beta));
    out["threshold"] = number(1.0 / (data.lambda0 * data.lambda0));
    if (inst.options.grid_points && data.eta() <= 3) {
      const auto grid = brute_force_beta(data, static_cast<std::size_t>(*inst.options.grid_points));
      out["brute_force"] = grid ? number(*grid) : Json(nullptr);
    }
    return {kExitSuccess, std::move(out)};
  });
}

CommandResult cmd_verify(const Instance& inst, const GlobalOptions& global) {
  return guarded("verify", inst.sha256, [&]() -> CommandResult {
    if (!inst.measures) throw SchemaError("measures", "required by verify");
    const VerificationReport report = verify_measures(inst.shape, inst.data, *inst.measures, verify_tol(inst, global));
    Json out = header("verify", inst.sha256);
    out.update(to_json(report));
    return {report.passed() ? kExitSuccess : kExitNo, std::move(out)};
  });
}

CommandResult cmd_classify_flat(const Instance& inst, const GlobalOptions&) {
  return guarded("classify-flat", inst.sha256, [&]() -> CommandResult {
    const InitialData data = inst.initial("classify-flat");
    const FlatCase flat = classify_flat(data);
    Json out = header("classify-flat", inst.sha256);
    out["case"] = static_cast<int>(flat) + 1;
    out["label"] = std::string(to_string(flat));
    out["two_atomic_exists"] = flat == FlatCase::TwoAtomicExists;
    out["completion_exists"] = flat == FlatCase::TwoAtomicExists || flat == FlatCase::NoTwoAtomic_OneAtomicOnly;
    return {kExitSuccess, std::move(out)};
  });
}

CommandResult cmd_one_gen(const Instance& inst, const GlobalOptions&) {
  return guarded("one-gen", inst.sha256, [&]() -> CommandResult {
    if (inst.shape.kappa != 1) throw SchemaError("shape.kappa", "one-gen requires kappa = 1");
    std::vector<double> l1;
    for (const auto& b : inst.data.branches) l1.push_back(b.front());
    const OneGenerationResult res = one_generation_check(inst.data.trunk.front(), l1);
    Json out = header("one-gen", inst.sha256);
    out["decision"] = res.exists ? "YES" : "NO";
    out["witness_l2"] = res.exists ? numbers(res.witness_l2) : Json(nullptr);
    return {res.exists ? kExitSuccess : kExitNo, std::move(out)};
  });
}

CommandResult cmd_stampfli(const StampfliRequest& request) {
  Json echo = Json::object();
  if (request.triple) echo["triple"] = {(*request.triple)[0], (*request.triple)[1], (*request.triple)[2]};
  if (request.params) echo["params"] = {(*request.params)[0], (*request.params)[1], (*request.params)[2]};
  echo["n"] = request.n;
  const std::string sha = sha256_hex(echo.dump());

  return guarded("stampfli", sha, [&]() -> CommandResult {
    if (request.triple.has_value() == request.params.has_value()) {
      throw SchemaError("input", "give exactly one of --triple x y z or --params x r theta");
    }
    std::optional<RateTheta> given;
    const WeightTriple t = [&] {
      if (request.triple) return WeightTriple((*request.triple)[0], (*request.triple)[1], (*request.triple)[2]);
      given = RateTheta{(*request.params)[1], (*request.params)[2]};
      return triple_from_params((*request.params)[0], *given);
    }();

    const AtomicMeasure xi = stampfli_measure(t);
    Json out = header("stampfli", sha);
    out["input"] = request.triple ? "triple" : "params";
    out["triple"] = {{"x", number(t.x())}, {"y", number(t.y())}, {"z", number(t.z())}};
    out["kind"] = kind_name(t.kind());
    out["measure"] = to_json(xi);
    if (t.is_generic()) {
      const StampfliParams sp = stampfli_params(t);
      const RateTheta rt = params_from_triple(t);
      out["psi0"] = number(sp.psi0);
      out["psi1"] = number(sp.psi1);
      out["rho"] = number(sp.rho);
      out["params"] = {{"r", number(rt.r)}, {"theta", number(rt.theta)}};
      out["neg_moment1"] = number(neg_moment1(t));
      out["neg_moment2"] = number(neg_moment2(t));
      out["support_sup_closed"] = number(support_sup_closed(t.x(), given.value_or(rt)));
    } else if (t.kind() == TripleKind::Flat) {
      const double s = t.x() * t.x();
      out["neg_moment1"] = number(1.0 / s);
      out["neg_moment2"] = number(1.0 / (s * s));
    } else {
      out["neg_moment1"] = "inf";
      out["neg_moment2"] = "inf";
    }
    out["support_sup"] = number(support_sup(xi));
    std::vector<double> weights = weight_sequence(t, std::max<std::size_t>(request.n, 3));
    weights.resize(request.n);
    out["weights"] = numbers(weights);
    return {kExitSuccess, std::move(out)};
  }, true);
}

bool is_instance_command(std::string_view command) noexcept {
  return command == "solve" || command == "beta" || command == "verify" || command == "classify-flat" ||
         command == "one-gen";
}

CommandResult run_instance_command(std::string_view command, std::string_view text, const GlobalOptions& global) {
  const std::string sha = sha256_hex(text);
  Instance inst;
  try {
    inst = parse_instance(text);
  } catch (const SchemaError& e) {
    return {kExitUsage, error_report(command, sha, "SchemaError", e.where(), e.what())};
  }
  if (command == "solve") return cmd_solve(inst, global);
  if (command == "beta") return cmd_beta(inst, global);
  if (command == "verify") return cmd_verify(inst, global);
  if (command == "classify-flat") return cmd_classify_flat(inst, global);
  if (command == "one-gen") return cmd_one_gen(inst, global);
  return {kExitUsage, error_report(command, sha, "UsageError", "", "unknown command")};
}

}  // namespace subnormal::cli
