#include "subnormal/cli/instance.hpp"

#include <array>
#include <cmath>

#include <openssl/evp.h>

#include "subnormal/errors.hpp"

namespace subnormal::cli {

namespace {

using nlohmann::json;

std::string at(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

std::string at(const std::string& parent, std::size_t index) {
  return parent + "[" + std::to_string(index) + "]";
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view k : allowed) known = known || item.key() == k;
    if (!known) throw SchemaError(at(where, item.key()), "unknown field");
  }
}

const json& member(const json& obj, const std::string& where, std::string_view key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(at(where, key), "missing required field");
  return *it;
}

const json& object(const json& v, const std::string& where) {
  if (!v.is_object()) throw SchemaError(where.empty() ? "document" : where, "expected an object");
  return v;
}

const json& array(const json& v, const std::string& where, std::optional<std::size_t> length = std::nullopt) {
  if (!v.is_array()) throw SchemaError(where, "expected an array");
  if (length && v.size() != *length) {
    throw SchemaError(where, "expected " + std::to_string(*length) + " entries, got " + std::to_string(v.size()));
  }
  return v;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where, "expected a number");
  return v.get<double>();
}

double positive(const json& v, const std::string& where) {
  const double x = number(v, where);
  if (!std::isfinite(x) || !(x > 0.0)) throw SchemaError(where, "must be a finite positive number");
  return x;
}

int integer(const json& v, const std::string& where, int min) {
  if (!v.is_number_integer()) throw SchemaError(where, "expected an integer");
  const auto x = v.get<long long>();
  if (x < min || x > 1'000'000) throw SchemaError(where, "must be an integer in [" + std::to_string(min) + ", 1000000]");
  return static_cast<int>(x);
}

std::vector<double> positive_list(const json& v, const std::string& where, std::optional<std::size_t> length) {
  array(v, where, length);
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(positive(v[i], at(where, i)));
  return out;
}

ProblemShape parse_shape(const json& doc) {
  const json& s = object(member(doc, "", "shape"), "shape");
  only_keys(s, "shape", {"eta", "kappa", "p"});
  const json& eta = member(s, "shape", "eta");
  if (eta.is_string()) {
    throw SchemaError("shape.eta", "infinite branching is not supported; eta must be a finite integer >= 2");
  }
  return {integer(eta, "shape.eta", 2), integer(member(s, "shape", "kappa"), "shape.kappa", 1),
          integer(member(s, "shape", "p"), "shape.p", 1)};
}

GeneralData parse_data(const json& doc, const ProblemShape& shape) {
  GeneralData data;
  data.trunk.push_back(positive(member(doc, "", "lambda0"), "lambda0"));
  const auto trunk_rest = static_cast<std::size_t>(shape.kappa - 1);
  if (const auto it = doc.find("trunk"); it != doc.end()) {
    const std::vector<double> rest = positive_list(*it, "trunk", trunk_rest);
    data.trunk.insert(data.trunk.end(), rest.begin(), rest.end());
  } else if (trunk_rest > 0) {
    throw SchemaError("trunk", "missing required field (kappa >= 2)");
  }

  const json& branches = array(member(doc, "", "branches"), "branches", static_cast<std::size_t>(shape.eta));
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string where = at("branches", i);
    const json& b = object(branches[i], where);
    only_keys(b, where, {"l1", "l2", "tail"});
    std::vector<double> weights{positive(member(b, where, "l1"), at(where, "l1"))};
    if (shape.p >= 2) {
      weights.push_back(positive(member(b, where, "l2"), at(where, "l2")));
    } else if (b.contains("l2")) {
      throw SchemaError(at(where, "l2"), "not allowed when p = 1");
    }
    const auto tail_len = static_cast<std::size_t>(std::max(shape.p - 2, 0));
    if (const auto it = b.find("tail"); it != b.end()) {
      const std::vector<double> tail = positive_list(*it, at(where, "tail"), tail_len);
      weights.insert(weights.end(), tail.begin(), tail.end());
    } else if (tail_len > 0) {
      throw SchemaError(at(where, "tail"), "missing required field (p >= 3)");
    }
    data.branches.push_back(std::move(weights));
  }
  return data;
}

std::vector<AtomicMeasure> parse_measures(const json& v, std::size_t eta) {
  array(v, "measures", eta);
  std::vector<AtomicMeasure> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string where = at("measures", i);
    const json& m = object(v[i], where);
    only_keys(m, where, {"atoms", "masses"});
    const json& atoms = array(member(m, where, "atoms"), at(where, "atoms"));
    const json& masses = array(member(m, where, "masses"), at(where, "masses"), atoms.size());
    std::vector<double> s;
    std::vector<double> w;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      s.push_back(number(atoms[k], at(at(where, "atoms"), k)));
      w.push_back(number(masses[k], at(at(where, "masses"), k)));
    }
    try {
      out.emplace_back(std::move(s), std::move(w));
    } catch (const Error& e) {
      throw SchemaError(where, e.what());
    }
  }
  return out;
}

RateProfile parse_profile(const json& v, std::size_t eta) {
  object(v, "profile");
  only_keys(v, "profile", {"r", "theta"});
  RateProfile profile;
  profile.r = positive_list(member(v, "profile", "r"), "profile.r", eta);
  if (const auto it = v.find("theta"); it != v.end()) profile.theta = positive_list(*it, "profile.theta", eta);
  return profile;
}

InstanceOptions parse_options(const json& v) {
  object(v, "options");
  only_keys(v, "options", {"tol", "depth", "grid_points"});
  InstanceOptions o;
  if (const auto it = v.find("tol"); it != v.end()) o.tol = positive(*it, "options.tol");
  if (const auto it = v.find("depth"); it != v.end()) o.depth = integer(*it, "options.depth", 1);
  if (const auto it = v.find("grid_points"); it != v.end()) o.grid_points = integer(*it, "options.grid_points", 100);
  return o;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

SchemaError::SchemaError(std::string where, const std::string& message)
    : std::runtime_error(where + ": " + message), where_(std::move(where)) {}

InitialData Instance::initial(std::string_view command) const {
  if (shape.kappa != 1 || shape.p != 2) {
    throw SchemaError("shape", std::string(command) + " requires kappa = 1 and p = 2");
  }
  InitialData out{data.trunk.front(), {}};
  for (const auto& b : data.branches) out.branches.push_back({b[0], b[1]});
  return out;
}

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(line_column(text, e.byte), "malformed JSON");
  }
  object(doc, "");
  only_keys(doc, "", {"shape", "lambda0", "trunk", "branches", "measures", "profile", "options"});

  Instance inst;
  inst.shape = parse_shape(doc);
  inst.data = parse_data(doc, inst.shape);
  const auto eta = static_cast<std::size_t>(inst.shape.eta);
  if (const auto it = doc.find("measures"); it != doc.end()) inst.measures = parse_measures(*it, eta);
  if (const auto it = doc.find("profile"); it != doc.end()) inst.profile = parse_profile(*it, eta);
  if (const auto it = doc.find("options"); it != doc.end()) inst.options = parse_options(*it);
  inst.sha256 = sha256_hex(text);
  return inst;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace subnormal::cli
