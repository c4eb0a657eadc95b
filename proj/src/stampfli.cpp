#include "subnormal/stampfli.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subnormal/errors.hpp"
#include "subnormal/tolerances.hpp"

namespace subnormal {

namespace {

void require_generic(const WeightTriple& t, const char* what) {
  if (!t.is_generic()) {
    throw Error(ErrorCode::InvalidTriple, std::string(what) + " needs a strictly increasing triple");
  }
}

void require_rate(double value, const char* name) {
  if (!std::isfinite(value) || !(value - 1.0 >= kEqTol)) {
    throw Error(ErrorCode::OutOfDomain,
                std::string(name) + " = " + std::to_string(value) + " is not safely above 1");
  }
}

// Larger root t1 of t^2 - b t - p = 0 (p > 0), where b = psi1/x^2 - 2. The
// normalized atoms are 1 + t1 and 1 - p/t1.
double upper_root_shift(double p, double b) {
  const double root = std::sqrt(b * b + 4.0 * p);
  return b >= 0.0 ? 0.5 * (b + root) : 2.0 * p / (root - b);
}

}  // namespace

WeightTriple::WeightTriple(double x, double y, double z) {
  if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(z)) || !(x > 0.0)) {
    throw Error(ErrorCode::InvalidTriple, "weights must be finite and positive");
  }
  if (!(x <= y && y <= z)) throw Error(ErrorCode::InvalidTriple, "weights must satisfy x <= y <= z");
  if (x == y && y < z) throw Error(ErrorCode::InvalidTriple, "x = y < z admits no subnormal completion");
  x_ = x;
  u_gap_ = (y - x) * (y + x) / (x * x);
  v_gap_ = (z - y) * (z + y) / (x * x);
}

WeightTriple WeightTriple::from_gaps(double x, double u_gap, double v_gap) {
  if (!(std::isfinite(x) && x > 0.0)) throw Error(ErrorCode::InvalidTriple, "x must be finite and positive");
  if (!(std::isfinite(u_gap) && std::isfinite(v_gap)) || u_gap < 0.0 || v_gap < 0.0) {
    throw Error(ErrorCode::InvalidTriple, "gaps must be finite and nonnegative");
  }
  if (u_gap == 0.0 && v_gap > 0.0) {
    throw Error(ErrorCode::InvalidTriple, "x = y < z admits no subnormal completion");
  }
  WeightTriple t;
  t.x_ = x;
  t.u_gap_ = u_gap;
  t.v_gap_ = v_gap;
  return t;
}

double WeightTriple::y() const noexcept { return x_ * std::sqrt(u()); }
double WeightTriple::z() const noexcept { return x_ * std::sqrt(v()); }

TripleKind WeightTriple::kind() const noexcept {
  if (u_gap_ == 0.0) return TripleKind::Flat;
  if (v_gap_ == 0.0) return TripleKind::ZeroAtom;
  return TripleKind::Generic;
}

StampfliParams stampfli_params(const WeightTriple& t) {
  require_generic(t, "stampfli_params");
  const double p = t.u_gap();
  const double d = t.v_gap();
  const double x2 = t.x() * t.x();

  const double psi1_n = (1.0 + p) * (p + d) / p;
  const double psi0_n = -(1.0 + p) * d / p;

  const double t1 = upper_root_shift(p, (d - p + p * p + p * d) / p);
  const double s1_n = 1.0 + t1;
  const double s0_n = -psi0_n / s1_n;  // product of the roots is -psi0
  const double rho = t1 * t1 / (t1 * t1 + p);
  const double rho1 = p / (t1 * t1 + p);

  return {psi0_n * x2 * x2, psi1_n * x2, s0_n * x2, s1_n * x2, rho, rho1};
}

AtomicMeasure stampfli_measure(const WeightTriple& t) {
  const double x2 = t.x() * t.x();
  switch (t.kind()) {
    case TripleKind::Flat:
      return AtomicMeasure::dirac(x2);
    case TripleKind::ZeroAtom: {
      const double p = t.u_gap();
      return AtomicMeasure({0.0, x2 * (1.0 + p)}, {p / (1.0 + p), 1.0 / (1.0 + p)});
    }
    case TripleKind::Generic:
      break;
  }
  const StampfliParams sp = stampfli_params(t);
  return AtomicMeasure({sp.s0, sp.s1}, {sp.rho, sp.rho1});
}

// With u = 1 + p and v = u + d the numerator 1 - 2u + uv of f becomes
// d(1 + p) + p^2 and the numerator of g becomes ((d(1 + p) + p^2)^2 + p^3)/(1 + p).
double neg_moment1(const WeightTriple& t) {
  require_generic(t, "neg_moment1");
  const double p = t.u_gap();
  const double d = t.v_gap();
  const double x2 = t.x() * t.x();
  return (1.0 + p * p / ((1.0 + p) * d)) / x2;
}

double neg_moment2(const WeightTriple& t) {
  require_generic(t, "neg_moment2");
  const double p = t.u_gap();
  const double d = t.v_gap();
  const double x2 = t.x() * t.x();
  const double lead = d * (1.0 + p) + p * p;
  const double scale = (1.0 + p) * d;
  return (lead * lead + p * p * p) / (scale * scale) / (x2 * x2);
}

double f_map(NormalizedPair pair) {
  if (!(std::isfinite(pair.u) && std::isfinite(pair.v)) || !(pair.v > pair.u && pair.u > 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "f_map needs v > u > 1");
  }
  const double u = pair.u;
  const double v = pair.v;
  return (1.0 - 2.0 * u + u * v) / (u * (v - u));
}

double phi_u(double u, double r) {
  if (!(std::isfinite(u) && u > 1.0)) throw Error(ErrorCode::OutOfDomain, "phi_u needs u > 1");
  require_rate(r, "r");
  return (1.0 - 2.0 * u + r * u * u) / ((r - 1.0) * u);
}

double h_r(double r, double u) {
  if (!(std::isfinite(r) && r > 1.0)) throw Error(ErrorCode::OutOfDomain, "h_r needs r > 1");
  require_rate(u, "u");
  return (1.0 - 2.0 * r + r * r * u) / (u - 1.0);
}

RateTheta params_from_triple(const WeightTriple& t) {
  const double x2 = t.x() * t.x();
  const double r = x2 * neg_moment1(t);
  const double theta = x2 * x2 * neg_moment2(t) / (r * r);
  return {r, theta};
}

WeightTriple triple_from_params(double x, RateTheta rt) {
  if (!(std::isfinite(x) && x > 0.0)) throw Error(ErrorCode::OutOfDomain, "x must be positive");
  require_rate(rt.r, "r");
  require_rate(rt.theta, "theta");
  const double rm1 = rt.r - 1.0;
  // u = (1 - 2r + theta r^2)/((theta - 1) r^2) solves h_r(u) = theta r^2;
  // v = phi_u(r) then gives v - u = (u - 1)^2 / ((r - 1) u).
  const double u_gap = rm1 * rm1 / ((rt.theta - 1.0) * rt.r * rt.r);
  const double v_gap = u_gap * u_gap / (rm1 * (1.0 + u_gap));
  return WeightTriple::from_gaps(x, u_gap, v_gap);
}

double support_sup_closed(double x, RateTheta rt) {
  if (!(std::isfinite(x) && x > 0.0)) throw Error(ErrorCode::OutOfDomain, "x must be positive");
  require_rate(rt.r, "r");
  require_rate(rt.theta, "theta");
  // With s = x^2 (1 + t), s^2 - psi1 s - psi0 becomes t^2 - b t - q where
  // b = psi1/x^2 - 2 and q = psi1/x^2 + psi0/x^4 - 1 = (r - 1)^2 / ((theta - 1) r^2).
  const double rm1 = rt.r - 1.0;
  const double tm1 = rt.theta - 1.0;
  const double b = (rm1 - tm1 * rt.r) / (tm1 * rt.r);
  const double q = rm1 * rm1 / (tm1 * rt.r * rt.r);
  return x * x * (1.0 + upper_root_shift(q, b));
}

std::vector<double> weight_sequence(const WeightTriple& t, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::OutOfDomain, "weight_sequence needs n >= 3");
  std::vector<double> weights{t.x(), t.y(), t.z()};
  weights.reserve(n);

  const AtomicMeasure xi = stampfli_measure(t);
  const double top = support_sup(xi);
  // gamma_k / top^k, accumulated as sums of mass * (s / top)^k.
  std::vector<double> scaled(xi.masses().begin(), xi.masses().end());
  auto advance = [&] {
    double sum = 0.0;
    for (std::size_t j = 0; j < scaled.size(); ++j) {
      scaled[j] *= xi.atoms()[j] / top;
      sum += scaled[j];
    }
    return sum;
  };
  double current = advance();  // k = 1
  current = advance();         // k = 2
  current = advance();         // k = 3
  while (weights.size() < n) {
    const double next = advance();
    weights.push_back(std::sqrt(top * next / current));
    current = next;
  }
  weights.resize(n);
  return weights;
}

}  // namespace subnormal
