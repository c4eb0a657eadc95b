#pragma once

#include <cstddef>
#include <vector>

#include "subnormal/measures.hpp"

namespace subnormal {

enum class TripleKind {
  Generic,   // x < y < z
  Flat,      // x = y = z, 1-atomic Berger measure
  ZeroAtom,  // x < y = z, 2-atomic with an atom at 0
};

/// Three initial weights 0 < x <= y <= z of a unilateral weighted shift.
///
/// The triple is stored as x together with the squared-ratio gaps
/// u - 1 = (y^2 - x^2)/x^2 and v - u = (z^2 - y^2)/x^2, so nearly coincident
/// weights keep their relative spacing exactly. x = y < z is rejected: no
/// subnormal shift starts that way.
class WeightTriple {
 public:
  WeightTriple(double x, double y, double z);

  /// Builds the triple (x, x*sqrt(u), x*sqrt(v)) from u - 1 and v - u.
  static WeightTriple from_gaps(double x, double u_gap, double v_gap);

  double x() const noexcept { return x_; }
  double y() const noexcept;
  double z() const noexcept;

  double u() const noexcept { return 1.0 + u_gap_; }
  double v() const noexcept { return 1.0 + u_gap_ + v_gap_; }
  double u_gap() const noexcept { return u_gap_; }
  double v_gap() const noexcept { return v_gap_; }

  TripleKind kind() const noexcept;
  bool is_generic() const noexcept { return kind() == TripleKind::Generic; }

 private:
  WeightTriple() = default;

  double x_ = 0.0;
  double u_gap_ = 0.0;
  double v_gap_ = 0.0;
};

/// Data of the 2-atomic Berger measure rho*delta(s0) + (1-rho)*delta(s1) of
/// the Stampfli completion; s0, s1 are the roots of s^2 - psi1*s - psi0.
struct StampfliParams {
  double psi0;
  double psi1;
  double s0;
  double s1;
  double rho;
  double rho1;  // 1 - rho, formed without cancellation
};

/// (u, v) = (y^2/x^2, z^2/x^2), a point of {v > u > 1}.
struct NormalizedPair {
  double u;
  double v;
};

/// Normalized first and second negative moments of a Stampfli Berger measure:
/// r = x^2 * int 1/s, theta = x^4 * int 1/s^2 / r^2. Both exceed 1.
struct RateTheta {
  double r;
  double theta;
};

/// Generic triples only (Error{InvalidTriple} otherwise).
StampfliParams stampfli_params(const WeightTriple& t);

/// Berger measure of (x, y, z)^: 2 atoms for generic triples, delta(x^2) for
/// flat ones, and mass 1 - x^2/y^2 at 0 plus x^2/y^2 at y^2 when x < y = z.
AtomicMeasure stampfli_measure(const WeightTriple& t);

/// Closed forms of int 1/s and int 1/s^2 against the Stampfli measure,
/// evaluated in the normalized variables. Generic triples only.
double neg_moment1(const WeightTriple& t);
double neg_moment2(const WeightTriple& t);

/// f(u, v) = (1 - 2u + uv) / (u (v - u)); maps {v > u > 1} onto (1, inf).
double f_map(NormalizedPair p);

/// phi_u(r) = (1 - 2u + r u^2) / ((r - 1) u), the inverse of f(u, .) on (1, inf).
double phi_u(double u, double r);

/// h_r(u) = (1 - 2r + r^2 u) / (u - 1), the second normalized negative moment
/// along the curve v = phi_u(r).
double h_r(double r, double u);

RateTheta params_from_triple(const WeightTriple& t);

/// The unique generic triple starting at x whose Stampfli measure has rate
/// parameters (r, theta). Rejects r or theta within kEqTol of 1.
WeightTriple triple_from_params(double x, RateTheta rt);

/// Largest atom of the measure of triple_from_params(x, rt), computed from
/// psi1 = x^2 (theta r - 1) / ((theta - 1) r) and
/// psi0 = -x^4 (r - 1) / ((theta - 1) r^2) without forming the triple.
double support_sup_closed(double x, RateTheta rt);

/// First n weights of the completion (x, y, z)^: the data followed by
/// sqrt(gamma_{k+1} / gamma_k) with gamma_k the k-th moment of the Berger
/// measure. Requires n >= 3.
std::vector<double> weight_sequence(const WeightTriple& t, std::size_t n);

}  // namespace subnormal
