#pragma once

#include <cstddef>

namespace subnormal {

// Atoms closer than this (relative) are merged into one.
inline constexpr double kAtomMergeTol = 1e-12;
// Allowed relative defect of the total mass before renormalization.
inline constexpr double kNormTol = 1e-12;
// Equality constraints on order-1 quantities (sum r_i a_i = 1, flat-data tests),
// and the distance from the poles r = 1, theta = 1, u = 1 below which inputs are rejected.
inline constexpr double kEqTol = 1e-10;
// "Strictly greater than 1" classification of rate coordinates.
inline constexpr double kBoundaryTol = 1e-9;
// Verifier defaults.
inline constexpr double kVerifyTol = 1e-9;
inline constexpr std::size_t kVerifyDepth = 6;

}  // namespace subnormal
