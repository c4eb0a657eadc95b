#include "subnormal/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "subnormal/errors.hpp"
#include "subnormal/tolerances.hpp"

namespace subnormal {

namespace {

bool coincide(double a, double b) {
  return std::abs(a - b) <= kAtomMergeTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<double> atoms, std::vector<double> masses) {
  if (atoms.size() != masses.size()) {
    throw Error(ErrorCode::InvalidMeasure, "atoms and masses differ in length (" +
                                               std::to_string(atoms.size()) + " vs " +
                                               std::to_string(masses.size()) + ")");
  }
  if (atoms.empty()) throw Error(ErrorCode::InvalidMeasure, "a measure needs at least one atom");
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!std::isfinite(atoms[k]) || atoms[k] < 0.0) {
      throw Error(ErrorCode::InvalidMeasure, "atom " + std::to_string(k) + " is not a finite nonnegative number");
    }
    if (!std::isfinite(masses[k]) || masses[k] <= 0.0) {
      throw Error(ErrorCode::InvalidMeasure, "mass " + std::to_string(k) + " is not a finite positive number");
    }
  }

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });

  for (std::size_t idx : order) {
    if (!atoms_.empty() && coincide(atoms_.back(), atoms[idx])) {
      masses_.back() += masses[idx];
    } else {
      atoms_.push_back(atoms[idx]);
      masses_.push_back(masses[idx]);
    }
  }

  const double total = std::accumulate(masses_.begin(), masses_.end(), 0.0);
  if (std::abs(total - 1.0) > kNormTol) {
    throw Error(ErrorCode::InvalidMeasure, "masses sum to " + std::to_string(total) + ", not 1");
  }
  for (double& m : masses_) m /= total;
}

AtomicMeasure AtomicMeasure::dirac(double at) { return AtomicMeasure({at}, {1.0}); }

double moment(const AtomicMeasure& mu, int n) {
  if (n == 0) {
    return std::accumulate(mu.masses().begin(), mu.masses().end(), 0.0);
  }
  if (n < 0 && has_atom_at_zero(mu)) {
    throw Error(ErrorCode::ZeroAtomNegativeMoment,
                "moment of order " + std::to_string(n) + " diverges at the atom 0");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) sum += mu.masses()[k] * std::pow(mu.atoms()[k], n);
  return sum;
}

double support_sup(const AtomicMeasure& mu) noexcept { return mu.atoms().back(); }

bool has_atom_at_zero(const AtomicMeasure& mu) noexcept { return mu.atoms().front() == 0.0; }

}  // namespace subnormal
