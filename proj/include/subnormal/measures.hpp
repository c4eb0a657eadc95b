#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace subnormal {

/// Finitely supported Borel probability measure on [0, inf).
///
/// Atoms are kept sorted ascending and pairwise distinct; atoms within a
/// relative distance of kAtomMergeTol are merged at construction and the
/// masses renormalized. Immutable once built.
class AtomicMeasure {
 public:
  /// Throws Error{InvalidMeasure} on length mismatch, empty input, negative or
  /// non-finite atoms, non-positive masses, or total mass off by more than
  /// kNormTol.
  AtomicMeasure(std::vector<double> atoms, std::vector<double> masses);

  static AtomicMeasure dirac(double at);

  std::span<const double> atoms() const noexcept { return atoms_; }
  std::span<const double> masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> masses_;
};

/// Power moment: sum_k mass_k * atom_k^n. Negative n requires every atom to be
/// positive (Error{ZeroAtomNegativeMoment} otherwise).
double moment(const AtomicMeasure& mu, int n);

/// Largest atom.
double support_sup(const AtomicMeasure& mu) noexcept;

bool has_atom_at_zero(const AtomicMeasure& mu) noexcept;

}  // namespace subnormal
