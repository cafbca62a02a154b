#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "higgs/linalg.hpp"
#include "higgs/model.hpp"
#include "higgs/spectrum.hpp"

namespace higgs {

/// Default stream for the randomized generic-combination steps; fixed so
/// identical invocations produce identical results.
inline constexpr std::uint64_t kDefaultCombinationSeed = 0x48494747534A4435ULL;

/// Simultaneous eigenspace decomposition: basis columns grouped by joint
/// eigenspace (orthonormal within each group, canonical spectrum order).
struct JointEigenDecomposition {
  CMat basis;
  std::vector<int> group_sizes;
  JointSpectrum spectrum;
};

enum class PolyVerdict { polystable, fails_commutation, fails_semisimplicity };

std::string to_string(PolyVerdict v);

struct BlockPolyReport {
  std::string label;
  double commutation_residual = 0.0;  // absolute, max over component pairs
  double scale = 1.0;                 // max(1, max_i ||T^i||_F^2)
  std::vector<bool> semisimple;       // per component
  std::vector<int> semisimple_defect; // |geometric - algebraic| summed over clusters
  std::optional<JointSpectrum> spectrum;  // attached when polystable
};

struct PolystabilityReport {
  PolyVerdict verdict = PolyVerdict::polystable;
  double commutation_residual = 0.0;  // max over blocks, absolute
  double scale = 1.0;                 // max over blocks
  std::vector<BlockPolyReport> blocks;
  bool polystable() const { return verdict == PolyVerdict::polystable; }
};

/// Max over pairs i < k of ||T^i T^k - T^k T^i||_F (absolute; assess against
/// tau_commute * family_scale). Zero for a single component.
double commutation_residual(const std::vector<CMat>& family);
double commutation_residual(const BlockSpec& block);

/// Diagonalizable at tolerance: every eigenvalue cluster (single-linkage,
/// radius tau_cluster) has numerical kernel dimension of (A - center) equal
/// to its algebraic multiplicity.
bool is_semisimple(const CMat& a, const Tolerances& tol);

/// Sum over clusters of |algebraic - geometric| multiplicity; 0 iff
/// is_semisimple. Diagnostic only.
int semisimple_defect(const CMat& a, const Tolerances& tol);

/// sum_i coeffs[i] * family[i].
CMat combine(const std::vector<CMat>& family, const std::vector<Complex>& coeffs);

/// Splits C^n into joint eigenspaces by eigendecomposing random unit-circle
/// combinations of the family, clustering, and recursing on groups where a
/// member is not yet scalar (at most 5 rounds, then NumericalError).
/// Preconditions (checked): family commutes at tau_commute * scale and every
/// member is semisimple; violations throw NotPolystableError.
JointEigenDecomposition joint_eigenspaces(const std::vector<CMat>& family,
                                          const Tolerances& tol,
                                          std::uint64_t seed = kDefaultCombinationSeed);

/// Canonical sorted joint spectrum (conjugation invariant).
JointSpectrum joint_spectrum(const std::vector<CMat>& family, const Tolerances& tol,
                             std::uint64_t seed = kDefaultCombinationSeed);

/// Evaluates both polystability conditions per block and attaches spectra on
/// success. Failures are verdicts, not errors.
PolystabilityReport check_polystable(const HiggsDatum& datum, const Tolerances& tol = {});

}  // namespace higgs
