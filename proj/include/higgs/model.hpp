#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "higgs/linalg.hpp"
#include "higgs/rng.hpp"
#include "higgs/spectrum.hpp"

namespace higgs {

/// One polystable summand E_j carried as opaque metadata (label, rank,
/// slope) together with the d square matrices acting on its multiplicity
/// factor C^{n_j}.
struct BlockSpec {
  std::string label;
  int rank = 1;          // rank of the stable summand, metadata only
  int multiplicity = 1;  // n_j, size of every higgs matrix
  double slope = 0.0;    // mu(E_j), metadata only
  std::vector<CMat> higgs;
};

/// Full input: the count d of Higgs components and the block list.
struct HiggsDatum {
  int dim = 1;
  std::vector<BlockSpec> blocks;
};

/// Invertible d x d change of the frame used to split theta into components.
struct ChangeOfTrivialization {
  CMat matrix;
};

/// Per-block invertible matrices acting by simultaneous conjugation (and on
/// metrics by H -> g^dagger H g).
struct GaugeTransform {
  std::vector<CMat> blocks;
};

struct ValidationIssue {
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant of a datum: positive dim, nonempty and
/// distinctly labeled blocks, shared slope, per-block matrix arity/shape,
/// finite entries. Violations are reported with a path, never thrown.
ValidationReport validate(const HiggsDatum& datum, const Tolerances& tol = {});

/// Ground truth recorded by the planted generator, block by block.
struct PlantedBlockTruth {
  JointSpectrum spectrum;      // canonical order
  std::vector<int> group_dims; // eigenspace dimensions, canonical order
  CMat conjugator;             // S with S^{-1} T^i S block-scalar canonical
};

struct PlantedTruth {
  std::vector<PlantedBlockTruth> blocks;
};

struct PlantedOptions {
  std::optional<std::vector<JointSpectrum>> spectra;  // one per block
  bool identity_conjugator = false;
};

/// Draws, per block, commuting semisimple families T^i = S D^i S^{-1} with
/// joint eigenvalues on the integer grid {-5..5} + i{-5..5} (well separated)
/// and a conjugator of condition number <= 100. Deterministic in seed.
std::pair<HiggsDatum, PlantedTruth> gen_planted(int dim,
                                                const std::vector<int>& sizes,
                                                std::uint64_t seed,
                                                const PlantedOptions& opts = {});

enum class NegativeKind { nilpotent, noncommuting, nonsemisimple_mixed };

/// Single-block fixture violating exactly one polystability condition:
///   nilpotent           - a Jordan block among the components
///   noncommuting        - a component pair with commutator norm >= 1
///   nonsemisimple_mixed - commuting family {J, p(J)} with J a Jordan block
HiggsDatum gen_negative(NegativeKind kind, int size, int dim, std::uint64_t seed);

/// New components T'^i = sum_k A[i,k] T^k per block; metadata unchanged.
HiggsDatum apply_trivialization_change(const HiggsDatum& datum,
                                       const ChangeOfTrivialization& a,
                                       const Tolerances& tol = {});

/// Per block j, every T^i_j becomes g_j^{-1} T^i_j g_j.
HiggsDatum conjugate_datum(const HiggsDatum& datum, const GaugeTransform& g,
                           const Tolerances& tol = {});

/// Seeded well-conditioned random transforms for tests and sweeps.
GaugeTransform random_gauge(const std::vector<int>& sizes, std::uint64_t seed);
ChangeOfTrivialization random_trivialization(int dim, std::uint64_t seed);

/// Deterministic random invertible matrix with condition number <= 25.
CMat random_well_conditioned(int n, SplitRng& rng);

/// Haar-ish random unitary (QR of a complex Gaussian, phases fixed).
CMat random_unitary(int n, SplitRng& rng);

std::vector<int> block_sizes(const HiggsDatum& datum);

bool datum_equal(const HiggsDatum& a, const HiggsDatum& b);  // exact equality

}  // namespace higgs
