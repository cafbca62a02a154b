#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "higgs/linalg.hpp"
#include "higgs/polystability.hpp"
#include "higgs/spectrum.hpp"

namespace higgs {

/// Basis and dimension of the commutant of a matrix family, plus the Levi
/// type (gl-block sizes) when the family is commuting semisimple.
struct CentralizerResult {
  std::vector<CMat> basis;  // orthonormal in the trace form tr(X^dagger Y)
  int dim = 0;
  std::optional<std::vector<int>> levi_type;  // descending multiplicities
};

/// Invertible frame g with g^{-1} T^i g block-scalar in canonical spectrum
/// order; unique up to right multiplication by a centralizer element.
struct ReductionFrame {
  CMat frame;
  std::vector<int> group_sizes;
  JointSpectrum spectrum;
};

/// Solves the stacked Kronecker system [X, T^i] = 0 for all i by a
/// rank-revealing nullspace of the (d n^2) x n^2 vectorized operator. The
/// family need not commute; when it is commuting semisimple the Levi type is
/// attached and dim = sum m_a^2 is verified.
CentralizerResult centralizer_basis(const std::vector<CMat>& family,
                                    const Tolerances& tol);

/// Multiset of joint-spectrum multiplicities, sorted descending.
std::vector<int> levi_type(const JointSpectrum& spectrum);

/// Joint eigenbasis assembled in canonical spectrum order, orthonormal
/// within groups. Requires a commuting semisimple family.
ReductionFrame conjugating_frame(const std::vector<CMat>& family, const Tolerances& tol,
                                 std::uint64_t seed = kDefaultCombinationSeed);

/// Levi type obtained by refining one generator at a time (centralizer of
/// T^1, then T^2 inside it, ...). Agrees with the all-at-once computation.
std::vector<int> levi_type_inductive(const std::vector<CMat>& family,
                                     const Tolerances& tol,
                                     std::uint64_t seed = kDefaultCombinationSeed);

/// Block-scalar matrix diag(lambda^i_a I_{m_a}) for component i of a
/// canonical spectrum.
CMat canonical_block_scalar(const JointSpectrum& spectrum, int component);

/// Residual of v against span(basis) in the trace-form geometry:
/// ||v - proj(v)||_F with the basis orthonormal under tr(X^dagger Y).
double span_residual(const std::vector<CMat>& basis, const CMat& v);

}  // namespace higgs
