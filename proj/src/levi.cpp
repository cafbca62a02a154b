#include "higgs/levi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "higgs/errors.hpp"

namespace higgs {

namespace {

CVec vec(const CMat& x) { return Eigen::Map<const CVec>(x.data(), x.size()); }

CMat unvec(const CVec& v, int n) { return Eigen::Map<const CMat>(v.data(), n, n); }

// Column-major vectorization: vec([X, T]) = (T^T (x) I - I (x) T) vec(X).
CMat commutation_operator(const CMat& t) {
  const int n = static_cast<int>(t.rows());
  const CMat id = CMat::Identity(n, n);
  CMat op = CMat::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) op.block(a * n, b * n, n, n) = t(b, a) * id;
    op.block(a * n, a * n, n, n) -= t;
  }
  return op;
}

bool commuting_semisimple(const std::vector<CMat>& family, const Tolerances& tol) {
  if (commutation_residual(family) > tol.tau_commute * family_scale(family))
    return false;
  for (const auto& t : family)
    if (!is_semisimple(t, tol)) return false;
  return true;
}

}  // namespace

CentralizerResult centralizer_basis(const std::vector<CMat>& family,
                                    const Tolerances& tol) {
  if (family.empty()) throw DomainError("centralizer_basis: family must be nonempty");
  const int n = static_cast<int>(family.front().rows());
  for (const auto& t : family)
    if (t.rows() != n || t.cols() != n)
      throw DomainError("centralizer_basis: family members must be square of equal size");

  const int d = static_cast<int>(family.size());
  CMat stacked(d * n * n, n * n);
  for (int i = 0; i < d; ++i)
    stacked.middleRows(i * n * n, n * n) = commutation_operator(family[i]);

  const CMat kernel = nullspace(stacked, tol);
  CentralizerResult out;
  out.dim = static_cast<int>(kernel.cols());
  out.basis.reserve(out.dim);
  for (int k = 0; k < out.dim; ++k) out.basis.push_back(unvec(kernel.col(k), n));

  if (commuting_semisimple(family, tol)) {
    const JointSpectrum spectrum = joint_spectrum(family, tol);
    out.levi_type = levi_type(spectrum);
    int expected = 0;
    for (int m : *out.levi_type) expected += m * m;
    if (expected != out.dim)
      throw NumericalError(
          "centralizer_basis: dimension disagrees with the joint spectrum "
          "(got " + std::to_string(out.dim) + ", expected " + std::to_string(expected) + ")");
  }
  return out;
}

std::vector<int> levi_type(const JointSpectrum& spectrum) {
  std::vector<int> type;
  for (const auto& e : spectrum.entries) type.push_back(e.multiplicity);
  std::sort(type.rbegin(), type.rend());
  return type;
}

ReductionFrame conjugating_frame(const std::vector<CMat>& family, const Tolerances& tol,
                                 std::uint64_t seed) {
  const JointEigenDecomposition dec = joint_eigenspaces(family, tol, seed);
  return {dec.basis, dec.group_sizes, dec.spectrum};
}

std::vector<int> levi_type_inductive(const std::vector<CMat>& family,
                                     const Tolerances& tol, std::uint64_t seed) {
  if (family.empty()) throw DomainError("levi_type_inductive: family must be nonempty");
  const int n = static_cast<int>(family.front().rows());
  if (!commuting_semisimple(family, tol))
    throw NotPolystableError("levi_type_inductive: family is not commuting semisimple");

  std::vector<CMat> groups = {CMat::Identity(n, n)};
  for (const auto& t : family) {
    std::vector<CMat> next;
    for (const auto& p : groups) {
      const int m = static_cast<int>(p.cols());
      // One-generator refinement of a single joint eigenspace of the
      // generators processed so far.
      const CMat r = p.adjoint() * t * p;
      std::vector<CMat> single = {r};
      const JointEigenDecomposition dec = joint_eigenspaces(single, tol, seed);
      int covered = 0;
      for (std::size_t g = 0; g < dec.group_sizes.size(); ++g) {
        next.push_back(p * dec.basis.middleCols(covered, dec.group_sizes[g]));
        covered += dec.group_sizes[g];
      }
      if (covered != m)
        throw NumericalError("levi_type_inductive: refinement lost dimensions");
    }
    groups = std::move(next);
  }
  std::vector<int> type;
  for (const auto& p : groups) type.push_back(static_cast<int>(p.cols()));
  std::sort(type.rbegin(), type.rend());
  return type;
}

CMat canonical_block_scalar(const JointSpectrum& spectrum, int component) {
  const int n = spectrum.total_multiplicity();
  CMat out = CMat::Zero(n, n);
  int pos = 0;
  for (const auto& e : spectrum.entries) {
    if (component < 0 || component >= static_cast<int>(e.tuple.size()))
      throw DomainError("canonical_block_scalar: component out of range");
    for (int k = 0; k < e.multiplicity; ++k) {
      out(pos, pos) = e.tuple[component];
      ++pos;
    }
  }
  return out;
}

double span_residual(const std::vector<CMat>& basis, const CMat& v) {
  CMat rem = v;
  for (const auto& x : basis) {
    const Complex coeff = (x.adjoint() * rem).trace();
    rem -= coeff * x;
  }
  return rem.norm();
}

}  // namespace higgs
