#include "higgs/polystability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "higgs/errors.hpp"
#include "higgs/rng.hpp"

namespace higgs {

namespace {

struct Cluster {
  Complex center;
  std::vector<int> members;  // indices into the eigenvalue vector
};

// Single-linkage clustering of eigenvalues at radius tol. Quadratic in n,
// which is fine at desk scale.
std::vector<Cluster> cluster_eigenvalues(const CVec& values, double radius) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(values(i) - values(j)) <= radius) parent[find(i)] = find(j);

  std::vector<Cluster> clusters;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(clusters.size());
      clusters.push_back({});
    }
    clusters[slot[r]].members.push_back(i);
  }
  for (auto& c : clusters) {
    Complex sum{0.0, 0.0};
    for (int i : c.members) sum += values(i);
    c.center = sum / static_cast<double>(c.members.size());
  }
  return clusters;
}

struct Group {
  CMat basis;  // n x m, orthonormal columns
  std::vector<Complex> tuple;
};

// Recursive refinement: split the subspace spanned by `basis` until every
// restricted member is scalar, redrawing combination coefficients each round.
void refine(const std::vector<CMat>& family, const Tolerances& tol, SplitRng& rng,
            const CMat& basis, int depth, double scalar_tol, std::vector<Group>& out) {
  const int m = static_cast<int>(basis.cols());
  const int d = static_cast<int>(family.size());

  std::vector<CMat> restricted(d);
  for (int i = 0; i < d; ++i) restricted[i] = basis.adjoint() * family[i] * basis;

  std::vector<Complex> tuple(d);
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    const Complex mean = restricted[i].trace() / static_cast<double>(m);
    tuple[i] = mean;
    worst = std::max(worst,
                     (restricted[i] - mean * CMat::Identity(m, m)).norm());
  }
  if (worst <= scalar_tol) {
    out.push_back({basis, std::move(tuple)});
    return;
  }
  if (depth >= 5) {
    std::ostringstream os;
    os << "joint_eigenspaces: inseparable clusters after 5 rounds"
       << " (achieved scalarity residual " << worst << ")";
    throw NumericalError(os.str());
  }

  std::vector<Complex> coeffs(d);
  for (auto& c : coeffs) c = rng.unit_circle();
  const CMat comb = combine(restricted, coeffs);
  const EigenDecomposition eig = eigendecompose(comb, tol);
  const auto clusters = cluster_eigenvalues(eig.values, tol.tau_cluster);

  // An unlucky coefficient draw can collide distinct joint eigenvalues in
  // the combination; detect it (cluster size != eigenspace dimension, or no
  // split at all) and retry with fresh coefficients.
  std::vector<CMat> subs;
  bool usable = clusters.size() > 1;
  if (usable) {
    for (const auto& c : clusters) {
      CMat sub = nullspace(comb - c.center * CMat::Identity(m, m), tol);
      if (sub.cols() != static_cast<Eigen::Index>(c.members.size())) {
        usable = false;
        break;
      }
      subs.push_back(std::move(sub));
    }
  }
  if (!usable) {
    refine(family, tol, rng, basis, depth + 1, scalar_tol, out);
    return;
  }
  for (const auto& sub : subs)
    refine(family, tol, rng, CMat(basis * sub), depth + 1, scalar_tol, out);
}

void require_family(const std::vector<CMat>& family) {
  if (family.empty()) throw DomainError("family must be nonempty");
  const Eigen::Index n = family.front().rows();
  for (const auto& t : family)
    if (t.rows() != n || t.cols() != n)
      throw DomainError("family members must be square matrices of equal size");
}

}  // namespace

std::string to_string(PolyVerdict v) {
  switch (v) {
    case PolyVerdict::polystable: return "polystable";
    case PolyVerdict::fails_commutation: return "fails_commutation";
    case PolyVerdict::fails_semisimplicity: return "fails_semisimplicity";
  }
  return "unknown";
}

double commutation_residual(const std::vector<CMat>& family) {
  require_family(family);
  double worst = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t k = i + 1; k < family.size(); ++k)
      worst = std::max(worst, (family[i] * family[k] - family[k] * family[i]).norm());
  return worst;
}

double commutation_residual(const BlockSpec& block) {
  return commutation_residual(block.higgs);
}

bool is_semisimple(const CMat& a, const Tolerances& tol) {
  return semisimple_defect(a, tol) == 0;
}

int semisimple_defect(const CMat& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) throw DomainError("is_semisimple: matrix is not square");
  if (a.rows() == 0) return 0;
  const EigenDecomposition eig = eigendecompose(a, tol);
  const auto clusters = cluster_eigenvalues(eig.values, tol.tau_cluster);
  const int n = static_cast<int>(a.rows());
  int defect = 0;
  for (const auto& c : clusters) {
    const int algebraic = static_cast<int>(c.members.size());
    const int geometric =
        nullity(a - c.center * CMat::Identity(n, n), tol);
    defect += std::abs(algebraic - geometric);
  }
  return defect;
}

CMat combine(const std::vector<CMat>& family, const std::vector<Complex>& coeffs) {
  require_family(family);
  if (coeffs.size() != family.size())
    throw DomainError("combine: coefficient arity mismatch");
  CMat out = CMat::Zero(family.front().rows(), family.front().cols());
  for (std::size_t i = 0; i < family.size(); ++i) out += coeffs[i] * family[i];
  return out;
}

JointEigenDecomposition joint_eigenspaces(const std::vector<CMat>& family,
                                          const Tolerances& tol, std::uint64_t seed) {
  require_family(family);
  const int n = static_cast<int>(family.front().rows());
  const double scale = family_scale(family);
  if (commutation_residual(family) > tol.tau_commute * scale)
    throw NotPolystableError("joint_eigenspaces: family does not commute at tolerance");
  for (const auto& t : family)
    if (!is_semisimple(t, tol))
      throw NotPolystableError("joint_eigenspaces: family member is not semisimple");

  SplitRng rng(seed);
  std::vector<Group> groups;
  refine(family, tol, rng, CMat::Identity(n, n), 0, 10.0 * tol.tau_cluster, groups);

  // Merge groups whose tuples coincide at tolerance (possible when a split
  // was over-eager), then sort canonically.
  std::vector<Group> merged;
  for (auto& g : groups) {
    bool absorbed = false;
    for (auto& m : merged) {
      if (tuple_distance(m.tuple, g.tuple) <= tol.tau_cluster) {
        CMat joined(n, m.basis.cols() + g.basis.cols());
        joined << m.basis, g.basis;
        Eigen::HouseholderQR<CMat> qr(joined);
        CMat q = qr.householderQ();
        m.basis = q.leftCols(joined.cols());
        canonicalize_phases(m.basis);
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(std::move(g));
  }
  std::stable_sort(merged.begin(), merged.end(), [&](const Group& x, const Group& y) {
    return tuple_compare(x.tuple, y.tuple, tol.tau_cluster) < 0;
  });

  JointEigenDecomposition out;
  out.basis = CMat(n, n);
  int col = 0;
  for (const auto& g : merged) {
    const int m = static_cast<int>(g.basis.cols());
    out.basis.middleCols(col, m) = g.basis;
    out.group_sizes.push_back(m);
    out.spectrum.entries.push_back({g.tuple, m});
    col += m;
  }
  if (col != n)
    throw NumericalError("joint_eigenspaces: group sizes do not sum to the block size");
  const double cond = condition_number(out.basis);
  if (!(cond <= tol.kappa_max))
    throw NumericalError("joint_eigenspaces: joint eigenbasis condition number exceeds ceiling");
  return out;
}

JointSpectrum joint_spectrum(const std::vector<CMat>& family, const Tolerances& tol,
                             std::uint64_t seed) {
  return joint_eigenspaces(family, tol, seed).spectrum;
}

PolystabilityReport check_polystable(const HiggsDatum& datum, const Tolerances& tol) {
  const ValidationReport vr = validate(datum, tol);
  if (!vr.ok())
    throw DomainError("check_polystable: datum is invalid\n" + vr.to_string());

  PolystabilityReport report;
  bool commutes = true;
  bool semisimple = true;
  for (const auto& block : datum.blocks) {
    BlockPolyReport br;
    br.label = block.label;
    br.scale = family_scale(block.higgs);
    br.commutation_residual = commutation_residual(block);
    const bool block_commutes =
        br.commutation_residual <= tol.tau_commute * br.scale;
    commutes = commutes && block_commutes;
    for (const auto& t : block.higgs) {
      const int defect = semisimple_defect(t, tol);
      br.semisimple.push_back(defect == 0);
      br.semisimple_defect.push_back(defect);
      semisimple = semisimple && (defect == 0);
    }
    report.commutation_residual =
        std::max(report.commutation_residual, br.commutation_residual);
    report.scale = std::max(report.scale, br.scale);
    report.blocks.push_back(std::move(br));
  }

  if (!commutes) {
    report.verdict = PolyVerdict::fails_commutation;
  } else if (!semisimple) {
    report.verdict = PolyVerdict::fails_semisimplicity;
  } else {
    report.verdict = PolyVerdict::polystable;
    for (std::size_t j = 0; j < datum.blocks.size(); ++j)
      report.blocks[j].spectrum = joint_spectrum(datum.blocks[j].higgs, tol);
  }
  return report;
}

}  // namespace higgs
