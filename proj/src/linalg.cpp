#include "higgs/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "higgs/errors.hpp"

namespace higgs {

double frobenius_norm(const CMat& a) { return a.norm(); }

bool all_finite(const CMat& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

bool is_hermitian(const CMat& h, double atol) {
  if (h.rows() != h.cols()) return false;
  return (h - h.adjoint()).norm() <= atol;
}

double family_scale(const std::vector<CMat>& family) {
  double s = 1.0;
  for (const auto& t : family) s = std::max(s, t.squaredNorm());
  return s;
}

double family_scale_linear(const std::vector<CMat>& family) {
  double s = 1.0;
  for (const auto& t : family) s = std::max(s, t.norm());
  return s;
}

EigenDecomposition eigendecompose(const CMat& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) throw DomainError("eigendecompose: matrix is not square");
  Eigen::ComplexEigenSolver<CMat> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigendecompose: iteration did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  const double bound = tol.tau_rank * std::max(1.0, a.norm());
  for (Eigen::Index k = 0; k < out.values.size(); ++k) {
    const double res = (a * out.vectors.col(k) - out.values(k) * out.vectors.col(k)).norm();
    if (!(res <= bound))
      throw NumericalError("eigendecompose: residual bound violated");
  }
  return out;
}

namespace {

// For tall inputs, reduce to the square R factor first: K = QR has the same
// singular values and right singular vectors as R. Complex BDCSVD is avoided
// throughout; it returned a non-unitary V on some well-conditioned inputs.
CMat qr_reduced(const CMat& a) {
  if (a.rows() <= a.cols()) return a;
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (static_cast<long>(m) * n > 64 * 64) {
    CMat work = a;
    std::vector<Complex> tau(n);
    const int info =
        LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, n, work.data(), m, tau.data());
    if (info == 0) return CMat(work.topRows(n).triangularView<Eigen::Upper>());
  }
  Eigen::HouseholderQR<CMat> qr(a);
  return CMat(qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>());
}

struct SvdFactors {
  Eigen::VectorXd values;  // descending
  CMat v;                  // all right singular vectors (cols of V)
};

// Full right-singular-vector SVD via LAPACK's divide-and-conquer, with a
// one-sided Jacobi fallback if it reports non-convergence.
SvdFactors svd_right(const CMat& a) {
  const CMat r = qr_reduced(a);
  const int m = static_cast<int>(r.rows());
  const int n = static_cast<int>(r.cols());
  CMat work = r;
  Eigen::VectorXd sv(std::min(m, n));
  CMat u(m, m), vt(n, n);
  const int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, work.data(), m,
                                  sv.data(), u.data(), m, vt.data(), n);
  if (info == 0) return {std::move(sv), CMat(vt.adjoint())};
  if (info < 0) throw NumericalError("svd: invalid argument to zgesdd");
  Eigen::JacobiSVD<CMat> svd(r, Eigen::ComputeFullV);  // info > 0: not converged
  return {svd.singularValues(), svd.matrixV()};
}

}  // namespace

CMat nullspace(const CMat& a, const Tolerances& tol) {
  const Eigen::Index n = a.cols();
  if (a.size() == 0) return CMat(a.rows() == 0 ? 0 : a.rows(), 0);
  const SvdFactors svd = svd_right(a);
  const double smax = svd.values.size() > 0 ? svd.values(0) : 0.0;
  const double cutoff = tol.tau_rank * std::max(1.0, smax);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.values.size(); ++i)
    if (svd.values(i) > cutoff) ++rank;
  CMat basis = svd.v.rightCols(n - rank);
  canonicalize_phases(basis);
  return basis;
}

int nullity(const CMat& a, const Tolerances& tol) {
  if (a.size() == 0) return static_cast<int>(a.cols());
  const SvdFactors svd = svd_right(a);
  const double cutoff =
      tol.tau_rank * std::max(1.0, svd.values.size() > 0 ? svd.values(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.values.size(); ++i)
    if (svd.values(i) > cutoff) ++rank;
  return static_cast<int>(a.cols() - rank);
}

CMat h_adjoint(const CMat& t, const CMat& h, const Tolerances& tol) {
  if (t.rows() != t.cols() || h.rows() != h.cols() || t.rows() != h.rows())
    throw DomainError("h_adjoint: T and H must be square of equal size");
  if (!is_hermitian(h, tol.tau_rank * std::max(1.0, h.norm())))
    throw DomainError("h_adjoint: H is not Hermitian within tolerance");
  Eigen::LLT<CMat> llt(h);
  if (llt.info() != Eigen::Success)
    throw DomainError("h_adjoint: H is not positive definite");
  return llt.solve(t.adjoint() * h);
}

bool is_positive_definite(const CMat& h, const Tolerances& tol) {
  if (h.rows() != h.cols()) throw DomainError("is_positive_definite: matrix is not square");
  if (h.rows() == 0) return true;
  const double scale = std::max(1.0, h.norm());
  if (!is_hermitian(h, tol.tau_rank * scale)) return false;
  Eigen::SelfAdjointEigenSolver<CMat> es((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("is_positive_definite: eigensolver failed");
  return es.eigenvalues().minCoeff() > tol.tau_rank * scale;
}

double hermitian_condition(const CMat& h) {
  if (h.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<CMat> es((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double condition_number(const CMat& a) {
  if (a.size() == 0) return 1.0;
  const SvdFactors svd = svd_right(a);
  const double lo = svd.values(svd.values.size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return svd.values(0) / lo;
}

void canonicalize_phases(CMat& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      const double m = std::abs(v(r, c));
      if (m > best + 0.0) {
        best = m;
        imax = r;
      }
    }
    if (best > 0.0) v.col(c) *= std::conj(v(imax, c)) / best;
  }
}

}  // namespace higgs
