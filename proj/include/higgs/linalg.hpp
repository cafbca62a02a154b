#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace higgs {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Tolerance discipline shared by every numerical verdict. All rank-type
/// thresholds are relative to max(1, input norm).
struct Tolerances {
  double tau_commute = 1e-9;   // relative commutator threshold
  double tau_rank = 1e-10;     // singular-value cutoff
  double tau_cluster = 1e-7;   // eigenvalue clustering radius
  double kappa_max = 1e8;      // metric condition-number ceiling
};

double frobenius_norm(const CMat& a);

bool all_finite(const CMat& a);

/// Hermitian within an absolute tolerance on ||H - H^dagger||_F.
bool is_hermitian(const CMat& h, double atol);

/// Quadratic scale of a matrix family: max(1, max_i ||T_i||_F^2).
/// Commutator-type residuals are assessed against this.
double family_scale(const std::vector<CMat>& family);

/// Linear scale: max(1, max_i ||T_i||_F).
double family_scale_linear(const std::vector<CMat>& family);

struct EigenDecomposition {
  CVec values;
  CMat vectors;  // unit right eigenvectors, column k for values(k)
};

/// Schur-based dense eigendecomposition. Enforces the residual contract
/// ||A v - lambda v|| <= tau_rank * max(1, ||A||) per pair and throws
/// NumericalError if the solver fails to converge or the bound is violated.
EigenDecomposition eigendecompose(const CMat& a, const Tolerances& tol);

/// Orthonormal basis of the numerical kernel: singular values below
/// tau_rank * max(1, sigma_max) count as zero. May return zero columns.
CMat nullspace(const CMat& a, const Tolerances& tol);

/// Kernel dimension at the same threshold as nullspace().
int nullity(const CMat& a, const Tolerances& tol);

/// Adjoint of T with respect to the inner product <u,v> = u^dagger H v,
/// i.e. H^{-1} T^dagger H. H must be Hermitian positive definite.
CMat h_adjoint(const CMat& t, const CMat& h, const Tolerances& tol = {});

/// True iff H is Hermitian within tau_rank * max(1,||H||) and all
/// eigenvalues exceed tau_rank * max(1, ||H||).
bool is_positive_definite(const CMat& h, const Tolerances& tol);

/// lambda_max / lambda_min of a Hermitian positive matrix; +inf when the
/// smallest eigenvalue is not strictly positive.
double hermitian_condition(const CMat& h);

/// Ratio sigma_max / sigma_min; +inf for singular input.
double condition_number(const CMat& a);

/// Rotate each column so its largest-modulus entry (lowest index on ties)
/// becomes real positive. Keeps orthonormality, pins the phase freedom.
void canonicalize_phases(CMat& v);

}  // namespace higgs
