#pragma once

#include <vector>

#include "higgs/linalg.hpp"

namespace higgs {

/// One joint eigenvalue: the d-tuple (lambda^1, ..., lambda^d) of
/// simultaneous eigenvalues together with its multiplicity.
struct SpectrumEntry {
  std::vector<Complex> tuple;
  int multiplicity = 0;
};

/// Canonical conjugacy-class invariant of a commuting semisimple family:
/// entries sorted lexicographically by (Re l^1, Im l^1, ..., Re l^d, Im l^d).
struct JointSpectrum {
  std::vector<SpectrumEntry> entries;

  int total_multiplicity() const;
  int dimension() const;  // tuple length d (0 when empty)
};

/// Three-way lexicographic comparison on interleaved (Re, Im) parts with
/// component equality at |x - y| <= tol.
int tuple_compare(const std::vector<Complex>& a, const std::vector<Complex>& b,
                  double tol);

/// Max over components of |a_i - b_i|.
double tuple_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Sorted canonical form; entries whose tuples agree within tol are merged.
JointSpectrum canonicalized(JointSpectrum s, double tol);

/// Entrywise equality of canonical spectra (tuples within tol, exact
/// multiplicities).
bool spectra_match(const JointSpectrum& a, const JointSpectrum& b, double tol);

}  // namespace higgs
