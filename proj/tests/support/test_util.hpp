#pragma once

#include <initializer_list>
#include <vector>

#include "higgs/linalg.hpp"
#include "higgs/model.hpp"
#include "higgs/rng.hpp"

namespace testutil {

using higgs::CMat;
using higgs::Complex;

inline CMat mat(int rows, int cols, std::initializer_list<Complex> entries) {
  CMat m(rows, cols);
  int k = 0;
  for (const Complex& z : entries) m(k / cols, k % cols) = z, ++k;
  return m;
}

inline CMat mat2(Complex a, Complex b, Complex c, Complex d) {
  return mat(2, 2, {a, b, c, d});
}

inline higgs::HiggsDatum one_block(int dim, std::vector<CMat> higgs,
                                   const std::string& label = "E0") {
  higgs::HiggsDatum datum;
  datum.dim = dim;
  higgs::BlockSpec b;
  b.label = label;
  b.rank = 1;
  b.multiplicity = static_cast<int>(higgs.front().rows());
  b.slope = 0.0;
  b.higgs = std::move(higgs);
  datum.blocks.push_back(std::move(b));
  return datum;
}

inline CMat random_complex(int rows, int cols, higgs::SplitRng& rng) {
  CMat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.complex_gaussian();
  return m;
}

// Random Hermitian positive definite matrix with eigenvalues in [lo, hi].
inline CMat random_hpd(int n, higgs::SplitRng& rng, double lo = 0.5, double hi = 2.0) {
  const CMat q = higgs::random_unitary(n, rng);
  higgs::CVec ev(n);
  for (int i = 0; i < n; ++i) ev(i) = rng.uniform(lo, hi);
  CMat h = q * ev.asDiagonal() * q.adjoint();
  return (h + CMat(h.adjoint())) / 2.0;
}

}  // namespace testutil
