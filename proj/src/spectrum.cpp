#include "higgs/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "higgs/errors.hpp"

namespace higgs {

int JointSpectrum::total_multiplicity() const {
  int n = 0;
  for (const auto& e : entries) n += e.multiplicity;
  return n;
}

int JointSpectrum::dimension() const {
  return entries.empty() ? 0 : static_cast<int>(entries.front().tuple.size());
}

int tuple_compare(const std::vector<Complex>& a, const std::vector<Complex>& b,
                  double tol) {
  if (a.size() != b.size()) throw DomainError("tuple_compare: arity mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double parts[2][2] = {{a[i].real(), b[i].real()}, {a[i].imag(), b[i].imag()}};
    for (const auto& p : parts) {
      if (std::abs(p[0] - p[1]) > tol) return p[0] < p[1] ? -1 : 1;
    }
  }
  return 0;
}

double tuple_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw DomainError("tuple_distance: arity mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

JointSpectrum canonicalized(JointSpectrum s, double tol) {
  std::stable_sort(s.entries.begin(), s.entries.end(),
                   [tol](const SpectrumEntry& x, const SpectrumEntry& y) {
                     return tuple_compare(x.tuple, y.tuple, tol) < 0;
                   });
  JointSpectrum merged;
  for (auto& e : s.entries) {
    if (!merged.entries.empty() &&
        tuple_compare(merged.entries.back().tuple, e.tuple, tol) == 0) {
      merged.entries.back().multiplicity += e.multiplicity;
    } else {
      merged.entries.push_back(std::move(e));
    }
  }
  return merged;
}

bool spectra_match(const JointSpectrum& a, const JointSpectrum& b, double tol) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].multiplicity != b.entries[i].multiplicity) return false;
    if (a.entries[i].tuple.size() != b.entries[i].tuple.size()) return false;
    if (tuple_distance(a.entries[i].tuple, b.entries[i].tuple) > tol) return false;
  }
  return true;
}

}  // namespace higgs
