#include "higgs/model.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "higgs/errors.hpp"

namespace higgs {

namespace {

constexpr int kGridRadius = 5;  // joint eigenvalues drawn from {-5..5} + i{-5..5}

Complex draw_grid_value(SplitRng& rng) {
  return {static_cast<double>(rng.uniform_int(-kGridRadius, kGridRadius)),
          static_cast<double>(rng.uniform_int(-kGridRadius, kGridRadius))};
}

std::vector<Complex> draw_grid_tuple(int d, SplitRng& rng) {
  std::vector<Complex> t(d);
  for (auto& v : t) v = draw_grid_value(rng);
  return t;
}

bool tuple_exact_equal(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  return a == b;
}

// Random partition of n into parts of size 1..3 (occasionally larger blocks
// would push eigenspace dimensions past what the grid can separate cheaply).
std::vector<int> draw_partition(int n, SplitRng& rng) {
  std::vector<int> parts;
  int rem = n;
  while (rem > 0) {
    const int cap = std::min(3, rem);
    const int m = static_cast<int>(rng.uniform_int(1, cap));
    parts.push_back(m);
    rem -= m;
  }
  return parts;
}

CMat jordan_block(int n, Complex lambda) {
  CMat j = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    j(i, i) = lambda;
    if (i + 1 < n) j(i, i + 1) = 1.0;
  }
  return j;
}

void check_invertible(const CMat& m, double tau_rank, const char* what) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return;
  if (sv(sv.size() - 1) <= tau_rank * std::max(1.0, sv(0)))
    throw DomainError(std::string(what) + ": matrix is singular at tolerance");
}

}  // namespace

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& i : issues) os << i.path << ": " << i.message << "\n";
  return os.str();
}

ValidationReport validate(const HiggsDatum& datum, const Tolerances&) {
  ValidationReport report;
  auto add = [&report](std::string path, std::string msg) {
    report.issues.push_back({std::move(path), std::move(msg)});
  };

  if (datum.dim < 1) add("dim", "dimension must be a positive integer");
  if (datum.blocks.empty()) add("blocks", "block list must be nonempty");

  std::set<std::string> labels;
  for (std::size_t j = 0; j < datum.blocks.size(); ++j) {
    const auto& b = datum.blocks[j];
    const std::string base = "blocks[" + std::to_string(j) + "]";
    if (!labels.insert(b.label).second) add(base + ".label", "labels not distinct");
    if (b.rank < 1) add(base + ".rank", "rank must be >= 1");
    if (b.multiplicity < 1) add(base + ".multiplicity", "multiplicity must be >= 1");
    if (!std::isfinite(b.slope)) add(base + ".slope", "non-finite slope");
    if (static_cast<int>(b.higgs.size()) != datum.dim) {
      add(base + ".higgs", "higgs arity mismatch: expected " + std::to_string(datum.dim) +
                               " matrices, got " + std::to_string(b.higgs.size()));
    }
    for (std::size_t i = 0; i < b.higgs.size(); ++i) {
      const auto& t = b.higgs[i];
      const std::string mpath = base + ".higgs[" + std::to_string(i) + "]";
      if (t.rows() != b.multiplicity || t.cols() != b.multiplicity)
        add(mpath, "matrix must be " + std::to_string(b.multiplicity) + "x" +
                       std::to_string(b.multiplicity));
      if (!all_finite(t)) add(mpath, "non-finite entry");
    }
  }
  if (datum.blocks.size() > 1) {
    const double s0 = datum.blocks.front().slope;
    for (std::size_t j = 1; j < datum.blocks.size(); ++j) {
      if (datum.blocks[j].slope != s0) {
        add("blocks[" + std::to_string(j) + "].slope",
            "slope differs across blocks; not a polystable decomposition input");
        break;
      }
    }
  }
  return report;
}

CMat random_unitary(int n, SplitRng& rng) {
  CMat g(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) g(r, c) = rng.complex_gaussian();
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c) {
    const Complex d = r(c, c);
    const double m = std::abs(d);
    if (m > 0.0) q.col(c) *= d / m;
  }
  return q;
}

CMat random_well_conditioned(int n, SplitRng& rng) {
  const CMat q1 = random_unitary(n, rng);
  const CMat q2 = random_unitary(n, rng);
  CVec sigma(n);
  for (int i = 0; i < n; ++i) sigma(i) = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
  return q1 * sigma.asDiagonal() * q2.adjoint();
}

std::pair<HiggsDatum, PlantedTruth> gen_planted(int dim, const std::vector<int>& sizes,
                                                std::uint64_t seed,
                                                const PlantedOptions& opts) {
  if (dim < 1) throw DomainError("gen_planted: dim must be >= 1");
  if (sizes.empty()) throw DomainError("gen_planted: sizes must be nonempty");
  for (int n : sizes)
    if (n < 1) throw DomainError("gen_planted: block sizes must be >= 1");
  if (opts.spectra && opts.spectra->size() != sizes.size())
    throw DomainError("gen_planted: spectra arity mismatch");

  SplitRng root(seed);
  SplitRng meta = root.split(0xD1);
  const double slope = static_cast<double>(meta.uniform_int(-3, 3));

  HiggsDatum datum;
  datum.dim = dim;
  PlantedTruth truth;

  for (std::size_t bi = 0; bi < sizes.size(); ++bi) {
    const int n = sizes[bi];
    SplitRng rb = root.split(0x100 + bi);

    std::vector<int> dims;
    std::vector<std::vector<Complex>> tuples;
    if (opts.spectra) {
      const JointSpectrum& s = (*opts.spectra)[bi];
      if (s.total_multiplicity() != n)
        throw DomainError("gen_planted: planted spectrum multiplicities must sum to block size");
      for (const auto& e : s.entries) {
        if (static_cast<int>(e.tuple.size()) != dim)
          throw DomainError("gen_planted: planted tuple arity mismatch");
        dims.push_back(e.multiplicity);
        tuples.push_back(e.tuple);
      }
    } else {
      dims = draw_partition(n, rb);
      for (std::size_t g = 0; g < dims.size(); ++g) {
        std::vector<Complex> t;
        for (int tries = 0;; ++tries) {
          t = draw_grid_tuple(dim, rb);
          bool fresh = true;
          for (const auto& prev : tuples)
            if (tuple_exact_equal(prev, t)) fresh = false;
          if (fresh) break;
          if (tries > 2000)
            throw NumericalError("gen_planted: could not draw distinct grid tuples");
        }
        tuples.push_back(std::move(t));
      }
    }

    CMat conj = opts.identity_conjugator ? CMat(CMat::Identity(n, n))
                                         : random_well_conditioned(n, rb);
    const CMat conj_inv = conj.partialPivLu().inverse();

    BlockSpec block;
    block.label = "E" + std::to_string(bi);
    block.rank = static_cast<int>(rb.uniform_int(1, 4));
    block.multiplicity = n;
    block.slope = slope;
    for (int i = 0; i < dim; ++i) {
      CVec diag(n);
      int pos = 0;
      for (std::size_t g = 0; g < dims.size(); ++g)
        for (int k = 0; k < dims[g]; ++k) diag(pos++) = tuples[g][i];
      block.higgs.push_back(conj * diag.asDiagonal() * conj_inv);
    }

    // Canonical order for the recorded truth: sort groups by tuple and
    // permute the conjugator columns to match.
    std::vector<std::size_t> order(dims.size());
    for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return tuple_compare(tuples[x], tuples[y], 0.0) < 0;
    });
    std::vector<int> offsets(dims.size(), 0);
    for (std::size_t g = 1; g < dims.size(); ++g)
      offsets[g] = offsets[g - 1] + dims[g - 1];

    PlantedBlockTruth bt;
    bt.conjugator = CMat(n, n);
    int col = 0;
    for (std::size_t g : order) {
      bt.spectrum.entries.push_back({tuples[g], dims[g]});
      bt.group_dims.push_back(dims[g]);
      bt.conjugator.middleCols(col, dims[g]) = conj.middleCols(offsets[g], dims[g]);
      col += dims[g];
    }

    datum.blocks.push_back(std::move(block));
    truth.blocks.push_back(std::move(bt));
  }
  return {std::move(datum), std::move(truth)};
}

HiggsDatum gen_negative(NegativeKind kind, int size, int dim, std::uint64_t seed) {
  if (size < 2) throw DomainError("gen_negative: size must be >= 2");
  if (dim < 1) throw DomainError("gen_negative: dim must be >= 1");
  SplitRng rng(seed);
  SplitRng rb = rng.split(0x200);

  BlockSpec block;
  block.label = "N0";
  block.rank = 1;
  block.multiplicity = size;
  block.slope = 0.0;

  switch (kind) {
    case NegativeKind::nilpotent: {
      block.higgs.push_back(jordan_block(size, 0.0));
      for (int i = 1; i < dim; ++i) block.higgs.push_back(CMat::Zero(size, size));
      break;
    }
    case NegativeKind::noncommuting: {
      if (dim < 2) throw DomainError("gen_negative: noncommuting needs dim >= 2");
      // Pauli pair in the leading 2x2 corner, commuting diagonal padding.
      CMat t1 = CMat::Zero(size, size);
      CMat t2 = CMat::Zero(size, size);
      t1(0, 1) = 1.0;
      t1(1, 0) = 1.0;
      t2(0, 0) = 1.0;
      t2(1, 1) = -1.0;
      for (int r = 2; r < size; ++r) {
        t1(r, r) = draw_grid_value(rb);
        t2(r, r) = draw_grid_value(rb);
      }
      block.higgs.push_back(t1);
      block.higgs.push_back(t2);
      for (int i = 2; i < dim; ++i) {
        CMat t = CMat::Zero(size, size);
        const Complex corner = draw_grid_value(rb);
        t(0, 0) = corner;  // scalar on the Pauli corner, commutes with it
        t(1, 1) = corner;
        for (int r = 2; r < size; ++r) t(r, r) = draw_grid_value(rb);
        block.higgs.push_back(t);
      }
      break;
    }
    case NegativeKind::nonsemisimple_mixed: {
      // {J, p_i(J)}: commuting by construction, every member defective as
      // long as the linear coefficient is nonzero.
      const Complex lambda = draw_grid_value(rb);
      const CMat j = jordan_block(size, lambda);
      block.higgs.push_back(j);
      for (int i = 1; i < dim; ++i) {
        Complex a{0.0, 0.0};
        while (a == Complex{0.0, 0.0}) a = draw_grid_value(rb);
        const Complex b = draw_grid_value(rb);
        block.higgs.push_back(a * j + b * CMat::Identity(size, size));
      }
      break;
    }
  }
  HiggsDatum datum;
  datum.dim = dim;
  datum.blocks.push_back(std::move(block));
  return datum;
}

HiggsDatum apply_trivialization_change(const HiggsDatum& datum,
                                       const ChangeOfTrivialization& a,
                                       const Tolerances& tol) {
  if (a.matrix.rows() != datum.dim || a.matrix.cols() != datum.dim)
    throw DomainError("apply_trivialization_change: matrix must be dim x dim");
  check_invertible(a.matrix, tol.tau_rank, "apply_trivialization_change");

  HiggsDatum out = datum;
  for (auto& block : out.blocks) {
    const int n = block.multiplicity;
    std::vector<CMat> fresh(datum.dim, CMat::Zero(n, n));
    for (int i = 0; i < datum.dim; ++i)
      for (int k = 0; k < datum.dim; ++k) fresh[i] += a.matrix(i, k) * block.higgs[k];
    block.higgs = std::move(fresh);
  }
  return out;
}

HiggsDatum conjugate_datum(const HiggsDatum& datum, const GaugeTransform& g,
                           const Tolerances& tol) {
  if (g.blocks.size() != datum.blocks.size())
    throw DomainError("conjugate_datum: gauge block count mismatch");
  HiggsDatum out = datum;
  for (std::size_t j = 0; j < out.blocks.size(); ++j) {
    auto& block = out.blocks[j];
    const CMat& s = g.blocks[j];
    if (s.rows() != block.multiplicity || s.cols() != block.multiplicity)
      throw DomainError("conjugate_datum: gauge shape mismatch on block " + block.label);
    check_invertible(s, tol.tau_rank, "conjugate_datum");
    const CMat sinv = s.partialPivLu().inverse();
    for (auto& t : block.higgs) t = sinv * t * s;
  }
  return out;
}

GaugeTransform random_gauge(const std::vector<int>& sizes, std::uint64_t seed) {
  SplitRng rng(seed);
  GaugeTransform g;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    SplitRng rb = rng.split(j + 1);
    g.blocks.push_back(random_well_conditioned(sizes[j], rb));
  }
  return g;
}

ChangeOfTrivialization random_trivialization(int dim, std::uint64_t seed) {
  SplitRng rng(seed);
  return {random_well_conditioned(dim, rng)};
}

std::vector<int> block_sizes(const HiggsDatum& datum) {
  std::vector<int> sizes;
  for (const auto& b : datum.blocks) sizes.push_back(b.multiplicity);
  return sizes;
}

bool datum_equal(const HiggsDatum& a, const HiggsDatum& b) {
  if (a.dim != b.dim || a.blocks.size() != b.blocks.size()) return false;
  for (std::size_t j = 0; j < a.blocks.size(); ++j) {
    const auto& x = a.blocks[j];
    const auto& y = b.blocks[j];
    if (x.label != y.label || x.rank != y.rank || x.multiplicity != y.multiplicity ||
        x.slope != y.slope || x.higgs.size() != y.higgs.size())
      return false;
    for (std::size_t i = 0; i < x.higgs.size(); ++i)
      if (x.higgs[i] != y.higgs[i]) return false;
  }
  return true;
}

}  // namespace higgs
