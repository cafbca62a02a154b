#include "higgs/yang_mills.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "higgs/errors.hpp"
#include "higgs/polystability.hpp"

namespace higgs {

namespace {

constexpr double kEhThresholdRel = 1e-6;
constexpr double kConstructThresholdRel = 1e-8;
constexpr double kDetTolerance = 1e-10;

void renormalize_det(CMat& h) {
  const int n = static_cast<int>(h.rows());
  if (n == 0) return;
  const double det = h.determinant().real();
  if (!(det > 0.0)) throw NumericalError("metric determinant is not positive");
  h /= std::pow(det, 1.0 / n);
}

double block_scale(const BlockSpec& block) { return family_scale(block.higgs); }

// Shift-invariant scale for the flow: the moment map is unchanged by
// T -> T + cI, so its thresholds must be measured against the traceless
// parts. A scalar-heavy defective family would otherwise look converged.
double block_flow_scale(const BlockSpec& block) {
  double s = 1.0;
  for (const auto& t : block.higgs) {
    const int n = static_cast<int>(t.rows());
    const CMat traceless = t - (t.trace() / static_cast<double>(n)) * CMat::Identity(n, n);
    s = std::max(s, traceless.squaredNorm());
  }
  return s;
}

// Canonical column-echelon scaling of an orthonormal subspace basis: greedy
// max-modulus pivots, pivot entries exactly 1, other pivot rows eliminated.
// Makes the basis a function of the subspace alone (given the pivot rows).
CMat echelon_scaled(const CMat& v) {
  CMat w = v;
  const int n = static_cast<int>(w.rows());
  const int m = static_cast<int>(w.cols());
  std::vector<bool> used(n, false);
  for (int c = 0; c < m; ++c) {
    int pivot = -1;
    double best = -1.0;
    for (int r = 0; r < n; ++r) {
      if (used[r]) continue;
      const double mag = std::abs(w(r, c));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (pivot < 0 || best <= 0.0)
      throw NumericalError("echelon scaling: degenerate group basis");
    used[pivot] = true;
    w.col(c) /= w(pivot, c);
    for (int c2 = 0; c2 < m; ++c2) {
      if (c2 == c) continue;
      w.col(c2) -= w(pivot, c2) * w.col(c);
    }
  }
  return w;
}

struct BlockTerms {
  std::vector<CMat> adjoints;  // (T^i)*_H
  CMat moment;                 // sum_i [T^i, (T^i)*_H]
  Eigen::LLT<CMat> llt;        // factorization of H
};

BlockTerms block_terms(const BlockSpec& block, const CMat& h, const Tolerances&) {
  BlockTerms out;
  const int n = block.multiplicity;
  out.llt.compute(h);
  if (out.llt.info() != Eigen::Success)
    throw DomainError("metric block " + block.label + " is not positive definite");
  out.moment = CMat::Zero(n, n);
  for (const auto& t : block.higgs) {
    CMat adj = out.llt.solve(t.adjoint() * h);
    out.moment += t * adj - adj * t;
    out.adjoints.push_back(std::move(adj));
  }
  return out;
}

// Residuals are measured in the metric-weighted norm ||M||_H^2 =
// tr(H^{-1} M^dagger H M): it coincides with Frobenius at H = Id and is
// invariant under the gauge action H -> g^dagger H g, M -> g^{-1} M g.
double weighted_norm(const CMat& m, const CMat& h, const Eigen::LLT<CMat>& llt) {
  const double v = llt.solve(m.adjoint() * h * m).trace().real();
  return std::sqrt(std::max(0.0, v));
}

// Kempf-Ness style energy sum_i tr(H^{-1} T^dagger H T) = sum_i ||T||_H^2;
// strictly decreasing along the flow away from critical points.
double flow_energy(const BlockSpec& block, const CMat& h, const Eigen::LLT<CMat>& llt) {
  double e = 0.0;
  for (const auto& t : block.higgs)
    e += llt.solve(t.adjoint() * h * t).trace().real();
  return e;
}

}  // namespace

std::string to_string(FlowVerdict v) {
  switch (v) {
    case FlowVerdict::converged: return "converged";
    case FlowVerdict::degenerating: return "degenerating";
    case FlowVerdict::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

MetricDatum identity_metric(const HiggsDatum& datum) {
  MetricDatum m;
  for (const auto& b : datum.blocks)
    m.blocks.push_back(CMat::Identity(b.multiplicity, b.multiplicity));
  return m;
}

double datum_scale(const HiggsDatum& datum) {
  double s = 1.0;
  for (const auto& b : datum.blocks) s = std::max(s, block_scale(b));
  return s;
}

void validate_metric(const HiggsDatum& datum, const MetricDatum& metric,
                     const Tolerances& tol) {
  if (metric.blocks.size() != datum.blocks.size())
    throw DomainError("metric block count does not match the datum");
  for (std::size_t j = 0; j < metric.blocks.size(); ++j) {
    const auto& h = metric.blocks[j];
    const int n = datum.blocks[j].multiplicity;
    if (h.rows() != n || h.cols() != n)
      throw DomainError("metric block " + datum.blocks[j].label + " has wrong size");
    if (!all_finite(h))
      throw DomainError("metric block " + datum.blocks[j].label + " has non-finite entries");
    if (!is_positive_definite(h, tol))
      throw DomainError("metric block " + datum.blocks[j].label +
                        " is not Hermitian positive definite");
    if (std::abs(h.determinant().real() - 1.0) > kDetTolerance)
      throw DomainError("metric block " + datum.blocks[j].label +
                        " is not determinant-normalized");
  }
}

MetricDatum construct_ym_metric(const HiggsDatum& datum, const Tolerances& tol) {
  const PolystabilityReport report = check_polystable(datum, tol);
  if (!report.polystable())
    throw NotPolystableError("construct_ym_metric: datum is not polystable (" +
                             to_string(report.verdict) + ")");
  MetricDatum metric;
  for (const auto& block : datum.blocks) {
    const JointEigenDecomposition dec = joint_eigenspaces(block.higgs, tol);
    const int n = block.multiplicity;
    CMat b(n, n);
    int col = 0;
    for (int m : dec.group_sizes) {
      b.middleCols(col, m) = echelon_scaled(dec.basis.middleCols(col, m));
      col += m;
    }
    const Eigen::PartialPivLU<CMat> lu(b);
    const CMat binv = lu.inverse();
    CMat h = binv.adjoint() * binv;
    h = (h + CMat(h.adjoint())) / 2.0;
    renormalize_det(h);
    if (!(hermitian_condition(h) <= tol.kappa_max))
      throw NumericalError("construct_ym_metric: metric condition number exceeds ceiling");
    metric.blocks.push_back(std::move(h));
  }
  const double flat = flatness_residual(datum, metric, tol);
  if (!(flat <= kConstructThresholdRel * datum_scale(datum)))
    throw NumericalError("construct_ym_metric: flatness residual above construction bound");
  return metric;
}

YMReport ym_report(const HiggsDatum& datum, const MetricDatum& metric,
                   const Tolerances& tol) {
  validate_metric(datum, metric, tol);
  YMReport out;
  bool eh = true;
  for (std::size_t j = 0; j < datum.blocks.size(); ++j) {
    const auto& block = datum.blocks[j];
    const auto& h = metric.blocks[j];
    const BlockTerms terms = block_terms(block, h, tol);

    BlockYMReport br;
    br.label = block.label;
    br.scale = block_scale(block);
    br.ym_residual = weighted_norm(terms.moment, h, terms.llt);
    for (const auto& t : block.higgs)
      for (const auto& adj : terms.adjoints)
        br.flatness_residual = std::max(
            br.flatness_residual, weighted_norm(t * adj - adj * t, h, terms.llt));
    const double trace_part =
        std::abs(terms.moment.trace()) / static_cast<double>(block.multiplicity);

    eh = eh && br.flatness_residual <= kEhThresholdRel * br.scale;
    out.ym_residual = std::max(out.ym_residual, br.ym_residual);
    out.flatness_residual = std::max(out.flatness_residual, br.flatness_residual);
    out.einstein_constant_theta = std::max(out.einstein_constant_theta, trace_part);
    out.scale = std::max(out.scale, br.scale);
    out.blocks.push_back(std::move(br));
  }
  out.eh_verdict = eh;
  return out;
}

double flatness_residual(const HiggsDatum& datum, const MetricDatum& metric,
                         const Tolerances& tol) {
  return ym_report(datum, metric, tol).flatness_residual;
}

MetricDatum apply_gauge(const MetricDatum& metric, const GaugeTransform& g,
                        const Tolerances& tol) {
  if (g.blocks.size() != metric.blocks.size())
    throw DomainError("apply_gauge: gauge block count mismatch");
  MetricDatum out;
  for (std::size_t j = 0; j < metric.blocks.size(); ++j) {
    const auto& h = metric.blocks[j];
    const auto& s = g.blocks[j];
    if (s.rows() != h.rows() || s.cols() != h.cols())
      throw DomainError("apply_gauge: gauge shape mismatch");
    CMat fresh = s.adjoint() * h * s;
    fresh = (fresh + CMat(fresh.adjoint())) / 2.0;
    renormalize_det(fresh);
    out.blocks.push_back(std::move(fresh));
  }
  return out;
}

FlowResult flow_solve(const HiggsDatum& datum, const std::optional<MetricDatum>& initial,
                      const FlowOptions& opts) {
  const ValidationReport vr = validate(datum, opts.tol);
  if (!vr.ok()) throw DomainError("flow_solve: datum is invalid\n" + vr.to_string());

  const std::size_t nblocks = datum.blocks.size();
  MetricDatum h = initial.value_or(identity_metric(datum));
  for (auto& hb : h.blocks) renormalize_det(hb);
  validate_metric(datum, h, opts.tol);

  std::vector<double> scale(nblocks), eps(nblocks), energy(nblocks);
  std::vector<bool> frozen(nblocks, false);  // converged or stalled blocks
  for (std::size_t j = 0; j < nblocks; ++j) {
    scale[j] = block_flow_scale(datum.blocks[j]);
    eps[j] = opts.step_size / scale[j];
    Eigen::LLT<CMat> llt(h.blocks[j]);
    energy[j] = flow_energy(datum.blocks[j], h.blocks[j], llt);
  }

  FlowResult result;
  result.scale = *std::max_element(scale.begin(), scale.end());  // shift-invariant

  auto residuals = [&](const MetricDatum& metric) {
    std::vector<double> r(nblocks);
    for (std::size_t j = 0; j < nblocks; ++j) {
      const BlockTerms terms = block_terms(datum.blocks[j], metric.blocks[j], opts.tol);
      r[j] = weighted_norm(terms.moment, metric.blocks[j], terms.llt);
    }
    return r;
  };
  auto track_condition = [&](const MetricDatum& metric) {
    double worst = 1.0;
    for (const auto& hb : metric.blocks)
      worst = std::max(worst, hermitian_condition(hb));
    result.max_condition = std::max(result.max_condition, worst);
    return worst;
  };
  auto worst_rel = [&](const std::vector<double>& r) {
    double w = 0.0;
    for (std::size_t j = 0; j < nblocks; ++j) w = std::max(w, r[j] / scale[j]);
    return w;
  };

  std::vector<double> res = residuals(h);
  track_condition(h);
  result.residual_history.push_back(*std::max_element(res.begin(), res.end()));

  int step = 0;
  bool tripped = false;
  for (; step < opts.max_steps; ++step) {
    if (worst_rel(res) <= opts.target_rel) break;

    bool any_movement = false;
    for (std::size_t j = 0; j < nblocks; ++j) {
      if (frozen[j] || res[j] <= opts.target_rel * scale[j]) continue;
      const auto& block = datum.blocks[j];
      const BlockTerms terms = block_terms(block, h.blocks[j], opts.tol);
      const CMat direction = h.blocks[j] * terms.moment;  // Hermitian

      // Energy of H - e * direction, or nothing if positivity is lost.
      auto probe = [&](double e) -> std::optional<std::pair<CMat, double>> {
        CMat candidate = h.blocks[j] - e * direction;
        candidate = (candidate + CMat(candidate.adjoint())) / 2.0;
        Eigen::LLT<CMat> llt(candidate);
        if (llt.info() != Eigen::Success) return std::nullopt;
        const double en = flow_energy(block, candidate, llt);
        if (!std::isfinite(en)) return std::nullopt;
        return std::make_pair(std::move(candidate), en);
      };

      // Backtrack from the warm-started step until the energy decreases,
      // then extend by doubling while it keeps decreasing (line search).
      double e_cur = eps[j];
      auto best = probe(e_cur);
      int halvings = 0;
      const double slack = 1e-12 * (1.0 + std::abs(energy[j]));
      while ((!best || best->second > energy[j] + slack) && halvings < 60) {
        e_cur *= 0.5;
        best = probe(e_cur);
        ++halvings;
      }
      if (!best || best->second > energy[j] + slack) {
        frozen[j] = true;  // no productive step at any size
        continue;
      }
      for (int doublings = 0; doublings < 25; ++doublings) {
        auto wider = probe(e_cur * 2.0);
        if (!wider || wider->second >= best->second) break;
        e_cur *= 2.0;
        best = std::move(wider);
      }

      renormalize_det(best->first);
      h.blocks[j] = std::move(best->first);
      energy[j] = best->second;
      eps[j] = e_cur;
      any_movement = true;
    }

    res = residuals(h);
    const double cond = track_condition(h);
    if ((step + 1) % std::max(1, opts.history_stride) == 0)
      result.residual_history.push_back(*std::max_element(res.begin(), res.end()));
    if (cond > opts.tol.kappa_max) {
      ++step;
      tripped = true;
      break;
    }
    if (!any_movement) {
      ++step;
      break;
    }
  }

  result.metric = h;
  result.steps = step;
  result.final_residual = *std::max_element(res.begin(), res.end());
  if (result.residual_history.empty() ||
      result.residual_history.back() != result.final_residual)
    result.residual_history.push_back(result.final_residual);

  // Degeneration wins: a converged verdict requires bounded conditioning.
  if (tripped)
    result.verdict = FlowVerdict::degenerating;
  else if (worst_rel(res) <= opts.converged_rel)
    result.verdict = FlowVerdict::converged;
  else
    result.verdict = FlowVerdict::budget_exhausted;
  return result;
}

YMReport eh_report(const HiggsDatum& datum, const MetricDatum& metric,
                   const Tolerances& tol) {
  YMReport report = ym_report(datum, metric, tol);
  for (const auto& br : report.blocks)
    if (br.ym_residual > kEhThresholdRel * br.scale)
      throw NotYangMillsError("eh_report: metric is not Yang-Mills on block " + br.label);
  return report;
}

}  // namespace higgs
