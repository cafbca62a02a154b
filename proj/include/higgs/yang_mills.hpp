#pragma once

#include <optional>
#include <string>
#include <vector>

#include "higgs/linalg.hpp"
#include "higgs/model.hpp"

namespace higgs {

/// Per-block Hermitian positive-definite metric, determinant-normalized.
/// Cross-block terms are structurally zero (the summands are orthogonal).
struct MetricDatum {
  std::vector<CMat> blocks;
};

struct BlockYMReport {
  std::string label;
  double ym_residual = 0.0;        // ||sum_i [T^i, (T^i)*_H]||_F
  double flatness_residual = 0.0;  // max_{i,k} ||[T^i, (T^k)*_H]||_F
  double scale = 1.0;
};

struct YMReport {
  double ym_residual = 0.0;              // max over blocks
  double flatness_residual = 0.0;        // max over blocks
  double einstein_constant_theta = 0.0;  // max over blocks of |tr|/n, ~0 always
  bool eh_verdict = false;               // flatness <= 1e-6 * scale per block
  double scale = 1.0;
  std::vector<BlockYMReport> blocks;
};

enum class FlowVerdict { converged, degenerating, budget_exhausted };

std::string to_string(FlowVerdict v);

struct FlowOptions {
  int max_steps = 50000;
  double step_size = 0.05;     // initial step, divided by the block scale
  double converged_rel = 1e-6; // verdict threshold, relative to block scale
  double target_rel = 1e-8;    // polish target; headroom for flatness checks
  int history_stride = 1;      // keep every k-th residual sample
  Tolerances tol{};
};

struct FlowResult {
  MetricDatum metric;
  int steps = 0;
  std::vector<double> residual_history;  // absolute, max over blocks
  double max_condition = 1.0;
  FlowVerdict verdict = FlowVerdict::budget_exhausted;
  double final_residual = 0.0;
  double scale = 1.0;
};

/// Identity metric with the datum's block sizes.
MetricDatum identity_metric(const HiggsDatum& datum);

/// Quadratic scale max(1, max ||T^i||_F^2), maximized over blocks.
double datum_scale(const HiggsDatum& datum);

/// Throws DomainError unless every block is Hermitian positive definite of
/// the right size with |det - 1| <= 1e-10.
void validate_metric(const HiggsDatum& datum, const MetricDatum& metric,
                     const Tolerances& tol);

/// The joint-eigenbasis metric: per block take the canonical eigenbasis B
/// (column-echelon scaling, canonical spectrum order), set H = B^{-dagger}
/// B^{-1} and normalize det H = 1. Distinct joint eigenspaces come out
/// H-orthogonal, so theta wedge theta^* vanishes. Requires polystable input.
MetricDatum construct_ym_metric(const HiggsDatum& datum, const Tolerances& tol = {});

/// Per block sum_i [T^i, (T^i)*_H] and all mixed commutators; fills every
/// report field.
YMReport ym_report(const HiggsDatum& datum, const MetricDatum& metric,
                   const Tolerances& tol = {});

/// max over blocks and component pairs (i,k) of ||[T^i, (T^k)*_H]||_F.
double flatness_residual(const HiggsDatum& datum, const MetricDatum& metric,
                         const Tolerances& tol = {});

/// H'_j = g_j^dagger H_j g_j, renormalized to det 1.
MetricDatum apply_gauge(const MetricDatum& metric, const GaugeTransform& g,
                        const Tolerances& tol = {});

/// Moment-map descent H <- H - eps H M(H), M(H) = sum_i [T^i, (T^i)*_H],
/// with Hermitian symmetrization, det renormalization, and energy-descent
/// backtracking (step grows on success). Verdicts, never errors:
/// converged (residual at threshold), degenerating (condition number crossed
/// kappa_max while the residual was still falling), budget_exhausted.
FlowResult flow_solve(const HiggsDatum& datum,
                      const std::optional<MetricDatum>& initial = std::nullopt,
                      const FlowOptions& opts = {});

/// Certifies a Yang-Mills metric as Einstein-Hermitian: requires
/// ym_residual <= 1e-6 * scale (else NotYangMillsError) and reports
/// eh_verdict = (flatness <= 1e-6 * scale).
YMReport eh_report(const HiggsDatum& datum, const MetricDatum& metric,
                   const Tolerances& tol = {});

}  // namespace higgs
