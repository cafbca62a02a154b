// Command-line front end: generate, check, reduce, solve, verify, and gauge
// per-block Higgs data with deterministic seeds and machine-readable reports.
//
// Exit codes: 0 affirmative verdict / success, 1 negative verdict,
// 2 usage or format error, 3 numerical failure.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "higgs/errors.hpp"
#include "higgs/io.hpp"
#include "higgs/levi.hpp"
#include "higgs/model.hpp"
#include "higgs/polystability.hpp"
#include "higgs/yang_mills.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
  higgs::Tolerances tol;
  std::string out_path;  // empty = stdout
  bool json = true;      // reports are JSON; flag kept for explicitness
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--tau-commute", opts.tol.tau_commute,
                  "relative commutator threshold (default 1e-9)");
  cmd->add_option("--tau-rank", opts.tol.tau_rank,
                  "singular-value cutoff (default 1e-10)");
  cmd->add_option("--tau-cluster", opts.tol.tau_cluster,
                  "eigenvalue clustering radius (default 1e-7)");
  cmd->add_option("--kappa-max", opts.tol.kappa_max,
                  "metric condition-number ceiling (default 1e8)");
  cmd->add_option("-o,--out", opts.out_path, "write the report here instead of stdout");
  cmd->add_flag("--json", opts.json, "emit machine-readable JSON (default)");
}

void emit_report(const CommonOpts& opts, const std::string& report,
                 const std::string& summary) {
  if (opts.out_path.empty())
    std::cout << report;
  else
    higgs::write_file(opts.out_path, report);
  std::cerr << summary << "\n";
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("HIGGS_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing");
      return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
      throw higgs::DomainError("HIGGS_SEED is not a valid unsigned integer");
    }
  }
  return 0;
}

std::string levi_summary(const higgs::PolystabilityReport& report) {
  std::vector<int> all;
  for (const auto& b : report.blocks)
    if (b.spectrum)
      for (int m : higgs::levi_type(*b.spectrum)) all.push_back(m);
  std::sort(all.rbegin(), all.rend());
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < all.size(); ++i) os << (i ? "," : "") << all[i];
  os << "]";
  return os.str();
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const higgs::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const higgs::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const higgs::NotPolystableError& e) {
    std::cerr << e.what() << "\n";
    return kExitNegative;
  } catch (const higgs::NotYangMillsError& e) {
    std::cerr << e.what() << "\n";
    return kExitNegative;
  } catch (const higgs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

struct CheckOutcome {
  int code = kExitNumerical;
  std::string report;
  std::string summary;
};

CheckOutcome run_check_one(const std::string& path, const higgs::Tolerances& tol) {
  CheckOutcome out;
  const higgs::HiggsDatum datum = higgs::parse_datum(higgs::read_file(path), tol);
  const higgs::PolystabilityReport report = higgs::check_polystable(datum, tol);
  out.report = higgs::polystability_report_json(report);
  std::ostringstream os;
  if (report.polystable()) {
    os << "polystable; blocks=" << report.blocks.size()
       << "; levi=" << levi_summary(report);
    out.code = kExitOk;
  } else {
    os << higgs::to_string(report.verdict);
    out.code = kExitNegative;
  }
  out.summary = os.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  // Single-threaded per invocation; --parallel fans out across files only.
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"Higgs data on compact complex tori: polystability, joint spectra, "
               "centralizers, and Yang-Mills metrics"};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a datum (planted or negative fixture)");
  CommonOpts gen_opts;
  std::string kind = "planted";
  int gen_dim = 2;
  std::vector<int> gen_sizes{4};
  int gen_size = 4;
  std::optional<std::uint64_t> gen_seed;
  std::string truth_out;
  gen->add_option("--kind", kind, "planted | nilpotent | noncommuting | nonsemisimple-mixed")
      ->check(CLI::IsMember({"planted", "nilpotent", "noncommuting", "nonsemisimple-mixed"}));
  gen->add_option("--dim", gen_dim, "number of Higgs components d");
  gen->add_option("--sizes", gen_sizes, "block multiplicities (planted)")->delimiter(',');
  gen->add_option("--size", gen_size, "block size (negative kinds)");
  gen->add_option("--seed", gen_seed, "generator seed (default: HIGGS_SEED or 0)");
  gen->add_option("--truth-out", truth_out, "write planted ground truth here");
  add_common(gen, gen_opts);

  // ---- check --------------------------------------------------------------
  auto* check = app.add_subcommand("check", "decide polystability");
  CommonOpts check_opts;
  std::vector<std::string> check_inputs;
  int parallel = 1;
  check->add_option("input", check_inputs, "datum file(s)")->required();
  check->add_option("--parallel", parallel, "fan out across input files");
  add_common(check, check_opts);

  // ---- spectrum -----------------------------------------------------------
  auto* spectrum = app.add_subcommand("spectrum", "canonical joint spectrum per block");
  CommonOpts spec_opts;
  std::string spec_input;
  spectrum->add_option("input", spec_input, "datum file")->required();
  add_common(spectrum, spec_opts);

  // ---- levi ---------------------------------------------------------------
  auto* levi = app.add_subcommand("levi", "centralizer basis and Levi type per block");
  CommonOpts levi_opts;
  std::string levi_input;
  levi->add_option("input", levi_input, "datum file")->required();
  add_common(levi, levi_opts);

  // ---- solve --------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "find a Yang-Mills metric (flow or direct)");
  CommonOpts solve_opts;
  std::string solve_input, metric_out, init_path;
  bool direct = false;
  higgs::FlowOptions fopts;
  solve->add_option("input", solve_input, "datum file")->required();
  solve->add_flag("--direct", direct, "construct from the joint eigenbasis (needs polystable)");
  solve->add_option("--metric-out", metric_out, "write the metric here");
  solve->add_option("--init", init_path, "initial metric file (default: identity)");
  solve->add_option("--steps", fopts.max_steps, "flow step budget (default 50000)");
  solve->add_option("--lr", fopts.step_size, "initial step size, relative (default 0.05)");
  solve->add_option("--history-stride", fopts.history_stride,
                    "keep every k-th residual sample (default 1)");
  add_common(solve, solve_opts);

  // ---- verify -------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Yang-Mills / Einstein-Hermitian residual check");
  CommonOpts verify_opts;
  std::string verify_datum, verify_metric;
  verify->add_option("input", verify_datum, "datum file")->required();
  verify->add_option("metric", verify_metric, "metric file")->required();
  add_common(verify, verify_opts);

  // ---- gauge --------------------------------------------------------------
  auto* gauge = app.add_subcommand("gauge", "apply a gauge transform to a datum or metric");
  CommonOpts gauge_opts;
  std::string gauge_file, gauge_datum_in, gauge_metric_in;
  gauge->add_option("--gauge", gauge_file, "gauge file")->required();
  gauge->add_option("--datum", gauge_datum_in, "conjugate this datum");
  gauge->add_option("--metric", gauge_metric_in, "transform this metric (H -> g^H g)");
  add_common(gauge, gauge_opts);

  // ---- trivialize ---------------------------------------------------------
  auto* triv = app.add_subcommand("trivialize", "apply a change of trivialization");
  CommonOpts triv_opts;
  std::string triv_input, triv_change;
  triv->add_option("input", triv_input, "datum file")->required();
  triv->add_option("--change", triv_change, "trivialization file")->required();
  add_common(triv, triv_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) {
    return guarded([&]() {
      const std::uint64_t seed = resolve_seed(gen_seed);
      higgs::HiggsDatum datum;
      std::string truth_bytes;
      if (kind == "planted") {
        auto [d, truth] = higgs::gen_planted(gen_dim, gen_sizes, seed);
        datum = std::move(d);
        std::vector<std::string> labels;
        for (const auto& b : datum.blocks) labels.push_back(b.label);
        truth_bytes = higgs::serialize_truth(truth, labels);
      } else {
        const higgs::NegativeKind nk =
            kind == "nilpotent" ? higgs::NegativeKind::nilpotent
            : kind == "noncommuting" ? higgs::NegativeKind::noncommuting
                                     : higgs::NegativeKind::nonsemisimple_mixed;
        datum = higgs::gen_negative(nk, gen_size, gen_dim, seed);
      }
      if (!truth_out.empty()) {
        if (truth_bytes.empty())
          throw higgs::DomainError("--truth-out is only meaningful for --kind planted");
        higgs::write_file(truth_out, truth_bytes);
      }
      emit_report(gen_opts, higgs::serialize_datum(datum),
                  "generated " + kind + " datum; seed=" + std::to_string(seed));
      return kExitOk;
    });
  }

  if (check->parsed()) {
    if (check_inputs.size() == 1) {
      return guarded([&]() {
        const CheckOutcome oc = run_check_one(check_inputs.front(), check_opts.tol);
        emit_report(check_opts, oc.report, oc.summary);
        return oc.code;
      });
    }
    // Fan out across files; results are collected in input order.
    std::vector<CheckOutcome> outcomes(check_inputs.size());
    const int workers =
        std::max(1, std::min<int>(parallel, static_cast<int>(check_inputs.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < check_inputs.size();
           i = next.fetch_add(1)) {
        outcomes[i].code = guarded([&]() {
          CheckOutcome oc = run_check_one(check_inputs[i], check_opts.tol);
          outcomes[i] = oc;
          return oc.code;
        });
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream combined;
    combined << "[\n";
    int worst = kExitOk;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      std::string r = outcomes[i].report.empty() ? "null\n" : outcomes[i].report;
      if (!r.empty() && r.back() == '\n') r.pop_back();
      combined << r << (i + 1 < outcomes.size() ? ",\n" : "\n");
      std::cerr << check_inputs[i] << ": " << outcomes[i].summary << "\n";
      worst = std::max(worst, outcomes[i].code);
    }
    combined << "]\n";
    if (check_opts.out_path.empty())
      std::cout << combined.str();
    else
      higgs::write_file(check_opts.out_path, combined.str());
    return worst;
  }

  if (spectrum->parsed()) {
    return guarded([&]() {
      const higgs::HiggsDatum datum =
          higgs::parse_datum(higgs::read_file(spec_input), spec_opts.tol);
      std::vector<std::string> labels;
      std::vector<higgs::JointSpectrum> spectra;
      for (const auto& b : datum.blocks) {
        labels.push_back(b.label);
        spectra.push_back(higgs::joint_spectrum(b.higgs, spec_opts.tol));
      }
      emit_report(spec_opts, higgs::spectrum_report_json(labels, spectra),
                  "spectrum; blocks=" + std::to_string(datum.blocks.size()));
      return kExitOk;
    });
  }

  if (levi->parsed()) {
    return guarded([&]() {
      const higgs::HiggsDatum datum =
          higgs::parse_datum(higgs::read_file(levi_input), levi_opts.tol);
      std::vector<std::string> labels;
      std::vector<higgs::CentralizerResult> results;
      for (const auto& b : datum.blocks) {
        labels.push_back(b.label);
        results.push_back(higgs::centralizer_basis(b.higgs, levi_opts.tol));
      }
      std::ostringstream os;
      os << "centralizer dims=[";
      for (std::size_t i = 0; i < results.size(); ++i)
        os << (i ? "," : "") << results[i].dim;
      os << "]";
      emit_report(levi_opts, higgs::centralizer_report_json(labels, results), os.str());
      return kExitOk;
    });
  }

  if (solve->parsed()) {
    return guarded([&]() {
      const higgs::HiggsDatum datum =
          higgs::parse_datum(higgs::read_file(solve_input), solve_opts.tol);
      fopts.tol = solve_opts.tol;
      if (direct) {
        const higgs::MetricDatum metric = higgs::construct_ym_metric(datum, solve_opts.tol);
        if (!metric_out.empty())
          higgs::write_file(metric_out, higgs::serialize_metric(metric));
        const higgs::YMReport report = higgs::ym_report(datum, metric, solve_opts.tol);
        std::ostringstream os;
        os << "constructed; flatness=" << report.flatness_residual;
        emit_report(solve_opts, higgs::ym_report_json(report), os.str());
        return kExitOk;
      }
      std::optional<higgs::MetricDatum> initial;
      if (!init_path.empty())
        initial = higgs::parse_metric(higgs::read_file(init_path));
      const higgs::FlowResult result = higgs::flow_solve(datum, initial, fopts);
      if (!metric_out.empty())
        higgs::write_file(metric_out, higgs::serialize_metric(result.metric));
      std::ostringstream os;
      os << higgs::to_string(result.verdict) << "; steps=" << result.steps
         << "; residual=" << result.final_residual;
      emit_report(solve_opts, higgs::flow_result_json(result, fopts.history_stride),
                  os.str());
      switch (result.verdict) {
        case higgs::FlowVerdict::converged: return kExitOk;
        case higgs::FlowVerdict::degenerating: return kExitNegative;
        case higgs::FlowVerdict::budget_exhausted: return kExitNumerical;
      }
      return kExitNumerical;
    });
  }

  if (verify->parsed()) {
    return guarded([&]() {
      const higgs::HiggsDatum datum =
          higgs::parse_datum(higgs::read_file(verify_datum), verify_opts.tol);
      const higgs::MetricDatum metric =
          higgs::parse_metric(higgs::read_file(verify_metric));
      const higgs::YMReport report = higgs::ym_report(datum, metric, verify_opts.tol);
      bool ym_ok = true;
      for (const auto& b : report.blocks)
        ym_ok = ym_ok && b.ym_residual <= 1e-6 * b.scale;
      std::ostringstream os;
      os << (ym_ok ? "yang-mills" : "not yang-mills")
         << (report.eh_verdict ? "; einstein-hermitian" : "; not einstein-hermitian")
         << "; ym=" << report.ym_residual << "; flatness=" << report.flatness_residual;
      emit_report(verify_opts, higgs::ym_report_json(report), os.str());
      return (ym_ok && report.eh_verdict) ? kExitOk : kExitNegative;
    });
  }

  if (gauge->parsed()) {
    return guarded([&]() {
      if (gauge_datum_in.empty() == gauge_metric_in.empty())
        throw higgs::DomainError("gauge: pass exactly one of --datum or --metric");
      const higgs::GaugeTransform g = higgs::parse_gauge(higgs::read_file(gauge_file));
      if (!gauge_datum_in.empty()) {
        const higgs::HiggsDatum datum =
            higgs::parse_datum(higgs::read_file(gauge_datum_in), gauge_opts.tol);
        const higgs::HiggsDatum out = higgs::conjugate_datum(datum, g, gauge_opts.tol);
        emit_report(gauge_opts, higgs::serialize_datum(out), "conjugated datum");
      } else {
        const higgs::MetricDatum metric =
            higgs::parse_metric(higgs::read_file(gauge_metric_in));
        const higgs::MetricDatum out = higgs::apply_gauge(metric, g, gauge_opts.tol);
        emit_report(gauge_opts, higgs::serialize_metric(out), "transformed metric");
      }
      return kExitOk;
    });
  }

  if (triv->parsed()) {
    return guarded([&]() {
      const higgs::HiggsDatum datum =
          higgs::parse_datum(higgs::read_file(triv_input), triv_opts.tol);
      const higgs::ChangeOfTrivialization change =
          higgs::parse_trivialization(higgs::read_file(triv_change));
      const higgs::HiggsDatum out =
          higgs::apply_trivialization_change(datum, change, triv_opts.tol);
      emit_report(triv_opts, higgs::serialize_datum(out), "trivialization changed");
      return kExitOk;
    });
  }

  return kExitUsage;
}
