// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.
//
// Usage: acceptance <path-to-higgs-binary> <fixtures-dir>
// (the CLI path and fixtures are only needed by the plumbing criterion).

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "higgs/errors.hpp"
#include "higgs/io.hpp"
#include "higgs/levi.hpp"
#include "higgs/model.hpp"
#include "higgs/polystability.hpp"
#include "higgs/rng.hpp"
#include "higgs/yang_mills.hpp"
#include "support/exact_oracle.hpp"

namespace fs = std::filesystem;
using namespace higgs;

namespace {

const Tolerances kTol{};
int g_failed_criteria = 0;

struct Criterion {
  std::string name;
  bool ok = true;
  int checks = 0;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond) {
      ok = false;
      if (notes.size() < 8) notes.push_back(what);
    }
  }
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void finish() const {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("[%s] %s (%d checks, %.1f s)\n", ok ? "PASS" : "FAIL", name.c_str(),
                checks, secs);
    for (const auto& n : notes) std::printf("         %s\n", n.c_str());
    if (!ok) ++g_failed_criteria;
  }
};

struct Instance {
  HiggsDatum datum;
  PlantedTruth truth;
};

// 200 planted instances at the target sizes (n_j <= 16, d <= 4, up to 3 blocks).
std::vector<Instance> planted_corpus(std::uint64_t seed, int count, int max_size,
                                     int max_dim, int max_blocks) {
  std::vector<Instance> out;
  SplitRng rng(seed);
  for (int i = 0; i < count; ++i) {
    SplitRng r = rng.split(i);
    const int d = 1 + static_cast<int>(r.uniform_int(0, max_dim - 1));
    const int nb = 1 + static_cast<int>(r.uniform_int(0, max_blocks - 1));
    std::vector<int> sizes;
    for (int b = 0; b < nb; ++b)
      sizes.push_back(1 + static_cast<int>(r.uniform_int(0, max_size - 1)));
    auto [datum, truth] = gen_planted(d, sizes, r.next_u64());
    out.push_back({std::move(datum), std::move(truth)});
  }
  return out;
}

std::vector<HiggsDatum> negative_corpus(std::uint64_t seed, int count,
                                        bool include_noncommuting) {
  std::vector<HiggsDatum> out;
  SplitRng rng(seed);
  for (int i = 0; i < count; ++i) {
    SplitRng r = rng.split(i);
    const int size = 2 + static_cast<int>(r.uniform_int(0, 8));
    const int kind = include_noncommuting ? i % 3 : i % 2;
    if (kind == 0)
      out.push_back(gen_negative(NegativeKind::nilpotent, size,
                                 1 + (int)r.uniform_int(0, 3), r.next_u64()));
    else if (kind == 1)
      out.push_back(gen_negative(NegativeKind::nonsemisimple_mixed, size,
                                 1 + (int)r.uniform_int(0, 3), r.next_u64()));
    else
      out.push_back(gen_negative(NegativeKind::noncommuting, size,
                                 2 + (int)r.uniform_int(0, 2), r.next_u64()));
  }
  return out;
}

NegativeKind kind_of(const HiggsDatum& datum) {
  // negatives are single-block; recover the planted failure kind
  const auto& fam = datum.blocks[0].higgs;
  if (commutation_residual(fam) > kTol.tau_commute * family_scale(fam))
    return NegativeKind::noncommuting;
  return NegativeKind::nonsemisimple_mixed;  // defective kinds share the verdict
}

int run_cli(const std::string& cli, const std::string& args) {
  const int raw = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  setenv("OPENBLAS_NUM_THREADS", "1", 0);  // two-core sandbox, avoid oversubscription
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path fixtures = argc > 2 ? fs::path(argv[2]) : fs::path();

  const auto corpus = planted_corpus(0xACCE97, 200, 16, 4, 3);
  const auto negatives = negative_corpus(0xACCE98, 200, /*include_noncommuting=*/true);

  // ---- 1: planted/negative verdicts ---------------------------------------
  {
    Criterion c{"criterion 1: polystability verdicts on 200 planted + 200 negatives"};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const PolystabilityReport rep = check_polystable(corpus[i].datum, kTol);
      c.expect(rep.polystable(), "planted instance " + std::to_string(i) + " not polystable");
      c.expect(rep.commutation_residual <= 1e-10 * rep.scale,
               "commutation residual above 1e-10 * scale on instance " + std::to_string(i));
    }
    for (std::size_t i = 0; i < negatives.size(); ++i) {
      const PolystabilityReport rep = check_polystable(negatives[i], kTol);
      const PolyVerdict expect = kind_of(negatives[i]) == NegativeKind::noncommuting
                                     ? PolyVerdict::fails_commutation
                                     : PolyVerdict::fails_semisimplicity;
      c.expect(rep.verdict == expect,
               "negative " + std::to_string(i) + " verdict " + to_string(rep.verdict));
    }
    c.finish();
  }

  // ---- 2: constructed metric flatness --------------------------------------
  {
    Criterion c{"criterion 2: constructed metrics reach 1e-8 flatness on every instance"};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const double scale = datum_scale(corpus[i].datum);
      const MetricDatum m = construct_ym_metric(corpus[i].datum, kTol);
      const YMReport rep = ym_report(corpus[i].datum, m, kTol);
      c.expect(rep.flatness_residual <= 1e-8 * scale,
               "flatness " + std::to_string(rep.flatness_residual) + " on " + std::to_string(i));
      c.expect(rep.ym_residual <= 1e-8 * scale,
               "ym residual " + std::to_string(rep.ym_residual) + " on " + std::to_string(i));
    }
    c.finish();
  }

  // ---- 3: hand-verified fixture --------------------------------------------
  {
    Criterion c{"criterion 3: hand fixture T=[[1,1],[0,2]] gives H=[[1,-1],[-1,2]]"};
    HiggsDatum hand;
    hand.dim = 1;
    BlockSpec b;
    b.label = "E0";
    b.multiplicity = 2;
    CMat t(2, 2);
    t << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(2, 0);
    b.higgs.push_back(t);
    hand.blocks.push_back(b);

    const MetricDatum m = construct_ym_metric(hand, kTol);
    CMat expected(2, 2);
    expected << Complex(1, 0), Complex(-1, 0), Complex(-1, 0), Complex(2, 0);
    c.expect((m.blocks[0] - expected).norm() <= 1e-12, "metric entries");
    c.expect(std::abs(m.blocks[0].determinant().real() - 1.0) <= 1e-12, "det 1");
    c.expect((h_adjoint(t, m.blocks[0]) - t).norm() <= 1e-12, "T is H-self-adjoint");
    const YMReport rep = ym_report(hand, m, kTol);
    c.expect(rep.ym_residual <= 1e-12, "ym residual ~ 0");
    c.expect(rep.flatness_residual <= 1e-12, "flatness ~ 0");
    c.finish();
  }

  // ---- 4: equivariance ------------------------------------------------------
  {
    Criterion c{"criterion 4: spectrum/centralizer equivariance, dim = sum m_a^2"};
    // dimension law on every planted instance
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      for (std::size_t bjx = 0; bjx < corpus[i].datum.blocks.size(); ++bjx) {
        const CentralizerResult cent =
            centralizer_basis(corpus[i].datum.blocks[bjx].higgs, kTol);
        int expected = 0;
        for (int m : corpus[i].truth.blocks[bjx].group_dims) expected += m * m;
        c.expect(cent.dim == expected,
                 "dim law on instance " + std::to_string(i) + " block " + std::to_string(bjx));
      }
    }
    // spectrum invariance under 100 conjugations per instance (30 instances)
    SplitRng rng(0xACCE99);
    const auto spec_set = planted_corpus(0xACCE9A, 30, 10, 3, 2);
    for (std::size_t i = 0; i < spec_set.size(); ++i) {
      const auto& datum = spec_set[i].datum;
      std::vector<JointSpectrum> base;
      for (const auto& blk : datum.blocks)
        base.push_back(joint_spectrum(blk.higgs, kTol));
      for (int rep = 0; rep < 100; ++rep) {
        const GaugeTransform g = random_gauge(block_sizes(datum), rng.next_u64());
        const HiggsDatum conj = conjugate_datum(datum, g, kTol);
        for (std::size_t bjx = 0; bjx < conj.blocks.size(); ++bjx) {
          const JointSpectrum moved = joint_spectrum(conj.blocks[bjx].higgs, kTol);
          c.expect(spectra_match(base[bjx], moved, 1e-7),
                   "spectrum moved on instance " + std::to_string(i));
        }
      }
    }
    // centralizer equivariance under 100 conjugations per instance (20 small)
    const auto cent_set = planted_corpus(0xACCE9B, 20, 6, 3, 1);
    for (std::size_t i = 0; i < cent_set.size(); ++i) {
      const auto& fam = cent_set[i].datum.blocks[0].higgs;
      const CentralizerResult base = centralizer_basis(fam, kTol);
      for (int rep = 0; rep < 100; ++rep) {
        const GaugeTransform g =
            random_gauge(block_sizes(cent_set[i].datum), rng.next_u64());
        const HiggsDatum conj = conjugate_datum(cent_set[i].datum, g, kTol);
        const CentralizerResult moved = centralizer_basis(conj.blocks[0].higgs, kTol);
        c.expect(moved.dim == base.dim, "dim changed under conjugation");
        const CMat ginv = g.blocks[0].partialPivLu().inverse();
        bool span_ok = true;
        for (const auto& x : base.basis) {
          const CMat pushed = ginv * x * g.blocks[0];
          span_ok = span_ok &&
                    span_residual(moved.basis, pushed) <= 1e-7 * std::max(1.0, pushed.norm());
        }
        c.expect(span_ok, "centralizer span not equivariant on instance " + std::to_string(i));
      }
    }
    c.finish();
  }

  // ---- 5: generic combinations and trivialization invariance ---------------
  {
    Criterion c{"criterion 5: 100 combinations semisimple; verdict invariant under "
                "100 trivialization changes"};
    SplitRng rng(0xACCE9C);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& datum = corpus[i].datum;
      for (const auto& blk : datum.blocks) {
        bool all_ss = true;
        for (int rep = 0; rep < 100; ++rep) {
          std::vector<Complex> coeffs(datum.dim);
          for (auto& z : coeffs) z = rng.unit_circle();
          all_ss = all_ss && is_semisimple(combine(blk.higgs, coeffs), kTol);
        }
        c.expect(all_ss, "combination not semisimple on instance " + std::to_string(i));
      }
    }
    const auto triv_set = planted_corpus(0xACCE9D, 20, 10, 3, 2);
    for (std::size_t i = 0; i < triv_set.size(); ++i) {
      bool all_poly = true;
      for (int rep = 0; rep < 100; ++rep) {
        const ChangeOfTrivialization a =
            random_trivialization(triv_set[i].datum.dim, rng.next_u64());
        all_poly = all_poly &&
                   check_polystable(apply_trivialization_change(triv_set[i].datum, a, kTol),
                                    kTol)
                       .polystable();
      }
      c.expect(all_poly, "verdict not invariant on instance " + std::to_string(i));
    }
    c.finish();
  }

  // ---- 6: existence <=> polystability via the flow --------------------------
  std::vector<std::pair<HiggsDatum, FlowResult>> converged_flows;
  {
    Criterion c{"criterion 6: flow converges exactly on polystable instances (200) "
                "and the nilpotent fixture trips kappa_max"};
    const auto flow_planted = planted_corpus(0xACCE9E, 100, 8, 3, 2);
    const auto flow_negatives = negative_corpus(0xACCE9F, 100, /*include_noncommuting=*/false);
    int agree = 0;
    for (const auto& inst : flow_planted) {
      const bool poly = check_polystable(inst.datum, kTol).polystable();
      const FlowResult fr = flow_solve(inst.datum, std::nullopt, FlowOptions{});
      const bool conv = fr.verdict == FlowVerdict::converged;
      if (poly == conv) ++agree;
      c.expect(poly && conv, "planted flow verdict " + to_string(fr.verdict));
      if (conv) converged_flows.push_back({inst.datum, fr});
    }
    for (const auto& neg : flow_negatives) {
      const bool poly = check_polystable(neg, kTol).polystable();
      const FlowResult fr = flow_solve(neg, std::nullopt, FlowOptions{});
      const bool conv = fr.verdict == FlowVerdict::converged;
      if (poly == conv) ++agree;
      c.expect(!poly && !conv,
               "negative flow verdict " + to_string(fr.verdict) + " (expected failure)");
    }
    c.expect(agree == 200, "agreement " + std::to_string(agree) + "/200");

    // closed-form degeneration of the nilpotent fixture
    HiggsDatum nil;
    nil.dim = 1;
    BlockSpec b;
    b.label = "N0";
    b.multiplicity = 2;
    CMat t = CMat::Zero(2, 2);
    t(0, 1) = 1.0;
    b.higgs.push_back(t);
    nil.blocks.push_back(b);
    const FlowResult fr = flow_solve(nil, std::nullopt, FlowOptions{});
    c.expect(fr.verdict == FlowVerdict::degenerating, "nilpotent verdict");
    c.expect(fr.max_condition > kTol.kappa_max, "kappa_max trip");
    const CMat h = fr.metric.blocks[0];
    c.expect(std::abs(h(0, 1)) <= 1e-12, "metric stays diagonal");
    const double a = h(0, 0).real(), bb = h(1, 1).real();
    c.expect(std::abs(fr.final_residual - std::sqrt(2.0) * a / bb) <=
                 1e-6 * fr.final_residual + 1e-15,
             "residual matches sqrt(2) a/b");
    c.finish();
  }

  // ---- 7: converged flow metrics are Einstein-Hermitian ---------------------
  {
    Criterion c{"criterion 7: every converged flow metric passes the flatness check"};
    c.expect(!converged_flows.empty(), "no converged flows collected");
    for (std::size_t i = 0; i < converged_flows.size(); ++i) {
      try {
        const YMReport rep =
            eh_report(converged_flows[i].first, converged_flows[i].second.metric, kTol);
        c.expect(rep.eh_verdict,
                 "flatness " + std::to_string(rep.flatness_residual) + " on flow " +
                     std::to_string(i));
      } catch (const std::exception& e) {
        c.expect(false, std::string("eh_report failed: ") + e.what());
      }
    }
    c.finish();
  }

  // ---- 8: Levi-route metric assembly ----------------------------------------
  {
    Criterion c{"criterion 8: Levi-route metric agrees with the direct construction "
                "up to a family-commuting gauge (50 instances)"};
    const auto set = planted_corpus(0xACCEA0, 50, 8, 3, 1);
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& fam = set[i].datum.blocks[0].higgs;
      const int n = set[i].datum.blocks[0].multiplicity;
      const double scale = family_scale(fam);

      const ReductionFrame frame = conjugating_frame(fam, kTol);
      const CMat ginv = frame.frame.partialPivLu().inverse();
      CMat h_levi = ginv.adjoint() * ginv;
      h_levi = (h_levi + CMat(h_levi.adjoint())) / 2.0;
      h_levi /= std::pow(h_levi.determinant().real(), 1.0 / n);
      MetricDatum levi_metric;
      levi_metric.blocks.push_back(h_levi);
      const MetricDatum direct = construct_ym_metric(set[i].datum, kTol);

      c.expect(flatness_residual(set[i].datum, levi_metric, kTol) <= 1e-8 * scale,
               "levi-route flatness on " + std::to_string(i));
      c.expect(flatness_residual(set[i].datum, direct, kTol) <= 1e-8 * scale,
               "direct flatness on " + std::to_string(i));

      const CMat pulled = frame.frame.adjoint() * direct.blocks[0] * frame.frame;
      Eigen::SelfAdjointEigenSolver<CMat> es((pulled + CMat(pulled.adjoint())) / 2.0);
      const CMat gtilde = frame.frame * es.operatorSqrt() * ginv;
      bool commutes = true;
      for (const auto& t : fam)
        commutes = commutes && (gtilde * t - t * gtilde).norm() <= 1e-7 * scale;
      c.expect(commutes, "intertwiner does not commute on " + std::to_string(i));
      GaugeTransform gt{{gtilde}};
      const MetricDatum pushed = apply_gauge(levi_metric, gt, kTol);
      c.expect((pushed.blocks[0] - direct.blocks[0]).norm() <=
                   1e-7 * std::max(1.0, direct.blocks[0].norm()),
               "gauge does not carry levi metric to direct on " + std::to_string(i));
    }
    c.finish();
  }

  // ---- 9: kernel oracles ------------------------------------------------------
  {
    Criterion c{"criterion 9: exact minimal-polynomial and Bareiss-rank oracles"};
    SplitRng rng(0xACCEA1);
    int agreements = 0;
    for (int trial = 0; trial < 500; ++trial) {
      SplitRng r = rng.split(trial);
      const int n = 1 + static_cast<int>(r.uniform_int(0, 3));
      oracle::IntMat im;
      im.n = n;
      im.a.resize(n * n);
      CMat a(n, n);
      for (int k = 0; k < n * n; ++k) {
        im.a[k] = r.uniform_int(-3, 3);
        a(k / n, k % n) = static_cast<double>(im.a[k]);
      }
      if (is_semisimple(a, kTol) == oracle::diagonalizable(im)) ++agreements;
    }
    c.expect(agreements == 500,
             "semisimplicity agreement " + std::to_string(agreements) + "/500");

    int rank_agree = 0;
    const int rank_trials = 200;
    for (int trial = 0; trial < rank_trials; ++trial) {
      SplitRng r = rng.split(100000 + trial);
      const int n = 1 + static_cast<int>(r.uniform_int(0, 2));
      const int d = 1 + static_cast<int>(r.uniform_int(0, 2));
      std::vector<CMat> fam;
      std::vector<std::vector<long long>> stacked(d * n * n,
                                                  std::vector<long long>(n * n, 0));
      for (int i = 0; i < d; ++i) {
        CMat t(n, n);
        std::vector<long long> ti(n * n);
        for (int k = 0; k < n * n; ++k) {
          ti[k] = r.uniform_int(-2, 2);
          t(k / n, k % n) = static_cast<double>(ti[k]);
        }
        fam.push_back(t);
        for (int ar = 0; ar < n; ++ar)
          for (int bc = 0; bc < n; ++bc)
            for (int p = 0; p < n; ++p)
              for (int q = 0; q < n; ++q) {
                long long v = 0;
                if (p == q) v += ti[bc * n + ar];
                if (ar == bc) v -= ti[p * n + q];
                stacked[i * n * n + ar * n + p][bc * n + q] = v;
              }
      }
      const int exact_dim = n * n - oracle::bareiss_rank(stacked);
      if (centralizer_basis(fam, kTol).dim == exact_dim) ++rank_agree;
    }
    c.expect(rank_agree == rank_trials,
             "centralizer dim agreement " + std::to_string(rank_agree) + "/" +
                 std::to_string(rank_trials));
    c.finish();
  }

  // ---- 10: plumbing ------------------------------------------------------------
  {
    Criterion c{"criterion 10: serialization round-trip, seed determinism, CLI exit codes"};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const HiggsDatum back = parse_datum(serialize_datum(corpus[i].datum), kTol);
      c.expect(datum_equal(corpus[i].datum, back), "round-trip on " + std::to_string(i));
    }
    for (std::size_t i = 0; i < negatives.size(); ++i) {
      const HiggsDatum back = parse_datum(serialize_datum(negatives[i]), kTol);
      c.expect(datum_equal(negatives[i], back), "negative round-trip " + std::to_string(i));
    }
    // seed determinism: byte-identical serialization of repeated generation
    for (int i = 0; i < 10; ++i) {
      const auto a = gen_planted(3, {5, 3}, 1000 + i);
      const auto b = gen_planted(3, {5, 3}, 1000 + i);
      c.expect(serialize_datum(a.first) == serialize_datum(b.first),
               "datum bytes differ for seed " + std::to_string(1000 + i));
      c.expect(serialize_truth(a.second, {"E0", "E1"}) ==
                   serialize_truth(b.second, {"E0", "E1"}),
               "truth bytes differ for seed " + std::to_string(1000 + i));
    }
    if (!cli.empty() && !fixtures.empty()) {
      const fs::path work =
          fs::temp_directory_path() / ("higgs_acceptance_" + std::to_string(getpid()));
      fs::create_directories(work);
      const std::string planted = (work / "p.higgs.json").string();
      c.expect(run_cli(cli, "gen --kind planted --dim 2 --sizes 4,2 --seed 3 -o " +
                                planted) == 0,
               "cli gen exit");
      c.expect(run_cli(cli, "check " + planted) == 0, "cli check planted exit 0");
      c.expect(run_cli(cli, "check " + (fixtures / "nilpotent.higgs.json").string()) == 1,
               "cli check nilpotent exit 1");
      c.expect(run_cli(cli, "check " + (fixtures / "noncommuting.higgs.json").string()) == 1,
               "cli check noncommuting exit 1");
      c.expect(run_cli(cli, "check " + (fixtures / "mixed.higgs.json").string()) == 1,
               "cli check mixed exit 1");
      c.expect(run_cli(cli, "check " + (fixtures / "truncated.higgs.json").string()) == 2,
               "cli check truncated exit 2");
      c.expect(run_cli(cli, "check " + (fixtures / "empty_blocks.higgs.json").string()) == 2,
               "cli check empty exit 2");
      const std::string metric = (work / "m.json").string();
      c.expect(run_cli(cli, "solve " + planted + " --direct --metric-out " + metric) == 0,
               "cli solve --direct exit 0");
      c.expect(run_cli(cli, "verify " + planted + " " + metric) == 0, "cli verify exit 0");
      c.expect(run_cli(cli, "solve " + (fixtures / "nilpotent.higgs.json").string()) == 1,
               "cli solve nilpotent exit 1");
      c.expect(run_cli(cli, "solve " + planted + " --steps 1") == 3,
               "cli solve budget exit 3");
      // byte-identical reports across identical invocations
      const std::string r1 = (work / "r1.json").string();
      const std::string r2 = (work / "r2.json").string();
      c.expect(run_cli(cli, "check " + planted + " -o " + r1) == 0, "cli check -o");
      c.expect(run_cli(cli, "check " + planted + " -o " + r2) == 0, "cli check -o again");
      c.expect(slurp(r1) == slurp(r2) && !slurp(r1).empty(),
               "check reports not byte-identical");
      fs::remove_all(work);
    } else {
      c.expect(false, "cli path/fixtures not supplied");
    }
    c.finish();
  }

  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  std::printf("acceptance: %d criteria failed; wall time %.1f s\n", g_failed_criteria,
              secs);
  return g_failed_criteria == 0 ? 0 : 1;
}
