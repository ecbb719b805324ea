#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "congruum/scan.hpp"
#include "congruum/tunnell.hpp"
#include "congruum/verify.hpp"

using namespace congruum;

namespace {

enum Exit { kOk = 0, kFailed = 1, kBadConfig = 2, kIo = 3, kIndeterminate = 4 };

int finish_scan(const ScanSummary& s) {
  std::fprintf(stderr, "%s%lld records, %lld indeterminate\n",
               s.already_complete ? "already complete: " : (s.resumed ? "resumed: " : ""),
               static_cast<long long>(s.records), static_cast<long long>(s.indeterminate));
  return s.indeterminate ? kIndeterminate : kOk;
}

int selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", name);
    if (!ok) ++failures;
  };

  i64 trial = 0;
  for (i64 n = 5; n <= 100; ++n)
    if (is_squarefree(static_cast<u64>(n)) && (n % 8 == 5 || n % 8 == 6 || n % 8 == 7)) ++trial;
  check("sieve count 5..100", static_cast<i64>(sieve_squarefree_range(5, 100, residues_mod8({5, 6, 7}))) == trial);

  const QExpansion f = coefficients_level32(2000);
  bool coeffs = true;
  for (u64 p : primes_below(2000))
    if (p > 2) coeffs = coeffs && f.coeffs[p] == static_cast<i64>(p) + 1 - point_count(static_cast<i64>(p), -1);
  check("level-32 coefficients against point counts", coeffs);

  const hp::Real w = periods(Parent::E1).omega1;
  check("lemniscate period", std::abs(w.to_double() - 2.6220575542921198) < 1e-14);

  HeegnerContext ctx(1 << 13);
  bool calib = true;
  for (i64 D : {5, 6, 7}) calib = calib && classify_PD(classify(D), ctx).verdict == Verdict::Nontorsion;
  check("P_D nontorsion for D = 5, 6, 7", calib);

  check("rank bound 3 for D = 1254", selmer_bound(1254).rank_upper >= 3);
  bool tunnell = true;
  for (i64 n : {1, 2, 3, 10}) tunnell = tunnell && !tunnell_counts(n).vanishing;
  check("Tunnell nonvanishing for n = 1, 2, 3, 10", tunnell);

  auto p = naive_search(5, 10);
  check("point on E_5", p && p->verify());
  return failures ? kFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heegner-point scans of the congruent-number twists D y^2 = x^3 - x"};
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.require_subcommand(1);

  ScanConfig cfg;
  std::string range, classes = "all", mode = "full", ladder = "256,512,1024", out, checkpoint;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto* scan = app.add_subcommand("scan", "classify every |D| in a range and write records");
  scan->add_option("--range", range, "lo..hi")->required();
  scan->add_option("--classes", classes, "S5,S7,I6,I14 or all")->capture_default_str();
  scan->add_option("--mode", mode, "full or prefiltered")->capture_default_str();
  scan->add_option("--prec", ladder, "precision ladder in bits")->capture_default_str();
  scan->add_option("--threshold-nontorsion", cfg.classify.threshold_nontorsion)->capture_default_str();
  scan->add_option("--threshold-torsion", cfg.classify.threshold_torsion)->capture_default_str();
  scan->add_option("--height-bound", cfg.height_bound, "naive search height for the point field")->capture_default_str();
  scan->add_flag("--normalizer", cfg.classify.use_normalizer, "reduce with the normalizer of Gamma0(N)");
  bool no_fallback = false;
  scan->add_flag("--no-fallback", no_fallback,
                 "never switch a single point to the normalizer when plain reduction is too close to a cusp");
  scan->add_flag("--timing", cfg.timing, "add elapsed_ms to each record");
  scan->add_option("--out", out, "record file")->envname("CONGRUUM_OUT")->required();
  scan->add_option("--checkpoint", checkpoint, "checkpoint file")->envname("CONGRUUM_CHECKPOINT");
  scan->add_option("--workers", workers)->capture_default_str();

  auto* resume = app.add_subcommand("resume", "continue the scan recorded in a checkpoint");
  resume->add_option("--checkpoint", checkpoint)->envname("CONGRUUM_CHECKPOINT")->required();
  resume->add_option("--out", out, "defaults to the path stored in the checkpoint");
  resume->add_option("--workers", workers)->capture_default_str();

  std::string records, verify_out, plot;
  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "search for points on candidate and indeterminate curves");
  verify->add_option("records", records)->required();
  verify->add_option("--height-bound", vo.height_bound)->capture_default_str();
  verify->add_option("--torsor-bound", vo.torsor_bound)->capture_default_str();
  verify->add_flag("--all", vo.include_nontorsion, "also confirm Nontorsion records");
  verify->add_option("--out", verify_out, "default stdout");

  auto* report = app.add_subcommand("report", "class statistics of a finished scan");
  report->add_option("records", records)->required();
  report->add_option("--out", verify_out, "default stdout");
  report->add_option("--plot", plot, "cumulative candidate counts, tab separated");

  auto* self = app.add_subcommand("selftest", "quick consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadConfig;
  }

  try {
    if (*scan) {
      std::tie(cfg.lo, cfg.hi) = parse_range(range);
      cfg.classes = parse_classes(classes);
      if (mode == "full") cfg.mode = ScanMode::Full;
      else if (mode == "prefiltered") cfg.mode = ScanMode::Prefiltered;
      else throw ConfigError("mode must be full or prefiltered");
      cfg.classify.ladder = parse_ladder(ladder);
      cfg.classify.normalizer_fallback = !no_fallback;
      cfg.workers = workers;
      cfg.validate();
      HeegnerContext ctx;
      ScanOptions so;
      so.out = out;
      so.checkpoint = checkpoint;
      return finish_scan(run_scan(cfg, so, ctx));
    }
    if (*resume) {
      const auto cp = read_checkpoint(checkpoint);
      if (!cp) throw IoError("no checkpoint at " + checkpoint);
      ScanConfig c = parse_canonical(cp->config);
      c.workers = workers;
      c.validate();
      HeegnerContext ctx;
      ScanOptions so;
      so.out = out.empty() ? cp->out : out;
      so.checkpoint = checkpoint;
      return finish_scan(run_scan(c, so, ctx));
    }
    if (*verify) {
      const ScanFile f = read_scan_file(records);
      HeegnerContext ctx;
      const VerifyReport rep = verify_records(f.records, vo, ctx);
      std::ofstream file;
      if (!verify_out.empty()) {
        file.open(verify_out);
        if (!file) throw IoError("cannot open " + verify_out);
      }
      std::ostream& o = verify_out.empty() ? std::cout : file;
      for (const VerifyRow& r : rep.rows) o << format_verify_row(r) << "\n";
      o << "# checked=" << rep.checked << " found=" << rep.found << " open=" << rep.open
        << " skipped=" << rep.skipped << "\n";
      if (!o) throw IoError("write failed");
      return kOk;
    }
    if (*report) {
      const ScanReport rep = build_report(read_scan_file(records));
      std::ofstream file;
      if (!verify_out.empty()) {
        file.open(verify_out);
        if (!file) throw IoError("cannot open " + verify_out);
      }
      std::ostream& o = verify_out.empty() ? std::cout : file;
      write_report_text(o, rep);
      if (!plot.empty()) {
        std::ofstream p(plot);
        write_plot_data(p, rep);
        if (!p) throw IoError("cannot write " + plot);
      }
      if (!o) throw IoError("write failed");
      return kOk;
    }
    if (*self) return selftest();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kBadConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBadConfig;
  }
  return kOk;
}
