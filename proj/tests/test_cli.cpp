#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "congruum/scan.hpp"
#include "congruum/verify.hpp"
#include "oracles.hpp"

using namespace congruum;
namespace fs = std::filesystem;

namespace {

const HeegnerContext& context() {
  static const HeegnerContext ctx;
  return ctx;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("congruum-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path operator/(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Interrupt {};

}  // namespace

TEST_CASE("record lines round-trip") {
  ScanConfig c;
  c.height_bound = 50;
  for (i64 D : {5, 7, 13, 14, 22, 1254}) {
    const ScanRecord r = scan_one(D, c, context());
    const std::string line = format_record(r);
    const ScanRecord back = parse_record(line);
    CHECK(format_record(back) == line);
    CHECK(back.D == D);
    CHECK(back.verdict == r.verdict);
    CHECK(back.selmer.rank_upper == r.selmer.rank_upper);
    CHECK(back.point.has_value() == r.point.has_value());
  }
  const ScanRecord r5 = scan_one(5, c, context());
  CHECK(r5.verdict == Verdict::Nontorsion);
  REQUIRE(r5.point);
  CHECK(r5.point->verify());
  CHECK_FALSE(r5.elapsed_ms);
  CHECK_THROWS_AS(parse_record("D=5 cls=S5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_record(""), std::invalid_argument);
}

TEST_CASE("canonical config round-trips and the hash follows it") {
  ScanConfig c;
  c.lo = 10;
  c.hi = 9999;
  c.classes = {TwistCls::I6, TwistCls::S5};
  c.mode = ScanMode::Prefiltered;
  c.classify.ladder = {256, 768};
  c.classify.normalizer_fallback = false;
  c.height_bound = 77;
  const std::string s = canonical(c);
  const ScanConfig back = parse_canonical(s);
  CHECK(canonical(back) == s);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);

  ScanConfig w = c;
  w.workers = 8;
  CHECK(config_hash(w) == config_hash(c));
  ScanConfig h = c;
  h.height_bound = 78;
  CHECK(config_hash(h) != config_hash(c));
  ScanConfig f = c;
  f.classify.normalizer_fallback = true;
  CHECK(config_hash(f) != config_hash(c));
  CHECK_THROWS_AS(parse_canonical(s + " extra=1"), ConfigError);
  CHECK_THROWS_AS(parse_canonical("range=1..2"), ConfigError);
}

TEST_CASE("argument parsers") {
  CHECK(parse_range("5..5000") == std::pair<i64, i64>{5, 5000});
  CHECK_THROWS_AS(parse_range("5-5000"), ConfigError);
  CHECK_THROWS_AS(parse_range("a..b"), ConfigError);
  CHECK(parse_classes("all").size() == 4);
  CHECK(parse_classes("S7,I14") == std::vector<TwistCls>{TwistCls::S7, TwistCls::I14});
  CHECK_THROWS_AS(parse_classes("S5,X9"), ConfigError);
  CHECK_THROWS_AS(parse_classes(""), ConfigError);
  CHECK(parse_ladder("256,512,1024") == std::vector<hp::Prec>{256, 512, 1024});
  CHECK_THROWS_AS(parse_ladder("256,x"), ConfigError);

  ScanConfig c;
  c.lo = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.lo = 5;
  c.hi = kScanCeiling + 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.hi = 100;
  c.classify.ladder = {512, 256};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.classify.ladder = {256};
  c.classes = {TwistCls::EvenSign};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("checkpoint files round-trip and reject garbage") {
  TempDir dir;
  Checkpoint cp;
  cp.config = canonical(ScanConfig{});
  cp.out = (dir / "scan.txt").string();
  cp.last_D = 4321;
  cp.offset = 98765;
  cp.records = 123;
  cp.counters[2] = ClassCounters{10, 4, 3, 2, 1};
  write_checkpoint(dir / "cp", cp);
  const auto back = read_checkpoint(dir / "cp");
  REQUIRE(back);
  CHECK(back->config == cp.config);
  CHECK(back->last_D == 4321);
  CHECK(back->offset == 98765);
  CHECK(back->records == 123);
  CHECK(back->counters[2].survivors == 4);
  CHECK(back->counters[2].indeterminate == 1);
  CHECK_FALSE(back->complete);
  CHECK_FALSE(read_checkpoint(dir / "missing"));
  {
    std::ofstream bad(dir / "bad");
    bad << "not a checkpoint\n";
  }
  CHECK_THROWS_AS(read_checkpoint(dir / "bad"), IoError);
}

TEST_CASE("run_scan: coverage, worker independence, prefiltering and resume") {
  TempDir dir;
  ScanConfig c;
  c.lo = 5;
  c.hi = 700;
  const ScanSummary s1 = run_scan(c, ScanOptions{dir / "a.txt"}, context());
  const u64 expected = sieve_squarefree_range(5, 700, c.mask(), [](u64) {});
  CHECK(static_cast<u64>(s1.records) == expected);
  CHECK(s1.indeterminate == 0);

  ScanFile f = read_scan_file(dir / "a.txt");
  REQUIRE(f.records.size() == expected);
  CHECK(canonical(f.config) == canonical(c));
  for (std::size_t i = 1; i < f.records.size(); ++i) REQUIRE(f.records[i - 1].D < f.records[i].D);
  for (const ScanRecord& r : f.records) {
    REQUIRE(oracle::squarefree_trial(r.D));
    REQUIRE(classify(r.D).cls == r.cls);
  }

  ScanConfig many = c;
  many.workers = 6;
  run_scan(many, ScanOptions{dir / "b.txt"}, context());
  CHECK(slurp(dir / "a.txt") == slurp(dir / "b.txt"));

  ScanConfig pre = c;
  pre.mode = ScanMode::Prefiltered;
  const ScanSummary sp = run_scan(pre, ScanOptions{dir / "p.txt"}, context());
  const ScanFile fp = read_scan_file(dir / "p.txt");
  std::set<i64> full;
  for (const ScanRecord& r : f.records) full.insert(r.D);
  for (const ScanRecord& r : fp.records) {
    REQUIRE(full.count(r.D));
    REQUIRE(r.selmer.passes_rank3);
  }
  i64 scanned = 0, survivors = 0;
  for (const ClassCounters& cc : sp.counters) {
    scanned += cc.scanned;
    survivors += cc.survivors;
  }
  CHECK(static_cast<u64>(scanned) == expected);
  CHECK(survivors == static_cast<i64>(fp.records.size()));

  // stop after a few checkpoints, then resume
  ScanOptions o{dir / "r.txt", dir / "r.cp", 16, nullptr};
  int flushes = 0;
  o.on_flush = [&](i64) {
    if (++flushes == 5) throw Interrupt{};
  };
  CHECK_THROWS_AS(run_scan(c, o, context()), Interrupt);
  const auto cp = read_checkpoint(dir / "r.cp");
  REQUIRE(cp);
  CHECK_FALSE(cp->complete);
  CHECK(cp->last_D < c.hi);
  {
    // bytes past the checkpoint are discarded on resume
    std::ofstream junk(dir / "r.txt", std::ios::app);
    junk << "D=999 half a record";
  }
  o.on_flush = nullptr;
  const ScanSummary sr = run_scan(c, o, context());
  CHECK(sr.resumed);
  CHECK(slurp(dir / "r.txt") == slurp(dir / "a.txt"));
  CHECK(run_scan(c, o, context()).already_complete);

  ScanConfig other = c;
  other.hi = 800;
  CHECK_THROWS_AS(run_scan(other, o, context()), ConfigError);
}

TEST_CASE("build_report insists on exact coverage") {
  TempDir dir;
  ScanConfig c;
  c.lo = 5;
  c.hi = 400;
  run_scan(c, ScanOptions{dir / "s.txt"}, context());
  ScanFile f = read_scan_file(dir / "s.txt");
  const ScanReport rep = build_report(f);
  i64 cands = 0;
  for (const ClassReport& cr : rep.classes) {
    cands += cr.counts.candidates;
    i64 prev = 0;
    for (const auto& [D, n] : cr.cumulative) {
      REQUIRE(n == prev + 1);
      prev = n;
      REQUIRE(classify(D).cls == cr.cls);
    }
    CHECK(prev == cr.counts.candidates);
  }
  CHECK(cands == rep.total_candidates);
  std::ostringstream text, plot;
  write_report_text(text, rep);
  write_plot_data(plot, rep);
  CHECK(text.str().find("S5") != std::string::npos);
  CHECK(plot.str().find("# S5") != std::string::npos);

  ScanFile gap = f;
  gap.records.erase(gap.records.begin() + 3);
  CHECK_THROWS_AS(build_report(gap), std::runtime_error);
  ScanFile dup = f;
  dup.records.insert(dup.records.begin() + 3, dup.records[3]);
  CHECK_THROWS_AS(build_report(dup), std::runtime_error);
  ScanFile stray = f;
  ScanRecord extra = stray.records.back();
  extra.D = 401;
  stray.records.push_back(extra);
  CHECK_THROWS_AS(build_report(stray), std::runtime_error);
  ScanFile swapped = f;
  std::swap(swapped.records[1], swapped.records[2]);
  CHECK_THROWS_AS(build_report(swapped), std::runtime_error);
}

TEST_CASE("verify_records finds points for candidates and skips nontorsion") {
  ScanConfig c;
  std::vector<ScanRecord> recs;
  for (i64 D : {5, 1254}) recs.push_back(scan_one(D, c, context()));
  VerifyOptions o;
  o.height_bound = 100;
  o.torsor_bound = 100;
  const VerifyReport rep = verify_records(recs, o, context());
  CHECK(rep.skipped == 1);
  CHECK(rep.checked + rep.skipped == static_cast<i64>(recs.size()));
  CHECK(rep.found + rep.open == rep.checked);
  CHECK(rep.found == 1);
  for (const VerifyRow& r : rep.rows) {
    if (r.x) {
      CHECK(is_nontorsion_x(r.D, *r.x));
      CHECK(r.source != PointSource::None);
    }
    CHECK_FALSE(format_verify_row(r).empty());
  }
}
