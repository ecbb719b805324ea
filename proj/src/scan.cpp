#include "congruum/scan.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace congruum {

namespace {

constexpr const char* kRecipe = "orientation-scan";
constexpr const char* kFormatVersion = "1";

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

i64 parse_i64(const std::string& s, const char* what) {
  i64 v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("bad ") + what + " '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const char* what) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::pair<std::string, std::string>> key_values(const std::string& line) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const std::string& tok : split(line, ' ')) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + tok + "'");
    kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return kv;
}

int cls_index(TwistCls c) {
  switch (c) {
    case TwistCls::S5: return 0;
    case TwistCls::S7: return 1;
    case TwistCls::I6: return 2;
    case TwistCls::I14: return 3;
    case TwistCls::EvenSign: break;
  }
  throw std::invalid_argument("not an odd-sign class");
}

std::string join_classes(const std::vector<TwistCls>& cs) {
  std::string s;
  for (TwistCls c : kOddSignClasses) {
    bool present = false;
    for (TwistCls x : cs) present = present || x == c;
    if (!present) continue;
    if (!s.empty()) s += ',';
    s += to_string(c);
  }
  return s;
}

}  // namespace

void ScanConfig::validate() const {
  if (lo < 1 || hi < lo) throw ConfigError("range must satisfy 1 <= lo <= hi");
  if (hi > kScanCeiling) throw ConfigError("range upper bound exceeds " + std::to_string(kScanCeiling));
  if (classes.empty()) throw ConfigError("no classes selected");
  for (TwistCls c : classes)
    if (c == TwistCls::EvenSign) throw ConfigError("only S5, S7, I6, I14 can be scanned");
  if (classify.ladder.empty()) throw ConfigError("precision ladder is empty");
  hp::Prec last = 0;
  for (hp::Prec p : classify.ladder) {
    if (p < 64 || p > 4096) throw ConfigError("precision must lie in [64, 4096] bits");
    if (p <= last) throw ConfigError("precision ladder must increase");
    last = p;
  }
  const double nt = classify.threshold_nontorsion, t = classify.threshold_torsion;
  if (!(t > 0 && t < nt && nt < 1)) throw ConfigError("thresholds must satisfy 0 < torsion < nontorsion < 1");
  if (height_bound < 0 || height_bound > 100000) throw ConfigError("height bound must lie in [0, 100000]");
  if (workers < 1 || workers > 1024) throw ConfigError("workers must lie in [1, 1024]");
}

ResidueMask ScanConfig::mask() const {
  ResidueMask m = 0;
  for (TwistCls c : classes) m |= class_mask(c);
  return m;
}

std::string canonical(const ScanConfig& c) {
  std::string ladder;
  for (hp::Prec p : c.classify.ladder) {
    if (!ladder.empty()) ladder += ',';
    ladder += std::to_string(p);
  }
  std::ostringstream o;
  o << "range=" << c.lo << ".." << c.hi << " classes=" << join_classes(c.classes)
    << " mode=" << (c.mode == ScanMode::Full ? "full" : "prefiltered") << " ladder=" << ladder
    << " thr_nt=" << shortest(c.classify.threshold_nontorsion)
    << " thr_t=" << shortest(c.classify.threshold_torsion)
    << " normalizer=" << (c.classify.use_normalizer ? "on" : "off")
    << " fallback=" << (c.classify.normalizer_fallback ? "on" : "off") << " height_bound=" << c.height_bound
    << " timing=" << (c.timing ? "on" : "off");
  return o.str();
}

ScanConfig parse_canonical(const std::string& s) {
  ScanConfig c;
  try {
    const auto kv = key_values(s);
    const char* keys[] = {"range", "classes", "mode", "ladder", "thr_nt", "thr_t", "normalizer", "fallback",
                          "height_bound", "timing"};
    if (kv.size() != std::size(keys)) throw std::invalid_argument("wrong number of fields");
    for (std::size_t i = 0; i < kv.size(); ++i)
      if (kv[i].first != keys[i]) throw std::invalid_argument("expected '" + std::string(keys[i]) + "'");
    std::tie(c.lo, c.hi) = parse_range(kv[0].second);
    c.classes = parse_classes(kv[1].second);
    if (kv[2].second == "full") c.mode = ScanMode::Full;
    else if (kv[2].second == "prefiltered") c.mode = ScanMode::Prefiltered;
    else throw std::invalid_argument("bad mode '" + kv[2].second + "'");
    c.classify.ladder = parse_ladder(kv[3].second);
    c.classify.threshold_nontorsion = parse_double(kv[4].second, "threshold");
    c.classify.threshold_torsion = parse_double(kv[5].second, "threshold");
    if (kv[6].second != "on" && kv[6].second != "off") throw std::invalid_argument("bad normalizer flag");
    c.classify.use_normalizer = kv[6].second == "on";
    if (kv[7].second != "on" && kv[7].second != "off") throw std::invalid_argument("bad fallback flag");
    c.classify.normalizer_fallback = kv[7].second == "on";
    c.height_bound = parse_i64(kv[8].second, "height bound");
    if (kv[9].second != "on" && kv[9].second != "off") throw std::invalid_argument("bad timing flag");
    c.timing = kv[9].second == "on";
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_hash(const ScanConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::pair<i64, i64> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw ConfigError("range must look like lo..hi, got '" + s + "'");
  try {
    return {parse_i64(s.substr(0, dots), "range"), parse_i64(s.substr(dots + 2), "range")};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<TwistCls> parse_classes(const std::string& s) {
  if (s == "all") return {kOddSignClasses.begin(), kOddSignClasses.end()};
  std::vector<TwistCls> out;
  for (const std::string& tok : split(s, ',')) {
    TwistCls c;
    try {
      c = parse_cls(tok);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (c == TwistCls::EvenSign) throw ConfigError("only S5, S7, I6, I14 can be scanned");
    bool dup = false;
    for (TwistCls x : out) dup = dup || x == c;
    if (!dup) out.push_back(c);
  }
  if (out.empty()) throw ConfigError("no classes selected");
  return out;
}

std::vector<hp::Prec> parse_ladder(const std::string& s) {
  std::vector<hp::Prec> out;
  try {
    for (const std::string& tok : split(s, ',')) out.push_back(parse_i64(tok, "precision"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return out;
}

std::string format_record(const ScanRecord& r) {
  std::ostringstream o;
  o << "D=" << r.D << " cls=" << to_string(r.cls) << " class_number=" << r.class_number
    << " cm_disc=" << r.cm_disc << " verdict=" << to_string(r.verdict) << " dist=" << r.dist
    << " err=" << r.err << " prec_bits=" << r.prec_bits << " dim_phi=" << r.selmer.dim_phi
    << " dim_phihat=" << r.selmer.dim_phihat << " rank_upper=" << r.selmer.rank_upper << " point=";
  if (r.point) {
    o << r.point->r << '/' << r.point->s;
  } else {
    o << '-';
  }
  if (r.elapsed_ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *r.elapsed_ms);
    o << " elapsed_ms=" << buf;
  }
  return o.str();
}

ScanRecord parse_record(const std::string& line) {
  const auto kv = key_values(line);
  const char* keys[] = {"D", "cls", "class_number", "cm_disc", "verdict", "dist", "err",
                        "prec_bits", "dim_phi", "dim_phihat", "rank_upper", "point"};
  const std::size_t n = std::size(keys);
  if (kv.size() != n && !(kv.size() == n + 1 && kv[n].first == "elapsed_ms"))
    throw std::invalid_argument("record has the wrong fields: " + line);
  for (std::size_t i = 0; i < n; ++i)
    if (kv[i].first != keys[i]) throw std::invalid_argument("record field " + std::to_string(i) + " should be " + keys[i]);
  ScanRecord r;
  r.D = parse_i64(kv[0].second, "D");
  r.cls = parse_cls(kv[1].second);
  r.class_number = parse_i64(kv[2].second, "class number");
  r.cm_disc = parse_i64(kv[3].second, "cm_disc");
  r.verdict = parse_verdict(kv[4].second);
  r.dist = kv[5].second;
  r.err = kv[6].second;
  r.prec_bits = parse_i64(kv[7].second, "prec_bits");
  r.selmer.D = r.D;
  r.selmer.dim_phi = static_cast<int>(parse_i64(kv[8].second, "dim_phi"));
  r.selmer.dim_phihat = static_cast<int>(parse_i64(kv[9].second, "dim_phihat"));
  r.selmer.rank_upper = static_cast<int>(parse_i64(kv[10].second, "rank_upper"));
  r.selmer.passes_rank3 = r.selmer.rank_upper >= 3;
  if (kv[11].second != "-") {
    const auto slash = kv[11].second.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("bad point '" + kv[11].second + "'");
    const i64 pr = parse_i64(kv[11].second.substr(0, slash), "point");
    const i64 ps = parse_i64(kv[11].second.substr(slash + 1), "point");
    auto p = point_from_pair(pr, ps);
    if (!p || p->D != r.D || p->r != pr) throw std::invalid_argument("point " + kv[11].second + " is not on E_D");
    r.point = p;
  }
  if (kv.size() == n + 1) r.elapsed_ms = parse_double(kv[n].second, "elapsed_ms");
  return r;
}

ScanRecord scan_one(i64 D, const ScanConfig& c, const HeegnerContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  ScanRecord r;
  r.D = D;
  const TwistClass t = classify(D);
  r.cls = t.cls;
  try {
    r.selmer = selmer_bound(D);
    const Classification cl = classify_PD(t, ctx, c.classify);
    r.class_number = cl.class_number;
    r.cm_disc = cl.cm_disc;
    r.verdict = cl.verdict;
    r.dist = cl.dist.to_sci(6);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", cl.err);
    r.err = buf;
    r.prec_bits = cl.prec_bits;
    if (c.height_bound > 0) r.point = naive_search(D, c.height_bound);
  } catch (const std::exception&) {
    r.verdict = Verdict::Indeterminate;
  }
  if (c.timing)
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  Checkpoint cp;
  std::string line;
  if (!std::getline(in, line) || line != std::string("congruum-checkpoint ") + kFormatVersion)
    throw IoError("checkpoint " + p.string() + ": unrecognized format");
  bool have_config = false, have_offset = false;
  while (std::getline(in, line)) {
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp), val = sp == std::string::npos ? "" : line.substr(sp + 1);
    try {
      if (key == "config") {
        cp.config = val;
        have_config = true;
      } else if (key == "out") {
        cp.out = val;
      } else if (key == "last_D") {
        cp.last_D = parse_i64(val, "last_D");
      } else if (key == "offset") {
        cp.offset = static_cast<std::uint64_t>(parse_i64(val, "offset"));
        have_offset = true;
      } else if (key == "records") {
        cp.records = parse_i64(val, "records");
      } else if (key == "complete") {
        cp.complete = val == "1";
      } else if (key == "counters") {
        const auto f = split(val, ' ');
        if (f.size() != 6) throw std::invalid_argument("counters line");
        ClassCounters& cc = cp.counters[static_cast<std::size_t>(cls_index(parse_cls(f[0])))];
        cc.scanned = parse_i64(f[1], "counter");
        cc.survivors = parse_i64(f[2], "counter");
        cc.nontorsion = parse_i64(f[3], "counter");
        cc.candidates = parse_i64(f[4], "counter");
        cc.indeterminate = parse_i64(f[5], "counter");
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw IoError("checkpoint " + p.string() + ": " + e.what());
    }
  }
  if (!have_config || !have_offset) throw IoError("checkpoint " + p.string() + " is truncated");
  return cp;
}

void write_checkpoint(const std::filesystem::path& p, const Checkpoint& cp) {
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << "congruum-checkpoint " << kFormatVersion << "\n"
        << "config " << cp.config << "\n"
        << "out " << cp.out << "\n"
        << "last_D " << cp.last_D << "\n"
        << "offset " << cp.offset << "\n"
        << "records " << cp.records << "\n";
    for (TwistCls c : kOddSignClasses) {
      const ClassCounters& cc = cp.counters[static_cast<std::size_t>(cls_index(c))];
      out << "counters " << to_string(c) << ' ' << cc.scanned << ' ' << cc.survivors << ' '
          << cc.nontorsion << ' ' << cc.candidates << ' ' << cc.indeterminate << "\n";
    }
    out << "complete " << (cp.complete ? 1 : 0) << "\n";
    out.flush();
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) throw IoError("cannot replace checkpoint " + p.string() + ": " + ec.message());
}

std::string header_line(const ScanConfig& c) {
  return std::string("# congruum-scan v") + kFormatVersion + " hash=" + config_hash(c) +
         " recipe=" + kRecipe + " normalizer=" + (c.classify.use_normalizer ? "on" : "off") +
         " config: " + canonical(c);
}

namespace {

struct Outcome {
  bool emit = false;
  bool survivor = false;
  ScanRecord rec;
};

Outcome process(i64 D, const ScanConfig& c, const HeegnerContext& ctx) {
  Outcome o;
  if (c.mode == ScanMode::Prefiltered) {
    o.survivor = rank3_filter(D);
    if (!o.survivor) {
      o.rec.D = D;
      o.rec.cls = classify(D).cls;
      return o;
    }
  }
  o.rec = scan_one(D, c, ctx);
  o.survivor = o.rec.selmer.passes_rank3;
  o.emit = true;
  return o;
}

// Classifies one block of |D| values on the worker pool and hands the
// outcomes to `sink` in ascending order.
class BlockRunner {
 public:
  BlockRunner(const ScanConfig& c, const HeegnerContext& ctx) : c_(c), ctx_(ctx) {}

  template <class Sink>
  void run(const std::vector<i64>& ds, Sink&& sink) {
    const std::size_t n = ds.size();
    std::vector<Outcome> out(n);
    std::vector<char> ready(n, 0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::condition_variable cv;

    auto work = [&] {
      for (;;) {
        if (stop.load()) return;
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        Outcome o = process(ds[i], c_, ctx_);
        {
          std::lock_guard<std::mutex> lock(mu);
          out[i] = std::move(o);
          ready[i] = 1;
        }
        cv.notify_all();
      }
    };
    std::vector<std::jthread> pool;
    const int workers = std::max(1, std::min<int>(c_.workers, static_cast<int>(n)));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    try {
      for (std::size_t i = 0; i < n; ++i) {
        Outcome o;
        {
          std::unique_lock<std::mutex> lock(mu);
          cv.wait(lock, [&] { return ready[i] != 0; });
          o = std::move(out[i]);
        }
        sink(std::move(o));
      }
    } catch (...) {
      stop = true;
      throw;
    }
  }

 private:
  const ScanConfig& c_;
  const HeegnerContext& ctx_;
};

}  // namespace

ScanSummary run_scan(const ScanConfig& c, const ScanOptions& o, const HeegnerContext& ctx) {
  c.validate();
  ScanSummary summary;
  Checkpoint cp;
  cp.config = canonical(c);
  cp.out = o.out.string();
  cp.last_D = c.lo - 1;
  const bool checkpointing = !o.checkpoint.empty();

  std::optional<Checkpoint> prior;
  if (checkpointing) prior = read_checkpoint(o.checkpoint);
  if (prior) {
    if (prior->config != cp.config)
      throw ConfigError("checkpoint " + o.checkpoint.string() + " was written for a different config");
    cp = *prior;
    cp.out = o.out.string();
    summary.resumed = true;
    if (cp.complete) {
      summary.already_complete = true;
      summary.records = cp.records;
      summary.counters = cp.counters;
      for (const ClassCounters& cc : cp.counters) summary.indeterminate += cc.indeterminate;
      return summary;
    }
  }

  std::ofstream out;
  if (prior) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(o.out, ec);
    if (ec || size < cp.offset) throw IoError("output " + o.out.string() + " is shorter than the checkpoint says");
    std::filesystem::resize_file(o.out, cp.offset, ec);
    if (ec) throw IoError("cannot truncate " + o.out.string() + ": " + ec.message());
    out.open(o.out, std::ios::binary | std::ios::app);
  } else {
    out.open(o.out, std::ios::binary | std::ios::trunc);
  }
  if (!out) throw IoError("cannot open output " + o.out.string());

  auto write = [&](const std::string& line) {
    out << line << '\n';
    cp.offset += line.size() + 1;
  };
  auto commit = [&] {
    out.flush();
    if (!out) throw IoError("write to " + o.out.string() + " failed");
    if (checkpointing) write_checkpoint(o.checkpoint, cp);
    if (o.on_flush) o.on_flush(cp.last_D);
  };

  if (!prior) {
    write(header_line(c));
    commit();
  }

  BlockRunner runner(c, ctx);
  constexpr i64 kBlock = 1 << 14;
  i64 since_commit = 0;
  for (i64 base = cp.last_D + 1; base <= c.hi; base += kBlock) {
    const i64 top = std::min(c.hi, base + kBlock - 1);
    std::vector<i64> ds;
    sieve_squarefree_range(static_cast<u64>(base), static_cast<u64>(top), c.mask(),
                           [&](u64 n) { ds.push_back(static_cast<i64>(n)); });
    runner.run(ds, [&](Outcome oc) {
      ClassCounters& cc = cp.counters[static_cast<std::size_t>(cls_index(oc.rec.cls))];
      ++cc.scanned;
      if (oc.survivor) ++cc.survivors;
      if (oc.emit) {
        switch (oc.rec.verdict) {
          case Verdict::Nontorsion: ++cc.nontorsion; break;
          case Verdict::TorsionCandidate: ++cc.candidates; break;
          case Verdict::Indeterminate: ++cc.indeterminate; break;
        }
        write(format_record(oc.rec));
        ++cp.records;
      }
      cp.last_D = oc.rec.D;
      if (++since_commit >= o.checkpoint_every) {
        commit();
        since_commit = 0;
      }
    });
    cp.last_D = top;
  }
  cp.complete = true;
  commit();

  summary.records = cp.records;
  summary.counters = cp.counters;
  for (const ClassCounters& cc : cp.counters) summary.indeterminate += cc.indeterminate;
  return summary;
}

ScanFile read_scan_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  ScanFile f;
  std::string line;
  if (!std::getline(in, line)) throw IoError(p.string() + " is empty");
  const auto pos = line.find(" config: ");
  if (line.rfind("# congruum-scan v", 0) != 0 || pos == std::string::npos)
    throw IoError(p.string() + ": missing scan header");
  f.config = parse_canonical(line.substr(pos + 9));
  if (line != header_line(f.config)) throw IoError(p.string() + ": header hash does not match its config");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      f.records.push_back(parse_record(line));
    } catch (const std::invalid_argument& e) {
      throw IoError(p.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return f;
}

}  // namespace congruum
