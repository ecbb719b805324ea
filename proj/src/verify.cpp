#include "congruum/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

namespace congruum {

namespace {

std::string i128_str(i128 x) {
  if (x == 0) return "0";
  const bool neg = x < 0;
  u128 u = neg ? static_cast<u128>(-x) : static_cast<u128>(x);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

mpq_class to_mpq(i128 num, i128 den) {
  mpq_class q(mpz_class(i128_str(num)), mpz_class(i128_str(den)));
  q.canonicalize();
  return q;
}

std::optional<mpq_class> checked(i64 D, const mpq_class& x) {
  if (is_nontorsion_x(D, x)) return x;
  return std::nullopt;
}

}  // namespace

const char* to_string(PointSource s) {
  switch (s) {
    case PointSource::None: return "none";
    case PointSource::Record: return "record";
    case PointSource::Pruned: return "pruned";
    case PointSource::Naive: return "naive";
    case PointSource::Torsor: return "torsor";
    case PointSource::HeegnerLift: return "heegner-lift";
  }
  return "?";
}

VerifyReport verify_records(const std::vector<ScanRecord>& records, const VerifyOptions& o,
                            const HeegnerContext& ctx) {
  VerifyReport rep;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].verdict == Verdict::Nontorsion && !o.include_nontorsion) {
      ++rep.skipped;
      continue;
    }
    todo.push_back(i);
  }

  std::map<i64, VerifyRow> rows;
  std::set<i64> pending;
  for (std::size_t i : todo) {
    const ScanRecord& r = records[i];
    VerifyRow row;
    row.D = r.D;
    row.verdict = r.verdict;
    row.rank_upper = r.selmer.rank_upper;
    if (r.point) {
      row.x = checked(r.D, mpq_class(r.point->r, r.point->s));
      if (row.x) row.source = PointSource::Record;
    }
    if (!row.x) pending.insert(r.D);
    rows.emplace(r.D, std::move(row));
  }

  if (!pending.empty() && o.height_bound > 0) {
    const auto found = pruned_search(o.height_bound, *pending.rbegin() + 1, pending);
    for (const auto& [D, p] : found) {
      VerifyRow& row = rows.at(D);
      row.x = checked(D, mpq_class(p.r, p.s));
      if (row.x) {
        row.source = PointSource::Pruned;
        pending.erase(D);
      }
    }
  }

  for (auto it = pending.begin(); it != pending.end();) {
    const i64 D = *it;
    VerifyRow& row = rows.at(D);
    if (o.height_bound > 0) {
      if (auto p = naive_search(D, o.height_bound)) {
        row.x = checked(D, mpq_class(p->r, p->s));
        if (row.x) row.source = PointSource::Naive;
      }
    }
    if (!row.x && o.torsor_bound > 0) {
      if (auto tp = torsor_search(D, o.torsor_bound)) {
        row.x = checked(D, to_mpq(tp->x_num, tp->x_den));
        if (row.x) row.source = PointSource::Torsor;
      }
    }
    if (!row.x && row.verdict != Verdict::TorsionCandidate) {
      for (hp::Prec prec : o.lift_ladder) {
        if (auto x = heegner_lift(classify(D), ctx, prec)) {
          row.x = checked(D, *x);
          if (row.x) {
            row.source = PointSource::HeegnerLift;
            break;
          }
        }
      }
    }
    it = row.x ? pending.erase(it) : std::next(it);
  }

  for (auto& [D, row] : rows) {
    ++rep.checked;
    if (row.x) ++rep.found;
    else ++rep.open;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string format_verify_row(const VerifyRow& r) {
  std::string s = "D=" + std::to_string(r.D) + " verdict=" + to_string(r.verdict) +
                  " rank_upper=" + std::to_string(r.rank_upper);
  if (r.x) {
    s += std::string(" status=point source=") + to_string(r.source) + " x=" + r.x->get_str();
  } else {
    s += " status=open";
  }
  return s;
}

ScanReport build_report(const ScanFile& f) {
  const ScanConfig& c = f.config;
  ScanReport rep;
  rep.config = c;
  std::map<TwistCls, std::size_t> slot;
  for (TwistCls cls : kOddSignClasses) {
    for (TwistCls x : c.classes) {
      if (x != cls) continue;
      slot[cls] = rep.classes.size();
      ClassReport cr;
      cr.cls = cls;
      rep.classes.push_back(cr);
    }
  }

  std::size_t next = 0;
  auto fail = [](const std::string& msg) { throw std::runtime_error("report: " + msg); };
  sieve_squarefree_range(static_cast<u64>(c.lo), static_cast<u64>(c.hi), c.mask(), [&](u64 n) {
    const i64 D = static_cast<i64>(n);
    ClassReport& cr = rep.classes[slot.at(classify(D).cls)];
    ++cr.counts.scanned;
    bool expected = true;
    if (c.mode == ScanMode::Prefiltered) {
      expected = rank3_filter(D);
      if (expected) ++cr.counts.survivors;
    }
    if (!expected) {
      if (next < f.records.size() && f.records[next].D == D) fail("record for |D| = " + std::to_string(D) + " which the filter rejects");
      return;
    }
    if (next >= f.records.size()) fail("records stop before |D| = " + std::to_string(D));
    const ScanRecord& r = f.records[next];
    if (r.D != D) fail("expected |D| = " + std::to_string(D) + ", found " + std::to_string(r.D));
    ++next;
    if (c.mode == ScanMode::Full && r.selmer.passes_rank3) ++cr.counts.survivors;
    switch (r.verdict) {
      case Verdict::Nontorsion: ++cr.counts.nontorsion; break;
      case Verdict::Indeterminate: ++cr.counts.indeterminate; break;
      case Verdict::TorsionCandidate:
        ++cr.counts.candidates;
        cr.cumulative.emplace_back(D, cr.counts.candidates);
        ++rep.total_candidates;
        break;
    }
  });
  if (next != f.records.size()) fail("stray record for |D| = " + std::to_string(f.records[next].D));
  return rep;
}

void write_report_text(std::ostream& out, const ScanReport& r) {
  const ScanConfig& c = r.config;
  out << "range " << c.lo << ".." << c.hi << ", mode "
      << (c.mode == ScanMode::Full ? "full" : "prefiltered") << "\n\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %10s %10s %8s %11s %11s %14s\n", "class", "scanned", "survivors",
                "rate", "nontorsion", "candidates", "indeterminate");
  out << buf;
  ClassCounters tot;
  for (const ClassReport& cr : r.classes) {
    const ClassCounters& k = cr.counts;
    const double rate = k.scanned ? static_cast<double>(k.survivors) / static_cast<double>(k.scanned) : 0.0;
    std::snprintf(buf, sizeof buf, "%-6s %10lld %10lld %7.2f%% %11lld %11lld %14lld\n", to_string(cr.cls),
                  static_cast<long long>(k.scanned), static_cast<long long>(k.survivors), 100 * rate,
                  static_cast<long long>(k.nontorsion), static_cast<long long>(k.candidates),
                  static_cast<long long>(k.indeterminate));
    out << buf;
    tot.scanned += k.scanned;
    tot.survivors += k.survivors;
    tot.nontorsion += k.nontorsion;
    tot.candidates += k.candidates;
    tot.indeterminate += k.indeterminate;
  }
  const double rate = tot.scanned ? static_cast<double>(tot.survivors) / static_cast<double>(tot.scanned) : 0.0;
  std::snprintf(buf, sizeof buf, "%-6s %10lld %10lld %7.2f%% %11lld %11lld %14lld\n", "total",
                static_cast<long long>(tot.scanned), static_cast<long long>(tot.survivors), 100 * rate,
                static_cast<long long>(tot.nontorsion), static_cast<long long>(tot.candidates),
                static_cast<long long>(tot.indeterminate));
  out << buf;

  std::vector<const ClassReport*> by_rate;
  for (const ClassReport& cr : r.classes) by_rate.push_back(&cr);
  std::stable_sort(by_rate.begin(), by_rate.end(), [](const ClassReport* a, const ClassReport* b) {
    return a->counts.survivors * b->counts.scanned < b->counts.survivors * a->counts.scanned;
  });
  out << "\nsurvival rates ascending:";
  for (std::size_t i = 0; i < by_rate.size(); ++i) out << (i ? " < " : " ") << to_string(by_rate[i]->cls);
  out << "\n\nreference, |D| < 10^7 (not recomputed): 8740 candidates = S5 2338, S7 2392, I6 2225, "
         "I14 1785; survival S5 21.6%, S7 16.2%, I6 32.1%, I14 35%\n";
}

void write_plot_data(std::ostream& out, const ScanReport& r) {
  bool first = true;
  for (const ClassReport& cr : r.classes) {
    if (!first) out << "\n";
    first = false;
    out << "# " << to_string(cr.cls) << "\n";
    for (auto [D, n] : cr.cumulative) out << D << '\t' << n << "\n";
  }
}

}  // namespace congruum
