// Follow-up on scan records: exact rational points for the candidates, and
// the per-class statistics of a finished scan.
#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "congruum/scan.hpp"

namespace congruum {

enum class PointSource { None, Record, Pruned, Naive, Torsor, HeegnerLift };
const char* to_string(PointSource s);

struct VerifyOptions {
  i64 height_bound = 200;   // pruned and naive search height
  i64 torsor_bound = 300;   // coprime u, v on the Selmer torsors
  bool include_nontorsion = false;
  // Nontorsion and Indeterminate records only; a torsion P_D carries no point
  std::vector<hp::Prec> lift_ladder{1024, 2048};
};

struct VerifyRow {
  i64 D = 0;
  Verdict verdict = Verdict::Indeterminate;
  int rank_upper = 0;
  PointSource source = PointSource::None;
  std::optional<mpq_class> x;  // abscissa on D y^2 = x^3 - x, exactly checked
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  i64 checked = 0;
  i64 found = 0;
  i64 open = 0;
  i64 skipped = 0;  // Nontorsion records left alone
};

VerifyReport verify_records(const std::vector<ScanRecord>& records, const VerifyOptions& o,
                            const HeegnerContext& ctx);
std::string format_verify_row(const VerifyRow& r);

struct ClassReport {
  TwistCls cls = TwistCls::S5;
  ClassCounters counts;
  // (|D|, number of TorsionCandidates up to |D|) at every candidate
  std::vector<std::pair<i64, i64>> cumulative;
};

struct ScanReport {
  ScanConfig config;
  std::vector<ClassReport> classes;
  i64 total_candidates = 0;
};

// Throws std::runtime_error when the records do not cover the configured
// range exactly (gaps, duplicates, strays or disorder).
ScanReport build_report(const ScanFile& f);
void write_report_text(std::ostream& out, const ScanReport& r);
// Blocks "# cls" followed by "|D|<TAB>cumulative" rows, blank line between classes.
void write_plot_data(std::ostream& out, const ScanReport& r);

}  // namespace congruum
