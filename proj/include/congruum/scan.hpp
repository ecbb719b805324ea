// The scan pipeline: one key=value record per |D|, written in ascending order
// by a single writer while a worker pool classifies ahead of it, with an
// atomically replaced checkpoint so an interrupted scan resumes to the same
// bytes.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "congruum/descent.hpp"
#include "congruum/heegner.hpp"
#include "congruum/search.hpp"

namespace congruum {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScanMode { Full, Prefiltered };

inline constexpr i64 kScanCeiling = 100'000'000;
inline constexpr std::array<TwistCls, 4> kOddSignClasses{TwistCls::S5, TwistCls::S7, TwistCls::I6,
                                                         TwistCls::I14};

struct ScanConfig {
  i64 lo = 5;
  i64 hi = 1000;
  std::vector<TwistCls> classes{kOddSignClasses.begin(), kOddSignClasses.end()};
  ScanMode mode = ScanMode::Full;
  ClassifyConfig classify;
  i64 height_bound = 30;  // naive search height for the record's point field
  bool timing = false;
  int workers = 1;        // not part of the canonical form: output does not depend on it

  // Throws ConfigError.
  void validate() const;
  ResidueMask mask() const;
};

// Space-separated key=value form; everything that can change output bytes.
std::string canonical(const ScanConfig& c);
ScanConfig parse_canonical(const std::string& s);
// 16 hex digits of FNV-1a over the canonical form
std::string config_hash(const ScanConfig& c);

// "lo..hi"
std::pair<i64, i64> parse_range(const std::string& s);
// "S5,S7,I6,I14" or "all"
std::vector<TwistCls> parse_classes(const std::string& s);
std::vector<hp::Prec> parse_ladder(const std::string& s);

struct ScanRecord {
  i64 D = 0;
  TwistCls cls = TwistCls::S5;
  i64 class_number = 0;
  i64 cm_disc = 0;
  Verdict verdict = Verdict::Indeterminate;
  std::string dist = "nan";
  std::string err = "nan";
  hp::Prec prec_bits = 0;
  SelmerBound selmer;
  std::optional<FoundPoint> point;
  std::optional<double> elapsed_ms;
};

std::string format_record(const ScanRecord& r);
// Throws std::invalid_argument on a malformed line.
ScanRecord parse_record(const std::string& line);

// Classification, Selmer bound and a small-height point for one |D|; a
// computational failure yields an Indeterminate record.
ScanRecord scan_one(i64 D, const ScanConfig& c, const HeegnerContext& ctx);

struct ClassCounters {
  i64 scanned = 0;  // squarefree |D| of the class seen so far
  i64 survivors = 0;
  i64 nontorsion = 0;
  i64 candidates = 0;
  i64 indeterminate = 0;
};

struct Checkpoint {
  std::string config;  // canonical form
  std::string out;     // output path the offsets refer to
  i64 last_D = 0;      // every |D| <= last_D is accounted for
  std::uint64_t offset = 0;
  i64 records = 0;
  std::array<ClassCounters, 4> counters{};
  bool complete = false;
};

std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& p);
// Writes to a sibling temporary file and renames it over p.
void write_checkpoint(const std::filesystem::path& p, const Checkpoint& cp);

struct ScanSummary {
  i64 records = 0;
  i64 indeterminate = 0;
  bool resumed = false;
  bool already_complete = false;
  std::array<ClassCounters, 4> counters{};
};

struct ScanOptions {
  std::filesystem::path out;
  std::filesystem::path checkpoint;  // empty: no checkpointing
  i64 checkpoint_every = 32;         // records between checkpoints
  std::function<void(i64)> on_flush; // last |D| written, after each checkpoint
};

// Resumes automatically when the checkpoint exists and matches the config.
ScanSummary run_scan(const ScanConfig& c, const ScanOptions& o, const HeegnerContext& ctx);

std::string header_line(const ScanConfig& c);

struct ScanFile {
  ScanConfig config;
  std::vector<ScanRecord> records;
};

ScanFile read_scan_file(const std::filesystem::path& p);

}  // namespace congruum
