#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kindmc/engine.h"

namespace kindmc {

/// one row of a benchmark or verification run, in the stable JSON schema
struct RunRecord
{
  std::string benchmark;
  EngineMode mode = EngineMode::Extended;
  Outcome outcome = Outcome::BoundExhausted;
  unsigned k = 0;
  std::optional<uint64_t> witness_len;
  int64_t time_ms = 0;
  unsigned solver_calls = 0;
  unsigned targets_added = 0;
  std::optional<ProofSource> proof_source;

  friend bool operator==(const RunRecord &, const RunRecord &) = default;
};

class SchemaError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

RunRecord make_record(const std::string &benchmark, const VerificationReport &r);

/// compact single-line JSON object with exactly the schema keys
std::string record_to_json(const RunRecord &r);
/// strict inverse of record_to_json; throws SchemaError
RunRecord record_from_json(const std::string &text);

/// JSON array of records, pretty-printed
std::string records_to_json(const std::vector<RunRecord> &rs);
std::vector<RunRecord> records_from_json(const std::string &text);

/** Markdown table of a benchmark run, one row per benchmark with both
 *  modes side by side, followed by Average and Total rows for time and
 *  k. */
std::string records_to_markdown(const std::vector<RunRecord> &rs);

/** Full verification report as JSON: the record keys plus `timestamp`,
 *  `config`, `iterations`, `targets`, `warnings` and `witness`. Pass an
 *  empty timestamp to omit the key. */
std::string report_to_json(const std::string &benchmark, const VerificationReport &r,
                           const std::string &timestamp);

/// human-readable summary with the witness, if any
std::string report_to_text(const std::string &benchmark, const VerificationReport &r);

std::string format_trace(const Trace &t);

/// current UTC time as YYYY-MM-DDTHH:MM:SSZ
std::string utc_timestamp();

std::string solver_label(const SolverConfig &c);

}  // namespace kindmc
