#include "kindmc/report.h"

#include <cmath>
#include <ctime>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace kindmc {

using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kRecordKeys = {"benchmark", "mode", "outcome",
                                           "k", "witness_len", "time_ms",
                                           "solver_calls", "targets_added",
                                           "proof_source"};

json record_json(const RunRecord &r)
{
  json j;
  j["benchmark"] = r.benchmark;
  j["mode"] = to_string(r.mode);
  j["outcome"] = to_string(r.outcome);
  j["k"] = r.k;
  j["witness_len"] = r.witness_len ? json(*r.witness_len) : json(nullptr);
  j["time_ms"] = r.time_ms;
  j["solver_calls"] = r.solver_calls;
  j["targets_added"] = r.targets_added;
  j["proof_source"] = r.proof_source ? json(to_string(*r.proof_source)) : json(nullptr);
  return j;
}

template <typename E>
E enum_from(const json &v, const char *key, std::initializer_list<E> all)
{
  if (!v.is_string()) {
    throw SchemaError(std::string(key) + ": expected a string");
  }
  for (E e : all) {
    if (to_string(e) == v.get<std::string>()) {
      return e;
    }
  }
  throw SchemaError(std::string(key) + ": unexpected value " + v.dump());
}

uint64_t unsigned_from(const json &v, const char *key)
{
  if (!v.is_number_integer() || v.get<int64_t>() < 0) {
    throw SchemaError(std::string(key) + ": expected a non-negative integer");
  }
  return v.get<uint64_t>();
}

RunRecord record_from(const json &j)
{
  if (!j.is_object()) {
    throw SchemaError("record: expected an object");
  }
  for (const auto &[key, value] : j.items()) {
    if (!kRecordKeys.count(key)) {
      throw SchemaError("record: unexpected key " + key);
    }
  }
  for (const auto &key : kRecordKeys) {
    if (!j.contains(key)) {
      throw SchemaError("record: missing key " + key);
    }
  }
  RunRecord r;
  if (!j["benchmark"].is_string()) {
    throw SchemaError("benchmark: expected a string");
  }
  r.benchmark = j["benchmark"].get<std::string>();
  r.mode = enum_from(j["mode"], "mode", {EngineMode::Plain, EngineMode::Extended});
  r.outcome = enum_from(j["outcome"], "outcome",
                        {Outcome::BugFound, Outcome::Correct, Outcome::BoundExhausted});
  r.k = static_cast<unsigned>(unsigned_from(j["k"], "k"));
  if (!j["witness_len"].is_null()) {
    r.witness_len = unsigned_from(j["witness_len"], "witness_len");
  }
  if (!j["time_ms"].is_number_integer()) {
    throw SchemaError("time_ms: expected an integer");
  }
  r.time_ms = j["time_ms"].get<int64_t>();
  r.solver_calls = static_cast<unsigned>(unsigned_from(j["solver_calls"], "solver_calls"));
  r.targets_added =
      static_cast<unsigned>(unsigned_from(j["targets_added"], "targets_added"));
  if (!j["proof_source"].is_null()) {
    r.proof_source =
        enum_from(j["proof_source"], "proof_source",
                  {ProofSource::ForwardCondition, ProofSource::InductiveStep});
  }
  return r;
}

json parse_json(const std::string &text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

json valuation_json(const Valuation &v)
{
  json j = json::object();
  for (const auto &[name, value] : v) {
    j[name] = value;
  }
  return j;
}

json trace_json(const Trace &t)
{
  json j;
  j["length"] = t.length();
  j["violated_prop"] = t.violated_prop ? json(*t.violated_prop) : json(nullptr);
  j["states"] = json::array();
  for (const auto &s : t.states) {
    j["states"].push_back(valuation_json(s.bindings));
  }
  j["inputs"] = json::array();
  for (const auto &in : t.inputs) {
    j["inputs"].push_back(valuation_json(in));
  }
  return j;
}

std::string fixed(double v, int digits)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

std::string solver_label(const SolverConfig &c)
{
  return c.backend == BackendKind::Enumerator ? "enum" : "external:" + c.command;
}

RunRecord make_record(const std::string &benchmark, const VerificationReport &r)
{
  RunRecord rec;
  rec.benchmark = benchmark;
  rec.mode = r.config.mode;
  rec.outcome = r.outcome;
  rec.k = r.final_k;
  if (r.witness) {
    rec.witness_len = r.witness->length();
  }
  rec.time_ms = std::llround(r.time_ms());
  rec.solver_calls = r.solver_calls();
  rec.targets_added = r.targets_added();
  rec.proof_source = r.proof_source;
  return rec;
}

std::string record_to_json(const RunRecord &r) { return record_json(r).dump(); }

RunRecord record_from_json(const std::string &text) { return record_from(parse_json(text)); }

std::string records_to_json(const std::vector<RunRecord> &rs)
{
  json arr = json::array();
  for (const auto &r : rs) {
    arr.push_back(record_json(r));
  }
  return arr.dump(2) + "\n";
}

std::vector<RunRecord> records_from_json(const std::string &text)
{
  json arr = parse_json(text);
  if (!arr.is_array()) {
    throw SchemaError("expected a JSON array of records");
  }
  std::vector<RunRecord> out;
  for (const auto &j : arr) {
    out.push_back(record_from(j));
  }
  return out;
}

std::string records_to_markdown(const std::vector<RunRecord> &rs)
{
  std::map<std::string, std::map<EngineMode, const RunRecord *>> rows;
  for (const auto &r : rs) {
    rows[r.benchmark][r.mode] = &r;
  }
  std::ostringstream os;
  os << "| benchmark | outcome | k plain | k extended | time plain (ms) "
        "| time extended (ms) | calls plain | calls extended |\n";
  os << "|---|---|---:|---:|---:|---:|---:|---:|\n";
  double tp = 0, te = 0, kp = 0, ke = 0;
  size_t n = 0;
  auto cell = [](const RunRecord *r, auto field) {
    return r ? std::to_string(field(*r)) : std::string("-");
  };
  for (const auto &[name, modes] : rows) {
    auto find = [&](EngineMode m) -> const RunRecord * {
      auto it = modes.find(m);
      return it == modes.end() ? nullptr : it->second;
    };
    const RunRecord *p = find(EngineMode::Plain);
    const RunRecord *e = find(EngineMode::Extended);
    std::string outcome = to_string((p ? p : e)->outcome);
    if (p && e && p->outcome != e->outcome) {
      outcome = to_string(p->outcome) + " / " + to_string(e->outcome);
    }
    os << "| " << name << " | " << outcome << " | "
       << cell(p, [](const RunRecord &r) { return r.k; }) << " | "
       << cell(e, [](const RunRecord &r) { return r.k; }) << " | "
       << cell(p, [](const RunRecord &r) { return r.time_ms; }) << " | "
       << cell(e, [](const RunRecord &r) { return r.time_ms; }) << " | "
       << cell(p, [](const RunRecord &r) { return r.solver_calls; }) << " | "
       << cell(e, [](const RunRecord &r) { return r.solver_calls; }) << " |\n";
    if (p && e) {
      tp += static_cast<double>(p->time_ms);
      te += static_cast<double>(e->time_ms);
      kp += p->k;
      ke += e->k;
      ++n;
    }
  }
  if (n) {
    const double d = static_cast<double>(n);
    os << "| **Average** | | " << fixed(kp / d, 1) << " | " << fixed(ke / d, 1) << " | "
       << fixed(tp / d, 1) << " | " << fixed(te / d, 1) << " | | |\n";
    os << "| **Total** | | " << fixed(kp, 0) << " | " << fixed(ke, 0) << " | "
       << fixed(tp, 0) << " | " << fixed(te, 0) << " | | |\n";
  }
  return os.str();
}

std::string report_to_json(const std::string &benchmark, const VerificationReport &r,
                           const std::string &timestamp)
{
  json j = record_json(make_record(benchmark, r));
  if (!timestamp.empty()) {
    j["timestamp"] = timestamp;
  }
  const EngineConfig &c = r.config;
  j["config"] = {{"engine", to_string(c.mode)},
                 {"max_k", c.max_k},
                 {"target_recheck", to_string(c.target_recheck)},
                 {"solver", solver_label(c.solver)},
                 {"timeout_ms", c.solver.timeout_ms},
                 {"validate_witness", c.validate_witness}};
  j["inconclusive"] = r.inconclusive;
  j["matched_target"] = r.matched_target ? json(*r.matched_target) : json(nullptr);
  j["iterations"] = json::array();
  for (const auto &it : r.iterations) {
    json ij;
    ij["k"] = it.k;
    ij["targets_added"] = it.targets_added;
    ij["time_ms"] = std::llround(it.time_ms);
    ij["queries"] = json::array();
    for (const auto &q : it.queries) {
      json qj;
      qj["kind"] = to_string(q.kind);
      qj["targets_only"] = q.targets_only;
      qj["status"] = to_string(q.status);
      qj["time_ms"] = std::llround(q.time_ms);
      if (!q.diagnostic.empty()) {
        qj["diagnostic"] = q.diagnostic;
      }
      ij["queries"].push_back(std::move(qj));
    }
    j["iterations"].push_back(std::move(ij));
  }
  j["targets"] = json::array();
  for (const auto &t : r.targets) {
    j["targets"].push_back({{"id", t.id},
                            {"born_at_k", t.born_at_k},
                            {"first_state", valuation_json(t.first_state.bindings)},
                            {"suffix_len", t.suffix.length()}});
  }
  j["warnings"] = r.warnings;
  j["witness"] = r.witness ? trace_json(*r.witness) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string format_trace(const Trace &t)
{
  std::ostringstream os;
  for (size_t i = 0; i < t.states.size(); ++i) {
    os << "  " << std::setw(3) << i << ": " << to_string(t.states[i]);
    if (i < t.inputs.size() && !t.inputs[i].empty()) {
      os << "   inputs:";
      for (const auto &[name, v] : t.inputs[i]) {
        os << " " << name << "=" << v;
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string report_to_text(const std::string &benchmark, const VerificationReport &r)
{
  std::ostringstream os;
  os << benchmark << ": " << to_string(r.outcome) << " at k=" << r.final_k << " ("
     << to_string(r.config.mode) << ", " << r.solver_calls() << " solver calls, "
     << fixed(r.time_ms(), 1) << " ms)\n";
  if (r.proof_source) {
    os << "proved by the "
       << (*r.proof_source == ProofSource::ForwardCondition ? "forward condition"
                                                             : "inductive step")
       << "\n";
  }
  if (!r.targets.empty()) {
    os << r.targets.size() << " target(s) collected\n";
  }
  if (r.witness) {
    os << "counterexample, " << r.witness->length() << " states";
    if (r.witness->violated_prop) {
      os << ", violates " << *r.witness->violated_prop;
    }
    if (r.matched_target) {
      os << " (forward path joined with target " << *r.matched_target << ")";
    }
    os << ":\n" << format_trace(*r.witness);
  }
  for (const auto &w : r.warnings) {
    os << "warning: " << w << "\n";
  }
  return os.str();
}

std::string utc_timestamp()
{
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace kindmc
