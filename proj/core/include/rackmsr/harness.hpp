#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rackmsr/bounds.hpp"
#include "rackmsr/codec_io.hpp"
#include "rackmsr/codeword.hpp"

namespace rackmsr::harness {

struct ExperimentConfig {
  io::Family family = io::Family::c1;
  std::map<std::string, long> params;
  std::uint64_t seed = 1;
  int codewords = 10;               // random codewords per erasure-decoding pass
  std::optional<long> sample;       // cap on scenarios; unset = ceiling rule
  long scenario_ceiling = 5000;     // exhaustive scopes up to this many scenarios
  std::vector<std::string> checks;  // empty = family defaults
};

/// Check names: mds, repair, uniform-download, access, bounds, optimal-update.
bool known_check(const std::string& name);
std::vector<std::string> default_checks(io::Family f);

struct Scenario {
  int failed = -1;
  std::vector<int> helpers;
};
std::string scenario_label(const Scenario& s);

/// All (failed node, helper set) pairs when their count is within the
/// ceiling; otherwise stratified sampling that still covers every failed
/// node, drawn from the run seed.
std::vector<Scenario> enumerate_scenarios(const io::CodeHandle& code,
                                          const ExperimentConfig& cfg);

struct SweepResult {
  bool all_exact = true;
  std::string first_failure;  // scenario label; empty when clean
  std::vector<Scenario> scope;
  std::vector<RepairTranscript> transcripts;  // parallel to scope
};

struct CheckResult {
  std::string name;
  std::string status;  // pass | fail | skip
  std::string detail;  // failing/worst scenario, hypothesis notes
  std::map<std::string, long> counts;
  std::vector<bounds::BoundReport> bound_table;
  bool passed() const { return status != "fail"; }
};

struct Report {
  std::string family;
  std::vector<std::pair<std::string, long>> params;
  std::uint64_t seed = 0;
  std::string field;
  std::map<std::string, long> derived;
  std::vector<CheckResult> checks;
  double wall_seconds = 0;  // informational; excluded from the canonical form

  bool all_passed() const;
  /// Canonical form: keys sorted, no volatile fields; identical config and
  /// seed give byte-identical output.
  std::string to_json() const;
  std::string to_tsv() const;
};

/// Decode hook for fault-injection tests; the default uses the code's own
/// eraure decoder.
using DecodeFn =
    std::function<Codeword(const Codeword&, const std::vector<int>&)>;

/// Decodes every erasure pattern in scope on `codewords` random words (or on
/// `fixed` alone when given, after a parity gate) and compares with the
/// original.
CheckResult verify_mds(const io::CodeHandle& code, const ExperimentConfig& cfg,
                       const Codeword* fixed = nullptr, DecodeFn decode = {});

/// Repairs every scenario and meters the transcripts.
SweepResult run_repair_sweep(const io::CodeHandle& code, const Codeword& cw,
                             const std::vector<Scenario>& scope);
CheckResult summarize_repair(const io::CodeHandle& code, const SweepResult& sweep);

/// True (pass) iff every helper group in every transcript contributed exactly
/// l / stages base symbols; skipped when fewer than two whole groups hold
/// data, where the uniformity statement's hypothesis fails.
CheckResult check_uniform_download(const io::CodeHandle& code,
                                   const SweepResult& sweep);

/// Compares measured per-node and total reads against the access floor and
/// records the measured-to-floor ratio; also requires the accessed row set to
/// depend only on the failed node.
CheckResult check_access(const io::CodeHandle& code, const SweepResult& sweep);

/// Bound table: repair downloads against the cut-set floors (plus the
/// rack/local split when the geometry admits it) and the array height against
/// the sub-packetization floor.
CheckResult check_bounds(const io::CodeHandle& code, const SweepResult& sweep);

/// Probes single-symbol data updates: each must touch exactly r parity
/// symbols, all in the changed row.
CheckResult check_optimal_update(const io::CodeHandle& code,
                                 const ExperimentConfig& cfg);

Report run(const ExperimentConfig& cfg);
Report run(const io::CodeHandle& code, const ExperimentConfig& cfg,
           const Codeword* fixed = nullptr);

}  // namespace rackmsr::harness
