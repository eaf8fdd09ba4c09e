#pragma once

// Seeded property suites over the atlas, bundle and restricted modules, and
// report emission.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grassmann/parallel.hpp"
#include "grassmann/types.hpp"

namespace grassmann {

enum class SuiteId { atlas, bundles, restricted, all };

const char* to_string(SuiteId id) noexcept;
/// Throws config_error for unknown names.
SuiteId suite_from_string(const std::string& name);

struct SuiteConfig {
  SuiteId suite = SuiteId::all;
  std::vector<Index> dims{4, 8, 16};
  int trials = 100;
  std::uint64_t seed = 42;
  /// Check tolerance key → value; unknown keys are a config_error.
  std::map<std::string, double> tolerances;
  std::vector<Index> ladder{16, 32, 64, 128};
  ExecPolicy exec = ExecPolicy::openmp;

  /// Throws config_error unless trials ≥ 1, dims ≥ 2, tolerances > 0 and
  /// the ladder is strictly increasing.
  void validate() const;
};

struct CheckResult {
  std::string name;
  int trials = 0;
  /// Worst observed error in the check's own metric (absolute, relative or
  /// a violation count; see the registry).
  double max_abs_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<std::uint64_t> worst_seed;

  bool operator==(const CheckResult&) const = default;
};

/// Static description of a check: the property it executes, the module that
/// declares it, the key used to override its tolerance, and the default.
struct CheckSpec {
  const char* name;
  SuiteId suite;
  const char* tolerance_key;
  double default_tolerance;
  const char* property;
};

std::span<const CheckSpec> check_registry();

/// Runs every registered check of cfg.suite (all suites for `all`) in
/// registry order. Deterministic given cfg; the serial and OpenMP policies
/// produce identical results.
std::vector<CheckResult> run_suite(const SuiteConfig& cfg);

enum class ReportFormat { json, text };

/// JSON: {"checks": [...]} plus "suite", "seed", "dims" when cfg is given;
/// keys sorted, floats at 17 significant digits. Text: one line per check.
std::string emit_report(std::span<const CheckResult> results, ReportFormat format,
                        const SuiteConfig* cfg = nullptr);

/// Reads back the "checks" array of a JSON report.
std::vector<CheckResult> parse_report(const std::string& json_text);

}  // namespace grassmann
