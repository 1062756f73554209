#pragma once

// Command implementations behind the CLI. They live in the library so that
// tests can drive them in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crange/criteria.hpp"
#include "crange/hardy.hpp"
#include "crange/observable.hpp"
#include "crange/symbols.hpp"

namespace crange {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct VerifyConfig {
  std::vector<double> ps = {0.5, 1.0, 2.0, 4.0};
  /// Replaces p^2/2 in the Hardy-Stein norm; used as a negative control.
  std::optional<double> hardy_stein_constant;
  double norm_tol = 1e-4;
  double cov_tol = 1e-4;
  double pb2_tol = 1e-2;
  std::size_t pb2_samples = 1'000'000;
  int disk_radial = 512;
  int disk_angular = 2048;
  int circle_nodes = 16384;
  double pb1_c = 1.0 / 16.0;
  int pb1_angles = 16;
  int pb1_min_k = 4;
  int pb1_max_k = 9;
};

struct RunConfig {
  /// As given on the command line: a file path or inline records.
  std::string symbols_source;
  /// Record text after resolving a file path; unset selects the built-in corpus.
  std::optional<std::string> symbols_text;
  std::vector<double> ps = {2.0};
  std::uint64_t seed = 20240611;
  /// Overrides the kernel, G_c and window grid depths when positive.
  int depth = 0;
  std::string out_dir = "crange-out";
  /// json, csv or both.
  std::string format = "both";
  CriteriaConfig criteria;
  VerifyConfig verify;
  /// "x" substitutes values into a "{x}" placeholder in the symbol record; "p" sweeps the exponent.
  std::string sweep_param = "x";
  std::vector<double> sweep_values;
  std::vector<std::string> overrides;

  /// Seed and depth folded into the criteria settings.
  CriteriaConfig resolved_criteria() const;
  /// Every resolved field, defaults included.
  nlohmann::json echo() const;
};

/// Applies "key=value"; throws ParseError for unknown keys or bad values.
void apply_override(RunConfig& config, const std::string& key_value);
std::vector<std::string> override_keys();

/// A readable file's contents, otherwise the string itself as inline records.
std::string resolve_symbols_source(const std::string& source);

/// Golden corpus used when no symbols are given.
std::string default_corpus();

/// Zero-free functions for the three-way norm agreement check.
std::vector<TestFunction> norm_agreement_family();
std::vector<TestObservable> change_of_variable_observables();
std::vector<TestObservable> pb2_observables();

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace crange
