#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmkdv/lattice.hpp"
#include "dmkdv/model.hpp"

namespace dmkdv {

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& name);

struct Tolerances {
  double quadrature = 1e-11;
  /// Allowed imag_residual / t^{-1/2} for the selected sign convention.
  double realness = 0.05;
  double spill = 1e-10;
  /// C in the ConventionError threshold 10 C log(t) / t.
  double realness_calibration = 0.01;
};

struct OutputSpec {
  std::string path;
  OutputFormat format = OutputFormat::csv;
};

struct RunConfig {
  InitialProfile profile{};
  std::vector<double> rays{0.5};
  std::vector<double> times{100.0, 200.0, 400.0, 800.0};
  double dt = 0.005;
  /// Buffer beyond the light cone |n| = 2 t, see window_half_width().
  double window_margin = 120.0;
  std::size_t grid_size = 256;
  /// Largest admissible |v|.
  double max_speed = 1.8;
  Tolerances tolerances{};
  SignConvention sign_convention = SignConvention::per_parity;
  OutputSpec output{};
  unsigned threads = 1;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

/// Parses the JSON configuration and applies `key=value` overrides, where key
/// is a dotted path (e.g. profile.amplitude) and value is JSON or a bare string.
/// Throws ConfigError on malformed input.
RunConfig parse_config(std::string_view json_text, std::span<const std::string> overrides = {});
RunConfig load_config(const std::string& path, std::span<const std::string> overrides = {});
std::string config_to_json(const RunConfig& config);

struct ComparisonRecord {
  std::int64_t n = 0;
  double t = 0.0;
  double v = 0.0;
  double q_direct = 0.0;
  double q_asym = 0.0;
  double abs_err = 0.0;
  /// abs_err * t / log t
  double scaled_err = 0.0;
  double imag_residual = 0.0;

  /// sum_j |contribution_j|, the envelope of the leading term.
  double amplitude = 0.0;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string error;
};

/// Integrates the profile once up to the largest time (window from
/// window_half_width(t_max, margin)), then evaluates the leading term at n = round(v t) for
/// every (v, t). Rows are ordered v-major then t. A failure in one row (or a
/// spill from some time onward) marks the affected rows failed.
std::vector<ComparisonRecord> run_compare(const RunConfig& config);

/// CSV header `n,t,v,q_direct,q_asym,abs_err,scaled_err,imag_residual`, or a
/// JSON array of objects with those keys. Numbers are shortest round-trip
/// decimals; failed rows carry nan (CSV) / null (JSON).
std::string format_records(std::span<const ComparisonRecord> records, OutputFormat format);
std::vector<ComparisonRecord> parse_records(std::string_view text, OutputFormat format);

/// Writes format_records() to path. Throws ConfigError for empty input (no
/// file is created) and IoError when the file cannot be written.
void emit(std::span<const ComparisonRecord> records, OutputFormat format, const std::string& path);

/// Shortest decimal that round-trips to x.
std::string format_double(double x);

struct SelfTestCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  SignConvention convention = SignConvention::per_parity;
  bool all_pass() const;
};

/// Runs the invariant checks with the quadrature tolerance and sign
/// convention taken from `config`.
SelfTestReport selftest(const RunConfig& config);
std::string report_to_json(const SelfTestReport& report);

}  // namespace dmkdv
