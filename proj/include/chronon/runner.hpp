#ifndef CHRONON_RUNNER_HPP
#define CHRONON_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chronon/errors.hpp"
#include "chronon/types.hpp"

namespace chronon::cli {

enum class Command { Dispersion, Evolve, Commutators, Derivative };
enum class Format { Csv, Json };

/// Rejected command line or config file; the message names the offending key.
class ArgumentError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// --help was requested; what() holds the rendered help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sweep {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 2;
  bool log = false;

  [[nodiscard]] std::vector<double> values() const;
};

/// Parses `<param>:<start>:<stop>:<count>[:log]`.
Sweep parse_sweep(const std::string& text);

struct ScenarioConfig {
  Command command = Command::Dispersion;
  CaseTag case_tag = CaseTag::A;
  double tau = 0.1;
  double lambda_re = 1.0;
  double lambda_im = 0.0;
  double ds_re = 1.0;
  double ds_im = 0.0;
  double m = 1.0;
  double p0 = 1.0;
  double sigma = 0.25;
  std::size_t grid_n = 4096;
  double p_max = 16.0;
  std::size_t steps = 1000;
  double dt = 0.01;
  std::string scheme;  ///< literal | leapfrog | effective; empty selects the case default
  std::size_t record_every = 1;
  std::size_t draws = 100;
  std::optional<Sweep> sweep;
  std::string out_path = "-";
  Format format = Format::Csv;
  std::uint64_t seed = 1;

  /// The discretization scheme named by case/tau/lambda/ds.
  [[nodiscard]] StepSpec step_spec() const;
  [[nodiscard]] StepSpec step_spec(double tau_override) const;
  /// Scheme after applying the case default.
  [[nodiscard]] std::string resolved_scheme() const;
};

std::string to_string(Command c);

/// argv without the program name: `<command> [--flag value ...] [--config file]`.
/// Config files hold `key=value` lines named like the long flags; flags win over the file.
ScenarioConfig parse_config(const std::vector<std::string>& args);

using Value = std::variant<double, std::int64_t, std::string>;

/// One flat output row; the field order is the column order.
struct OutputRecord {
  std::vector<std::pair<std::string, Value>> fields;

  void add(std::string name, Value v) { fields.emplace_back(std::move(name), std::move(v)); }
};

/// Column set per command, in emission order.
std::vector<std::string> schema(Command c);

std::vector<OutputRecord> run_scenario(const ScenarioConfig& cfg);

/// Governing parameters as a flat record (JSON `config` object).
OutputRecord config_record(const ScenarioConfig& cfg);

/// Shortest round-trip decimal for a double (locale independent).
std::string format_number(double v);

/// Serializes to a string. CSV: header + rows; JSON: {schema, config, rows}.
std::string render(const std::vector<OutputRecord>& records, Format format,
                   const OutputRecord& config = {});

/// Writes render(...) to out_path ("-" = stdout). No file is created on error.
void emit(const std::vector<OutputRecord>& records, Format format, const std::string& out_path,
          const OutputRecord& config = {});

}  // namespace chronon::cli

#endif  // CHRONON_RUNNER_HPP
