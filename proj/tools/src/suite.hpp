#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "draws.hpp"
#include "json.hpp"

namespace hhlab::suite {

using nlohmann::json;

enum class Command { Constants, Verify, Sharpness, Suite };
enum class Format { Json, Csv };

std::optional<Command> command_from_name(const std::string& name);
std::string command_name(Command c);

struct ConstantEntry {
  KernelSpec kernel;
  double r = 0.5;
};

struct SharpnessEntry {
  KernelSpec kernel;
  double p = 2.0;
  double r = 0.5;
  std::vector<double> epsilons;
};

struct RandomBlock {
  std::vector<Family> families;
  int draws = 1;
  std::vector<double> exponents;  // empty: per-family defaults
};

struct RunConfig {
  Command command = Command::Suite;
  std::uint64_t seed = 0;
  double tolerance = 1e-7;
  long truncation = 10000;
  Format format = Format::Json;
  std::vector<ConstantEntry> constants;
  std::vector<Instance> checks;
  std::vector<SharpnessEntry> sharpness;
  std::optional<RandomBlock> random;
  bool alternating_series = false;
};

// Parses a config document; ConfigError messages start with the offending field path.
RunConfig parse_config(const json& doc, Command command);
// Built-in configuration used when no --config is given.
RunConfig default_config(Command command);
// Validates every kernel and exponent configuration up front (ConfigError naming the field).
void validate(const RunConfig& cfg);

// A finite double as a number, otherwise "inf", "-inf" or "nan".
json number(double v);

struct RunOutcome {
  std::vector<json> records;  // header first
  int errors = 0;
  int violated = 0;
  int exit_code() const { return errors > 0 ? 1 : (violated > 0 ? 2 : 0); }
};

RunOutcome run(const RunConfig& cfg, unsigned workers = 0);

void write_jsonl(const RunOutcome& outcome, std::ostream& out);
void write_csv(const RunOutcome& outcome, std::ostream& out);

}  // namespace hhlab::suite
