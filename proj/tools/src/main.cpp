#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hhlab/error.hpp"
#include "suite.hpp"

namespace {

using hhlab::suite::Command;

int execute(Command command, const std::string& config_path, const std::string& out_path,
            std::optional<std::uint64_t> seed, std::optional<double> tol, std::optional<long> truncation,
            std::optional<std::string> format, unsigned jobs) {
  using namespace hhlab::suite;
  RunConfig cfg;
  try {
    if (config_path.empty()) {
      cfg = default_config(command);
    } else {
      std::ifstream in(config_path);
      if (!in) hhlab::raise(hhlab::ErrorKind::ConfigError, "config: cannot open '" + config_path + "'");
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        hhlab::raise(hhlab::ErrorKind::ConfigError, std::string("config: parse error: ") + e.what());
      }
      cfg = parse_config(doc, command);
    }
    if (seed) cfg.seed = *seed;
    if (tol) {
      if (!(*tol > 0.0 && *tol < 1.0)) hhlab::raise(hhlab::ErrorKind::ConfigError, "tolerance: expected a value in (0, 1)");
      cfg.tolerance = *tol;
    }
    if (truncation) {
      if (*truncation < 10) hhlab::raise(hhlab::ErrorKind::ConfigError, "truncation: expected an integer >= 10");
      cfg.truncation = *truncation;
    }
    if (format) cfg.format = *format == "csv" ? Format::Csv : Format::Json;
    validate(cfg);
  } catch (const hhlab::Error& e) {
    std::cerr << "hhlab: " << e.what() << '\n';
    return 1;
  }

  const RunOutcome outcome = run(cfg, jobs);
  std::ostringstream buffer;
  if (cfg.format == Format::Csv) {
    write_csv(outcome, buffer);
  } else {
    write_jsonl(outcome, buffer);
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << buffer.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "hhlab: cannot write '" << out_path << "'\n";
      return 1;
    }
    out << buffer.str();
  }
  std::cerr << "hhlab: " << outcome.records.size() - 2 << " records, " << outcome.errors << " errors, "
            << outcome.violated << " violated\n";
  return outcome.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Hardy-Hilbert type inequalities with homogeneous kernels"};
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<long> truncation;
    std::optional<std::string> format;
    unsigned jobs = 0;
  };
  Options opt;
  Command selected = Command::Suite;

  auto add = [&](const char* name, const char* help, Command command) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON run configuration");
    sub->add_option("--out", opt.out, "Report path (default stdout)");
    sub->add_option("--seed", opt.seed, "Seed for random draws");
    sub->add_option("--tol", opt.tol, "Relative quadrature tolerance");
    sub->add_option("--truncation", opt.truncation, "Truncation N for discrete sums");
    sub->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--jobs", opt.jobs, "Worker threads (0 = hardware concurrency)");
    sub->callback([&selected, command] { selected = command; });
  };
  add("constants", "Kernel constants against closed forms", Command::Constants);
  add("verify", "Verify inequality instances", Command::Verify);
  add("sharpness", "Extremal-family sharpness sweeps", Command::Sharpness);
  add("suite", "Constants, verification draws and sharpness sweeps", Command::Suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return execute(selected, opt.config, opt.out, opt.seed, opt.tol, opt.truncation, opt.format, opt.jobs);
}
