#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "oscalg/thermo.hpp"

namespace oscalg::cli {

using Json = nlohmann::ordered_json;

enum class OutputFormat { kJson, kCsv };

struct Check {
  std::string name;
  bool passed;
  double max_error;
};

// One invocation's worth of output. The serialized JSON object carries
// exactly (command, params, results, checks, exit_code) in that order;
// the remaining fields steer emission and never appear in the payload.
struct RunReport {
  std::string command;
  Json params = Json::object();
  Json results = Json::object();
  std::vector<Check> checks;
  int exit_code = 0;

  OutputFormat format = OutputFormat::kJson;
  std::string out_path;        // empty: standard output
  std::string diagnostic;      // usage/help text for the diagnostic stream
  bool emit_payload = true;

  void add_check(const std::string& name, bool passed, double max_error);
  // exit 0 iff every check passed, else 1; usage errors (2) are preserved
  void settle_exit_code();
};

// Dispatches one command line (without the program name).
RunReport run(const std::vector<std::string>& argv);

// Serializes the report. Doubles render with 17 significant digits so
// identical inputs give byte-identical output. CSV is only defined for
// flat sweep/spectrum payloads and throws DomainError otherwise.
std::string render_report(const RunReport& report, OutputFormat format);

// Writes the payload to report.out_path or `out`, escalating to exit
// code 1 with a failed "io" check when the destination cannot be
// written. Returns the final exit code.
int emit_report(RunReport& report, std::ostream& out, std::ostream& diag);

// One mode per non-comment line: `boson <omega> <cutoff>` or
// `fermion <omega>`. Malformed lines raise ParseError naming the line.
EnsembleSpec parse_ensemble_file(const std::string& path, double beta = 1.0);

// Accepts "2", "1.5" or "3/2"; anything not a half-integer is a ParseError.
double parse_half_integer(const std::string& text);

// %.17g rendering used for every floating-point value in reports.
std::string format_number(double value);

}  // namespace oscalg::cli
