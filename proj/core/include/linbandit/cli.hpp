#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "linbandit/analytics.hpp"
#include "linbandit/harness.hpp"

namespace linbandit {

/// Raised on malformed command lines; `message` is a one-line human-readable
/// explanation and the process should exit with nonzero status.
struct CliError : std::runtime_error {
  explicit CliError(const std::string& message) : std::runtime_error(message) {}
};

struct BoundsQuery {
  int d = 120;
  long horizon = 10000;
  int n = 10;
  int k = 10;
  double a_bound = 5.0;
  double sigma = 1.0;
  double lambda = 1.0;
  double theta_bound = 0.0;  // <= 0: sqrt(d)
  PolicyConfig policy;       // OFUL, TS, or SG
  double delta = 0.0;        // <= 0: the infimum-attaining value
  double q_delta = 1.0;
};

struct DiagnoseArgs {
  std::string trace_path;
  double delta = 0.0;  // margin-fit cap; <= 0 picks the empirical default
};

struct ParsedCommand {
  enum class Kind { kRun, kBounds, kDiagnose } kind = Kind::kRun;
  ExperimentConfig run;
  BoundsQuery bounds;
  DiagnoseArgs diagnose;
};

/// Parses a full command line (without the program name). Unknown flags,
/// malformed values, and constraint violations raise CliError.
ParsedCommand parse_command_line(const std::vector<std::string>& args);

/// Certificate for the queried policy: K from the closed-form complexity
/// bound, p from the policy's optimism parameter at radius rho, D the
/// Gaussian-prior surrogate 4 a^2 (theta + sqrt(7 log T))^2.
BoundCertificate bounds_from_query(const BoundsQuery& query);

/// Human-readable margin and expansion diagnostics over a parsed trace file,
/// grouped by policy.
std::string diagnose_report(const std::vector<TraceRecord>& records,
                            double delta = 0.0);

/// Full command-line entry point; returns the process exit status.
int run_cli(int argc, const char* const* argv);

}  // namespace linbandit
