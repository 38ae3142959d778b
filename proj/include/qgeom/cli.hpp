#pragma once

#include "qgeom/verify.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qgeom {

enum ExitCode : int {
  kExitOk = 0,
  kExitSuiteFailed = 1,
  kExitParse = 2,
  kExitNumeric = 3,
  kExitUnknownSuite = 4,
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::string out;  // empty: write to the output stream
  std::string format = "json";
  ToleranceProfile profile = ToleranceProfile::standard;

  // metric, alpha-scan, experiment
  std::string family_path;
  std::string grid = "0:1:11";  // start:stop:count along parameter `param`
  std::size_t param = 0;
  std::vector<double> base;     // values of the other parameters
  std::vector<double> dtheta;   // metric: optional displacement for ds^2
  std::vector<double> alphas{1.0};

  // verify
  std::vector<std::string> suites{"all"};
  std::optional<std::size_t> samples;

  // experiment
  std::uint64_t shots = 100000;
  std::vector<double> theta;

  // sample
  std::string what = "state";
  std::size_t dim = 2;
  std::optional<std::size_t> rank;
  std::size_t kraus = 2;
};

/// Parses `start:stop:count` into count evenly spaced points (inclusive).
std::vector<double> parse_grid(const std::string& spec);

/// Runs the command line (arguments without the program name). Reports go to
/// `out` unless --out is given; messages go to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgeom
