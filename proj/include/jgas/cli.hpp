#pragma once

// Command-line front end. The executable in tools/ only forwards argv here so
// the whole command surface can be exercised from tests.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jgas/boundary.hpp"
#include "jgas/curve.hpp"
#include "jgas/gas.hpp"
#include "jgas/grunsky.hpp"

namespace jgas::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kTolerance = 3 };

struct RunConfig {
  std::optional<CurveSpec> curve;
  std::optional<GSpec> g;
  double beta = 2.0;
  int m = 128;
  std::size_t N = 1024;
  std::vector<int> n_list;
  std::optional<GasConfig> mcmc;
  GrunskyMethod method = GrunskyMethod::boundary_fft;
  double radius = 1.25;
  int nodes = 16;
  double s = 1.0;
};

// Parses and validates a config document; throws jgas::Error (InvalidConfig,
// EmptySpec, OutOfRange) on malformed input or unknown keys.
RunConfig parse_config(const std::string& text);

// Runs `args` (without the program name). Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jgas::cli
