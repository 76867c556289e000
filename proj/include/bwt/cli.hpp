#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwt/potential.hpp"

namespace bwt::cli {

enum class Subcommand { ScanAlpha, Grid, Resonances, Converge, Classify, Matrix };
enum class OutputFormat { CSV, JSON };

/// Bad flags or constraint violations; the process exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::ScanAlpha;
  Model model = Model::Plus;

  double alpha = 0.0;
  double alpha_min = -40.0;
  double alpha_max = 40.0;
  int steps = 4000;

  double k = 1.0;
  double k_min = 0.01;
  double k_max = 10.0;
  int k_steps = 200;

  double eps = 0.1;
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.02};
  double c1 = 3.0;
  double c2 = 1.0;
  double sigma = 1.0;

  /// (h, l, d, r) entered directly, bypassing the eps parametrization.
  std::optional<BWGeometry> raw;

  int grid_steps = 20000;
  double tol = 1e-10;
  double match_tol = 1e-6;
  double radius = 0.5;

  OutputFormat format = OutputFormat::CSV;
  std::optional<std::string> out_path;

  BWParams params() const;
};

/// argv[0] is the program name. Returns std::nullopt when help was requested
/// (the help text has been written to `help`). Throws UsageError.
std::optional<RunConfig> parse_args(const std::vector<std::string>& argv, std::ostream& help);

/// Runs the configured computation, writing to `out` (or out_path when set).
/// Returns 0 on success, 1 on computation errors (reported on `err`).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run, mapping UsageError to exit status 2.
int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace bwt::cli
