#pragma once

#include <string>

namespace bellnl::cli {

enum ExitCode { kOk = 0, kParse = 2, kSolver = 3, kInfeasible = 4 };

struct Common {
  std::string inputs = "uniform";
  /// Functional for --inputs support and the content lower bound.
  std::string functional;
  double tol = 1e-9;
  unsigned long long seed = 1;
  int jobs = 1;
  std::string out;
  std::string gnuplot;
};

struct GridSpec {
  double min = 0.0;
  double max = 0.5;
  int steps = 51;
};

int cmd_nl(const Common& c, const std::string& behavior_file);
int cmd_nl_at_value(const Common& c, const std::string& functional, double value);
int cmd_content(const Common& c, const std::string& behavior_file);
int cmd_kl(const Common& c, const std::string& behavior_file);
int cmd_scan(const Common& c, const std::string& functional, const GridSpec& grid);
int cmd_gamma_scan(const Common& c, const GridSpec& grid);
int cmd_quantum(const Common& c, const std::string& family, double gamma, int parties);
int cmd_certificate(const Common& c, const std::string& behavior_file);
int cmd_check_monotones(const Common& c, const std::string& behavior_file, int trials);

}  // namespace bellnl::cli
