#include <cmath>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "bellnl/errors.hpp"
#include "commands.hpp"

using namespace bellnl::cli;

int main(int argc, char** argv) {
  CLI::App app{"Nonlocality measures for Bell scenarios"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--inputs", common.inputs, "uniform, support, or an input distribution file");
    sub->add_option("--tol", common.tol, "tolerance (KL gap, monotone checks)");
    sub->add_option("--seed", common.seed, "random seed");
    sub->add_option("--jobs", common.jobs, "worker threads for scans")->check(CLI::PositiveNumber);
    sub->add_option("--out", common.out, "output file");
    sub->add_option("--functional", common.functional, "functional for --inputs support and content bounds");
  };
  std::string behavior;
  std::string functional;
  double value = 0.0;
  GridSpec grid;
  double gamma = 1.0 / std::sqrt(3.0);
  int parties = 3;
  int trials = 100;
  std::function<int()> run;

  auto* nl = app.add_subcommand("nl", "trace-distance nonlocality of a behavior file");
  nl->add_option("behavior", behavior)->required();
  add_common(nl);
  nl->callback([&] { run = [&] { return cmd_nl(common, behavior); }; });

  auto* at = app.add_subcommand("nl-at-value", "minimum NL over NS behaviors with a given Bell value");
  at->add_option("inequality", functional, "chsh, cglmp:d, inn22:n, mermin:N or a file")->required();
  at->add_option("value", value)->required();
  add_common(at);
  at->callback([&] { run = [&] { return cmd_nl_at_value(common, functional, value); }; });

  auto* content = app.add_subcommand("content", "nonlocal content and its Bell lower bound");
  content->add_option("behavior", behavior)->required();
  add_common(content);
  content->callback([&] { run = [&] { return cmd_content(common, behavior); }; });

  auto* kl = app.add_subcommand("kl", "minimum KL divergence to the local set");
  kl->add_option("behavior", behavior)->required();
  add_common(kl);
  kl->callback([&] {
    if (kl->count("--tol") == 0) common.tol = 1e-7;
    run = [&] { return cmd_kl(common, behavior); };
  });

  auto* scan = app.add_subcommand("scan", "CSV of minimum NL against the Bell value");
  scan->add_option("inequality", functional, "chsh, cglmp:d, inn22:n, mermin:N or a file")->required();
  scan->add_option("--min", grid.min);
  scan->add_option("--max", grid.max);
  scan->add_option("--steps", grid.steps);
  scan->add_option("--gnuplot", common.gnuplot, "also write a gnuplot script");
  add_common(scan);
  scan->callback([&] { run = [&] { return cmd_scan(common, functional, grid); }; });

  auto* gscan = app.add_subcommand("gamma-scan", "CSV over the CGLMP d=3 state family");
  GridSpec ggrid{0.0, 1.0 / std::sqrt(2.0), 101};
  gscan->add_option("--min", ggrid.min);
  gscan->add_option("--max", ggrid.max);
  gscan->add_option("--steps", ggrid.steps);
  gscan->add_option("--gnuplot", common.gnuplot, "also write a gnuplot script");
  add_common(gscan);
  gscan->callback([&] {
    if (gscan->count("--tol") == 0) common.tol = 1e-7;
    run = [&] { return cmd_gamma_scan(common, ggrid); };
  });

  auto* quantum = app.add_subcommand("quantum", "write a quantum behavior file");
  std::string family;
  quantum->add_option("family", family, "chsh-tsirelson | cglmp-gamma | ghz-mermin")->required();
  quantum->add_option("--gamma", gamma);
  quantum->add_option("--parties", parties);
  add_common(quantum);
  quantum->callback([&] { run = [&] { return cmd_quantum(common, family, gamma, parties); }; });

  auto* cert = app.add_subcommand("certificate", "dual certificate of the NL program");
  cert->add_option("behavior", behavior)->required();
  add_common(cert);
  cert->callback([&] { run = [&] { return cmd_certificate(common, behavior); }; });

  auto* mono = app.add_subcommand("check-monotones", "random free operations must not increase NL");
  mono->add_option("behavior", behavior)->required();
  mono->add_option("--trials", trials);
  add_common(mono);
  mono->callback([&] { run = [&] { return cmd_check_monotones(common, behavior, trials); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }
  try {
    return run();
  } catch (const bellnl::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const bellnl::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
