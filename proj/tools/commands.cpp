#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <thread>
#include <vector>

#include "bellnl/errors.hpp"
#include "bellnl/free_operations.hpp"
#include "bellnl/io.hpp"
#include "bellnl/measures.hpp"
#include "bellnl/nl_programs.hpp"
#include "bellnl/quantum.hpp"
#include "bellnl/sampling.hpp"

namespace bellnl::cli {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Built-in names (chsh, cglmp:d, inn22:n, mermin:N) or a functional file.
BellFunctional resolve_functional(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  auto param = [&]() -> int {
    if (colon == std::string::npos) throw ParseError(spec, 0, "'" + name + "' needs a parameter, e.g. " + name + ":3");
    try {
      return std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw ParseError(spec, 0, "bad parameter");
    }
  };
  if (name == "chsh") return make_chsh();
  if (name == "cglmp") return make_cglmp(param());
  if (name == "inn22") return make_inn22(param());
  if (name == "mermin") return make_mermin(param()).functional;
  return load_functional(spec);
}

InputDistribution resolve_inputs(const Common& c, const Scenario& s, const BellFunctional* f = nullptr) {
  const std::string& mode = c.inputs;
  if (mode == "uniform") return InputDistribution::uniform(s);
  if (mode == "support") {
    if (f) return support_distribution(*f);
    if (c.functional.empty()) throw DomainError("--inputs support needs --functional");
    const BellFunctional g = resolve_functional(c.functional);
    if (!(g.scenario() == s)) throw DimensionError("--functional is for another scenario");
    return support_distribution(g);
  }
  InputDistribution pi = load_input_distribution(mode);
  if (!(pi.scenario() == s)) throw DimensionError("input distribution " + mode + " is for another scenario");
  return pi;
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Evaluates rows on `jobs` threads; the result keeps grid order.
std::vector<std::string> parallel_rows(int count, int jobs, const std::function<std::string(int)>& row) {
  std::vector<std::string> rows(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) rows[static_cast<std::size_t>(i)] = row(i);
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void emit_csv(const Common& c, const std::string& header, const std::vector<std::string>& rows) {
  std::ofstream file;
  if (!c.out.empty()) file = open_or_throw(c.out);
  std::ostream& out = c.out.empty() ? std::cout : file;
  out << header << '\n';
  for (const auto& r : rows) out << r << '\n';
}

void emit_gnuplot(const Common& c, const std::string& xlabel, const std::vector<std::pair<int, std::string>>& series) {
  if (c.gnuplot.empty()) return;
  const std::string data = c.out.empty() ? "scan.csv" : c.out;
  std::ofstream g = open_or_throw(c.gnuplot);
  g << "set datafile separator ','\nset key autotitle columnhead\nset xlabel '" << xlabel << "'\nplot ";
  for (std::size_t i = 0; i < series.size(); ++i) {
    g << (i ? ", " : "") << "'" << data << "' using 1:" << series[i].first << " with lines title '" << series[i].second
      << "'";
  }
  g << '\n';
}

std::vector<double> grid_points(const GridSpec& grid) {
  if (!(grid.min <= grid.max)) throw DomainError("grid needs min <= max");
  if (grid.steps < 2) throw DomainError("grid needs at least 2 steps");
  std::vector<double> xs;
  for (int i = 0; i < grid.steps; ++i) xs.push_back(grid.min + (grid.max - grid.min) * i / (grid.steps - 1));
  return xs;
}

}  // namespace

int cmd_nl(const Common& c, const std::string& behavior_file) {
  const Behavior q = load_behavior(behavior_file);
  const StrategyMatrix a = enumerate_strategies(q.scenario());
  const InputDistribution pi = resolve_inputs(c, q.scenario());
  const NlResult r = nl(q, pi, a);
  const Certificate cert = dual_certificate(q, pi, a);
  std::cout << "NL=" << num(r.value) << '\n';
  std::cout << "certificate: value " << num(cert.value) << ", strategy max " << num(cert.strategy_max)
            << ", saturated entries " << (cert.v.array().abs() > 1 - 1e-9).count() << " of " << cert.v.size() << '\n';
  if (!c.out.empty()) {
    save_behavior(c.out, r.closest_local);
    std::cout << "closest local point written to " << c.out << '\n';
  }
  return kOk;
}

int cmd_nl_at_value(const Common& c, const std::string& functional, double value) {
  const BellFunctional f = resolve_functional(functional);
  const NlGivenValueResult r =
      nl_given_value(f, value, resolve_inputs(c, f.scenario(), &f), enumerate_strategies(f.scenario()));
  if (r.status != LPStatus::optimal) {
    std::cout << "status=" << to_string(r.status) << '\n';
    return kInfeasible;
  }
  std::cout << "NL=" << num(r.value) << '\n';
  if (!c.out.empty()) {
    save_behavior(c.out, *r.behavior);
    std::cout << "minimizing behavior written to " << c.out << '\n';
  }
  return kOk;
}

int cmd_content(const Common& c, const std::string& behavior_file) {
  const Behavior q = load_behavior(behavior_file);
  const StrategyMatrix a = enumerate_strategies(q.scenario());
  std::cout << "CONTENT=" << num(nonlocal_content(q, a)) << '\n';
  std::cout << "NL=" << num(nl(q, resolve_inputs(c, q.scenario()), a).value) << '\n';
  if (!c.functional.empty()) {
    const BellFunctional f = resolve_functional(c.functional);
    std::cout << "BELL_LOWER_BOUND=" << num(bell_lower_bound_content(f, q, a)) << '\n';
  }
  return kOk;
}

int cmd_kl(const Common& c, const std::string& behavior_file) {
  const Behavior q = load_behavior(behavior_file);
  const StrategyMatrix a = enumerate_strategies(q.scenario());
  const InputDistribution pi = resolve_inputs(c, q.scenario());
  KlOptions opt;
  opt.gap_tol = c.tol;
  const NlKlResult r = nl_kl(q, pi, a, opt);
  const NlResult d = nl(q, pi, a);
  std::cout << "KL=" << num(r.value) << '\n'
            << "KL_RAW=" << num(r.raw_value) << '\n'
            << "GAP=" << num(r.gap) << '\n'
            << "ITERATIONS=" << r.iterations << '\n'
            << "NL=" << num(d.value) << '\n'
            << "KL_AT_NL_POINT=" << num(kl_divergence(joint(q, pi), joint(d.closest_local, pi))) << '\n'
            << "PINSKER=" << num(pinsker_bound(std::clamp(d.value, 0.0, 1.0))) << '\n';
  return kOk;
}

int cmd_scan(const Common& c, const std::string& functional, const GridSpec& grid) {
  const BellFunctional f = resolve_functional(functional);
  const StrategyMatrix a = enumerate_strategies(f.scenario());
  const InputDistribution pi = resolve_inputs(c, f.scenario(), &f);
  const std::vector<double> xs = grid_points(grid);
  const auto rows = parallel_rows(static_cast<int>(xs.size()), c.jobs, [&](int i) {
    try {
      const NlGivenValueResult r = nl_given_value(f, xs[i], pi, a);
      return num(xs[i]) + "," + num(r.value) + "," + to_string(r.status);
    } catch (const SolverError&) {
      return num(xs[i]) + ",nan,solver_error";
    }
  });
  emit_csv(c, "value,nl,status", rows);
  emit_gnuplot(c, f.label() + " value", {{2, "NL"}});
  return kOk;
}

int cmd_gamma_scan(const Common& c, const GridSpec& grid) {
  const BellFunctional f = make_cglmp(3);
  const StrategyMatrix a = enumerate_strategies(f.scenario());
  const InputDistribution pi = InputDistribution::uniform(f.scenario());
  KlOptions opt;
  opt.gap_tol = std::max(c.tol, 1e-12);
  std::vector<double> xs = grid_points(grid);
  const auto rows = parallel_rows(static_cast<int>(xs.size()), c.jobs, [&](int i) {
    const double gamma = xs[i];
    try {
      const auto setup = cglmp_setup(gamma);
      const Behavior q = born_behavior(setup.state, setup.measurements);
      const NlResult d = nl(q, pi, a);
      const NlKlResult k = nl_kl(q, pi, a, opt);
      const double upper = kl_divergence(joint(q, pi), joint(d.closest_local, pi));
      return num(gamma) + "," + num(evaluate(f, q)) + "," + num(d.value) + "," + num(k.value) + "," +
             num(k.raw_value) + "," + num(upper) + "," + num(pinsker_bound(std::clamp(d.value, 0.0, 1.0))) + ",ok";
    } catch (const std::logic_error&) {
      return num(gamma) + ",nan,nan,nan,nan,nan,nan,out_of_domain";
    } catch (const SolverError&) {
      return num(gamma) + ",nan,nan,nan,nan,nan,nan,solver_error";
    }
  });
  emit_csv(c, "gamma,cglmp,nl,kl_min,kl_min_raw,kl_upper,pinsker,status", rows);
  emit_gnuplot(c, "gamma", {{3, "NL"}, {4, "min KL"}, {6, "KL at NL point"}, {7, "Pinsker"}});
  return kOk;
}

int cmd_quantum(const Common& c, const std::string& family, double gamma, int parties) {
  Behavior q = maximally_mixed(Scenario::symmetric(2, 2, 2));
  std::string summary;
  if (family == "chsh-tsirelson") {
    const auto s = chsh_tsirelson_setup();
    q = born_behavior(s.state, s.measurements);
    summary = "CHSH=" + num(evaluate(make_chsh(), q));
  } else if (family == "cglmp-gamma") {
    const auto s = cglmp_setup(gamma);
    q = born_behavior(s.state, s.measurements);
    summary = "CGLMP=" + num(evaluate(make_cglmp(3), q));
  } else if (family == "ghz-mermin") {
    const auto s = ghz_mermin_setup(parties);
    q = born_behavior(s.state, s.measurements);
    summary = "MERMIN=" + num(evaluate(make_mermin(parties).functional, q));
  } else {
    throw ParseError(family, 0, "unknown family (chsh-tsirelson | cglmp-gamma | ghz-mermin)");
  }
  if (!validate_behavior(q).valid || !is_nonsignaling(q)) throw SolverError("generated behavior failed validation");
  if (c.out.empty()) {
    write_behavior(std::cout, q);
  } else {
    save_behavior(c.out, q);
  }
  std::cerr << summary << '\n';
  return kOk;
}

int cmd_certificate(const Common& c, const std::string& behavior_file) {
  const Behavior q = load_behavior(behavior_file);
  const StrategyMatrix a = enumerate_strategies(q.scenario());
  const Certificate cert = dual_certificate(q, resolve_inputs(c, q.scenario()), a);
  std::cout << "VALUE=" << num(cert.value) << '\n' << "STRATEGY_MAX=" << num(cert.strategy_max) << '\n';
  std::cout << "# x... a... v w\n";
  const Scenario& s = q.scenario();
  for (Index j = 0; j < s.dimension(); ++j) {
    if (cert.v(j) == 0.0) continue;
    const FlatEntry e = decode_index(s, j);
    for (int x : e.inputs) std::cout << x << ' ';
    for (int o : e.outputs) std::cout << o << ' ';
    std::cout << num(cert.v(j)) << ' ' << num(cert.weights(j)) << '\n';
  }
  return kOk;
}

int cmd_check_monotones(const Common& c, const std::string& behavior_file, int trials) {
  const Behavior q = load_behavior(behavior_file);
  Rng rng(c.seed);
  auto nl_of = [](const Behavior& b) {
    return nl(b, InputDistribution::uniform(b.scenario()), enumerate_strategies(b.scenario())).value;
  };
  const double base = nl_of(q);
  const StrategyMatrix a = enumerate_strategies(q.scenario());
  const bool ns = is_nonsignaling(q);
  double worst[5] = {0, 0, 0, 0, 0};
  for (int t = 0; t < trials; ++t) {
    worst[0] = std::max(worst[0], std::abs(nl_of(relabel(q, random_relabeling(q.scenario(), rng))) - base));
    const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    worst[1] = std::max(worst[1], nl_of(convex_mix({{w, q}, {1 - w, random_local_behavior(a, rng)}})) - w * base);
    worst[2] = std::max(worst[2], nl_of(post_process(q, random_local_channel(q.scenario(), rng))) - base);
    worst[3] = std::max(worst[3], nl_of(pre_process(q, random_input_channel(q.scenario(), rng))) - base);
    if (ns) {
      const int party = static_cast<int>(rng() % static_cast<unsigned>(q.scenario().parties()));
      const int fixed = static_cast<int>(rng() % static_cast<unsigned>(q.scenario().outputs(party)));
      worst[4] = std::max(worst[4], nl_of(input_enlarge(q, party, fixed)) - base);
    }
  }
  const char* names[5] = {"relabeling", "mixing", "post_processing", "pre_processing", "input_enlarging"};
  bool ok = true;
  std::cout << "NL=" << num(base) << '\n' << "class,worst_increase,status\n";
  for (int k = 0; k < 5; ++k) {
    if (k == 4 && !ns) {
      std::cout << names[k] << ",nan,skipped_signaling\n";
      continue;
    }
    const bool pass = worst[k] <= c.tol;
    ok = ok && pass;
    std::cout << names[k] << ',' << num(worst[k]) << ',' << (pass ? "ok" : "violated") << '\n';
  }
  return ok ? kOk : 1;
}

}  // namespace bellnl::cli
