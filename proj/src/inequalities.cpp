#include "bellnl/inequalities.hpp"

#include <cmath>
#include <map>
#include <string>

#include "bellnl/errors.hpp"
#include "bellnl/free_operations.hpp"
#include "bellnl/lp.hpp"
#include "bellnl/nl_programs.hpp"

namespace bellnl {

BellFunctional::BellFunctional(Scenario scenario, Eigen::VectorXd coefficients, double local_bound, std::string label)
    : scenario_(std::move(scenario)),
      coefficients_(std::move(coefficients)),
      local_bound_(local_bound),
      label_(std::move(label)) {
  if (coefficients_.size() != scenario_.dimension()) {
    throw DimensionError("functional has " + std::to_string(coefficients_.size()) + " coefficients, scenario expects " +
                         std::to_string(scenario_.dimension()));
  }
  if (!coefficients_.allFinite()) throw DomainError("functional coefficients must be finite");
}

double evaluate(const BellFunctional& f, const Behavior& q) {
  if (!(f.scenario() == q.scenario())) throw DimensionError("evaluate: functional and behavior scenarios differ");
  return f.coefficients().dot(q.values());
}

double local_bound(const BellFunctional& f, const StrategyMatrix& strategies) {
  if (!(f.scenario() == strategies.scenario())) throw DimensionError("local_bound: scenarios differ");
  return (strategies.matrix().transpose() * f.coefficients()).maxCoeff();
}

double ns_bound(const BellFunctional& f) {
  const LinearConstraints ns = ns_constraints(f.scenario());
  LinearProgram<double> lp(f.scenario().dimension());
  lp.objective = -f.coefficients();
  lp.eq_matrix = ns.matrix;
  lp.eq_rhs = ns.rhs;
  const LPSolution<double> sol = solve(lp);
  if (!sol.optimal()) throw SolverError("ns_bound program ended " + to_string(sol.status));
  return -sol.objective;
}

namespace {

// Coefficient slot for p(a,b|x,y) in a bipartite scenario.
Index slot(const Scenario& s, int x, int y, int a, int b) {
  const int in[] = {x, y};
  const int out[] = {a, b};
  return flat_index(s, in, out);
}

}  // namespace

BellFunctional make_chsh() {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dimension());
  c(slot(s, 0, 0, 0, 0)) += 1;
  c(slot(s, 0, 1, 0, 0)) += 1;
  c(slot(s, 1, 0, 0, 0)) += 1;
  c(slot(s, 1, 1, 0, 0)) -= 1;
  for (int other = 0; other < 2; ++other) {
    c(slot(s, 0, 0, 0, other)) -= 1;  // q_A^0 at y = 0
    c(slot(s, 0, 0, other, 0)) -= 1;  // q_B^0 at x = 0
  }
  return {s, std::move(c), 0.0, "CHSH"};
}

std::vector<Behavior> chsh_ns_vertices() {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  std::vector<Behavior> vertices;
  const StrategyMatrix strategies = enumerate_strategies(s);
  for (Index i = 0; i < strategies.columns(); ++i) vertices.push_back(strategies.column(i));
  for (int alpha = 0; alpha < 2; ++alpha) {
    for (int beta = 0; beta < 2; ++beta) {
      for (int gamma = 0; gamma < 2; ++gamma) {
        Eigen::VectorXd v(s.dimension());
        for (int x = 0; x < 2; ++x) {
          for (int y = 0; y < 2; ++y) {
            for (int a = 0; a < 2; ++a) {
              for (int b = 0; b < 2; ++b) {
                const int target = (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
                v(slot(s, x, y, a, b)) = ((a ^ b) == target) ? 0.5 : 0.0;
              }
            }
          }
        }
        vertices.emplace_back(s, std::move(v));
      }
    }
  }
  return vertices;
}

std::vector<BellFunctional> chsh_symmetry_orbit(const BellFunctional& chsh) {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  if (!(chsh.scenario() == s)) throw DimensionError("chsh_symmetry_orbit needs the (2,2,2,2) scenario");
  const std::vector<Behavior> vertices = chsh_ns_vertices();

  std::vector<BellFunctional> orbit;
  std::vector<std::vector<long long>> signatures;
  Relabeling r = Relabeling::identity(s);
  for (int swap = 0; swap < 2; ++swap) {
    r.party_order = swap ? std::vector<int>{1, 0} : std::vector<int>{0, 1};
    for (int inputs = 0; inputs < 4; ++inputs) {
      for (int k = 0; k < 2; ++k) r.input_maps[k] = ((inputs >> k) & 1) ? std::vector<int>{1, 0} : std::vector<int>{0, 1};
      for (int outputs = 0; outputs < 16; ++outputs) {
        for (int k = 0; k < 2; ++k) {
          for (int x = 0; x < 2; ++x) {
            r.output_maps[k][x] = ((outputs >> (2 * k + x)) & 1) ? std::vector<int>{1, 0} : std::vector<int>{0, 1};
          }
        }
        Eigen::VectorXd coefficients = permute_entries(s, r, chsh.coefficients());
        std::vector<long long> signature;
        for (const Behavior& v : vertices) signature.push_back(std::llround(coefficients.dot(v.values()) * 1e9));
        bool seen = false;
        for (const auto& other : signatures) seen = seen || other == signature;
        if (seen) continue;
        signatures.push_back(signature);
        orbit.emplace_back(s, std::move(coefficients), chsh.local_bound(),
                           chsh.label() + "#" + std::to_string(orbit.size()));
      }
    }
  }
  return orbit;
}

BellFunctional make_cglmp(int d) {
  if (d < 2) throw DomainError("CGLMP needs d >= 2");
  const Scenario s = Scenario::symmetric(2, 2, d);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dimension());
  auto mod = [d](int v) { return ((v % d) + d) % d; };
  for (int k = 0; k < d / 2; ++k) {
    const double w = (1.0 - 2.0 * k / (d - 1)) / 4.0;
    for (int j = 0; j < d; ++j) {
      // p(a = b + k | 00) - p(a = b - k - 1 | 00), indexed by b = j
      c(slot(s, 0, 0, mod(j + k), j)) += w;
      c(slot(s, 0, 0, mod(j - k - 1), j)) -= w;
      // p(a + k = b | 01) - p(a - k - 1 = b | 01), indexed by a = j
      c(slot(s, 0, 1, j, mod(j + k))) += w;
      c(slot(s, 0, 1, j, mod(j - k - 1))) -= w;
      // p(a + k + 1 = b | 10) - p(a - k = b | 10)
      c(slot(s, 1, 0, j, mod(j + k + 1))) += w;
      c(slot(s, 1, 0, j, mod(j - k))) -= w;
      // p(a = b + k | 11) - p(a = b - k - 1 | 11)
      c(slot(s, 1, 1, mod(j + k), j)) += w;
      c(slot(s, 1, 1, mod(j - k - 1), j)) -= w;
    }
  }
  // The -1/2 offset, spread over the four normalizations.
  c.array() -= 1.0 / 8.0;
  return {s, std::move(c), 0.0, "CGLMP" + std::to_string(d)};
}

BellFunctional make_inn22(int n) {
  if (n < 2 || n > 7) throw DomainError("I_nn22 is supported for 2 <= n <= 7");
  const Scenario s = Scenario::symmetric(2, n, 2);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dimension());
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x + y <= n - 1) c(slot(s, x, y, 0, 0)) += 1;
      if (x + y == n) c(slot(s, x, y, 0, 0)) -= 1;
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int b = 0; b < 2; ++b) c(slot(s, x, 0, 0, b)) -= (n - 1 - x);
  }
  for (int a = 0; a < 2; ++a) c(slot(s, 0, 0, a, 0)) -= 1;
  return {s, std::move(c), 0.0, "I" + std::to_string(n) + std::to_string(n) + "22"};
}

MerminInequality make_mermin(int parties) {
  if (parties < 2 || parties > 8) throw DomainError("Mermin inequality supported for 2 <= N <= 8");
  // Correlator tables keyed by the input string; M_1 = A_1, its bar is A'_1.
  using Table = std::map<std::vector<int>, double>;
  Table m{{{0}, 1.0}};
  Table mbar{{{1}, 1.0}};
  auto extend = [](Table& t, const Table& src, int input, double w) {
    for (const auto& [key, v] : src) {
      std::vector<int> k = key;
      k.push_back(input);
      t[k] += w * v;
    }
  };
  for (int i = 1; i < parties; ++i) {
    Table next;
    Table next_bar;
    extend(next, m, 0, 0.5);
    extend(next, m, 1, 0.5);
    extend(next, mbar, 0, 0.5);
    extend(next, mbar, 1, -0.5);
    extend(next_bar, mbar, 1, 0.5);
    extend(next_bar, mbar, 0, 0.5);
    extend(next_bar, m, 1, 0.5);
    extend(next_bar, m, 0, -0.5);
    m = std::move(next);
    mbar = std::move(next_bar);
  }

  const Scenario s = Scenario::symmetric(parties, 2, 2);
  MerminInequality result{std::vector<double>(s.input_tuples(), 0.0),
                          BellFunctional(s, Eigen::VectorXd::Zero(s.dimension()), 1.0, "")};
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dimension());
  for (const auto& [inputs, value] : m) {
    if (std::abs(value) < 1e-15) continue;
    const Index x = input_tuple_index(s, inputs);
    result.correlators[x] = value;
    for (Index a = 0; a < s.output_tuples(); ++a) {
      const int parity = __builtin_popcountll(static_cast<unsigned long long>(a)) & 1;
      c(x * s.output_tuples() + a) = parity ? -value : value;
    }
  }
  result.functional = BellFunctional(s, std::move(c), 1.0, "M" + std::to_string(parties));
  return result;
}

Behavior mermin_max_ns_behavior(int parties) {
  const MerminInequality mermin = make_mermin(parties);
  const Scenario& s = mermin.functional.scenario();
  const double weight = 1.0 / static_cast<double>(s.output_tuples() / 2);
  Eigen::VectorXd v(s.dimension());
  for (Index x = 0; x < s.input_tuples(); ++x) {
    const double c = mermin.correlators[x];
    for (Index a = 0; a < s.output_tuples(); ++a) {
      const bool even = (__builtin_popcountll(static_cast<unsigned long long>(a)) & 1) == 0;
      if (c == 0.0) {
        v(x * s.output_tuples() + a) = 1.0 / static_cast<double>(s.output_tuples());
      } else {
        v(x * s.output_tuples() + a) = (even == (c > 0.0)) ? weight : 0.0;
      }
    }
  }
  return {s, std::move(v)};
}

int count_negative_settings(int parties) {
  if (parties % 2 != 0) throw DomainError("count_negative_settings needs an even number of parties");
  const MerminInequality mermin = make_mermin(parties);
  int count = 0;
  for (double c : mermin.correlators) count += c < 0.0 ? 1 : 0;
  return count;
}

InputDistribution support_distribution(const BellFunctional& f) {
  const Scenario& s = f.scenario();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(s.input_tuples());
  for (Index x = 0; x < s.input_tuples(); ++x) {
    const auto block = f.coefficients().segment(x * s.output_tuples(), s.output_tuples());
    if (block.cwiseAbs().maxCoeff() > 0.0) w(x) = 1.0;
  }
  if (w.sum() == 0.0) throw DomainError("functional has no support");
  return {s, w / w.sum()};
}

}  // namespace bellnl
