#include "bellnl/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include "bellnl/errors.hpp"

namespace bellnl {

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next line with comments stripped and at least one token; false at EOF.
  bool next(std::string& line) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_no_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      if (raw.find_first_not_of(" \t\r") != std::string::npos) {
        line = raw;
        return true;
      }
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }
  int line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::string source_;
  int line_no_ = 0;
};

std::vector<int> parse_ints(const std::string& text, const LineReader& reader, const char* what) {
  std::istringstream ss(text);
  std::vector<int> out;
  std::string token;
  while (ss >> token) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) reader.fail(std::string("bad integer '") + token + "' in " + what);
    out.push_back(v);
  }
  return out;
}

Scenario parse_scenario(LineReader& reader) {
  std::string line;
  if (!reader.next(line)) reader.fail("missing scenario line");
  std::istringstream ss(line);
  std::string keyword;
  ss >> keyword;
  if (keyword != "scenario") reader.fail("expected 'scenario'");
  std::string rest;
  std::getline(ss, rest);
  std::vector<std::string> parts;
  std::stringstream split(rest);
  std::string part;
  while (std::getline(split, part, ';')) parts.push_back(part);
  if (parts.size() != 3) reader.fail("scenario line needs 'N; inputs...; outputs...'");
  const std::vector<int> n = parse_ints(parts[0], reader, "party count");
  const std::vector<int> inputs = parse_ints(parts[1], reader, "input counts");
  const std::vector<int> outputs = parse_ints(parts[2], reader, "output counts");
  if (n.size() != 1 || n[0] < 1) reader.fail("party count must be one positive integer");
  if (static_cast<int>(inputs.size()) != n[0] || static_cast<int>(outputs.size()) != n[0]) {
    reader.fail("scenario lists " + std::to_string(inputs.size()) + " input and " + std::to_string(outputs.size()) +
                " output counts for " + std::to_string(n[0]) + " parties");
  }
  try {
    return {inputs, outputs};
  } catch (const std::exception& e) {
    reader.fail(e.what());
  }
}

double parse_number(const std::string& token, const LineReader& reader) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || !std::isfinite(v)) reader.fail("bad number '" + token + "'");
  return v;
}

// Reads `labels... value` lines into a vector over (label tuple) slots.
// Entries have `label_count` integer labels validated by `slot`.
template <typename Slot>
Eigen::VectorXd parse_entries(LineReader& reader, Index size, std::size_t label_count, Slot slot) {
  Eigen::VectorXd values = Eigen::VectorXd::Zero(size);
  std::vector<bool> seen(static_cast<std::size_t>(size), false);
  std::string line;
  while (reader.next(line)) {
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string token;
    while (ss >> token) tokens.push_back(token);
    if (tokens.size() != label_count + 1) {
      reader.fail("expected " + std::to_string(label_count + 1) + " fields, found " + std::to_string(tokens.size()));
    }
    std::vector<int> labels;
    for (std::size_t i = 0; i < label_count; ++i) {
      const std::vector<int> one = parse_ints(tokens[i], reader, "entry labels");
      labels.push_back(one.at(0));
    }
    const Index j = slot(labels);
    if (seen[static_cast<std::size_t>(j)]) reader.fail("duplicate entry");
    seen[static_cast<std::size_t>(j)] = true;
    values(j) = parse_number(tokens.back(), reader);
  }
  return values;
}

Eigen::VectorXd parse_table(LineReader& reader, const Scenario& s) {
  const auto n = static_cast<std::size_t>(s.parties());
  return parse_entries(reader, s.dimension(), 2 * n, [&](const std::vector<int>& labels) {
    for (std::size_t k = 0; k < n; ++k) {
      if (labels[k] < 0 || labels[k] >= s.inputs(static_cast<int>(k))) {
        reader.fail("input " + std::to_string(labels[k]) + " out of range for party " + std::to_string(k));
      }
      if (labels[n + k] < 0 || labels[n + k] >= s.outputs(static_cast<int>(k))) {
        reader.fail("output " + std::to_string(labels[n + k]) + " out of range for party " + std::to_string(k));
      }
    }
    return flat_index(s, std::span<const int>(labels.data(), n), std::span<const int>(labels.data() + n, n));
  });
}

void write_table(std::ostream& out, const Scenario& s, const Eigen::VectorXd& values) {
  out << std::setprecision(17);
  for (Index j = 0; j < s.dimension(); ++j) {
    if (values(j) == 0.0) continue;
    const FlatEntry e = decode_index(s, j);
    for (int x : e.inputs) out << x << ' ';
    for (int a : e.outputs) out << a << ' ';
    out << values(j) << '\n';
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string scenario_line(const Scenario& s) {
  std::ostringstream out;
  out << "scenario " << s.parties() << ';';
  for (int m : s.inputs()) out << ' ' << m;
  out << ';';
  for (int d : s.outputs()) out << ' ' << d;
  return out.str();
}

Behavior read_behavior(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  const Scenario s = parse_scenario(reader);
  Behavior q(s, parse_table(reader, s));
  const ValidityReport report = validate_behavior(q);
  if (!report.valid) {
    throw ParseError(source, reader.line(),
                     "not a valid behavior (violation " + std::to_string(report.max_violation) + ")");
  }
  return q;
}

void write_behavior(std::ostream& out, const Behavior& q) {
  out << scenario_line(q.scenario()) << '\n';
  write_table(out, q.scenario(), q.values());
}

Behavior load_behavior(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_behavior(in, path);
}

void save_behavior(const std::string& path, const Behavior& q) {
  std::ofstream out = open_out(path);
  write_behavior(out, q);
}

BellFunctional read_functional(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  const Scenario s = parse_scenario(reader);
  std::string line;
  if (!reader.next(line)) reader.fail("missing local_bound line");
  std::istringstream ss(line);
  std::string keyword;
  std::string value;
  std::string extra;
  ss >> keyword >> value;
  if (keyword != "local_bound" || value.empty() || (ss >> extra)) reader.fail("expected 'local_bound <value|auto>'");
  std::optional<double> stated;
  if (value != "auto") stated = parse_number(value, reader);
  const int bound_line = reader.line();

  Eigen::VectorXd coefficients = parse_table(reader, s);
  BellFunctional draft(s, coefficients, 0.0, source);
  const double computed = local_bound(draft, enumerate_strategies(s));
  if (stated && std::abs(*stated - computed) > 1e-9 * std::max(1.0, std::abs(computed))) {
    throw ParseError(source, bound_line,
                     "stated local bound " + value + " differs from the enumerated " + std::to_string(computed));
  }
  return {s, std::move(coefficients), computed, source};
}

void write_functional(std::ostream& out, const BellFunctional& f) {
  out << scenario_line(f.scenario()) << '\n';
  out << "local_bound " << std::setprecision(17) << f.local_bound() << '\n';
  write_table(out, f.scenario(), f.coefficients());
}

BellFunctional load_functional(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_functional(in, path);
}

void save_functional(const std::string& path, const BellFunctional& f) {
  std::ofstream out = open_out(path);
  write_functional(out, f);
}

InputDistribution read_input_distribution(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  const Scenario s = parse_scenario(reader);
  const auto n = static_cast<std::size_t>(s.parties());
  Eigen::VectorXd w = parse_entries(reader, s.input_tuples(), n, [&](const std::vector<int>& labels) {
    for (std::size_t k = 0; k < n; ++k) {
      if (labels[k] < 0 || labels[k] >= s.inputs(static_cast<int>(k))) {
        reader.fail("input " + std::to_string(labels[k]) + " out of range for party " + std::to_string(k));
      }
    }
    return input_tuple_index(s, labels);
  });
  if (w.minCoeff() < 0.0) reader.fail("negative input weight");
  if (std::abs(w.sum() - 1.0) > 1e-9) reader.fail("input weights sum to " + std::to_string(w.sum()));
  return {s, w / w.sum()};
}

void write_input_distribution(std::ostream& out, const InputDistribution& pi) {
  const Scenario& s = pi.scenario();
  out << scenario_line(s) << '\n' << std::setprecision(17);
  for (Index x = 0; x < s.input_tuples(); ++x) {
    if (pi.weights()(x) == 0.0) continue;
    for (int v : decode_inputs(s, x)) out << v << ' ';
    out << pi.weights()(x) << '\n';
  }
}

InputDistribution load_input_distribution(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_input_distribution(in, path);
}

}  // namespace bellnl
