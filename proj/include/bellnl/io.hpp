#pragma once

#include <iosfwd>
#include <string>

#include "bellnl/inequalities.hpp"
#include "bellnl/scenario.hpp"

namespace bellnl {

// Text formats. Every file opens with
//   scenario N; m_1 ... m_N; d_1 ... d_N
// and '#' starts a comment. Entry lines list inputs, then outputs, then a
// number; entries not listed are 0.
//
//   behavior:      x_1 ... x_N a_1 ... a_N value
//   functional:    line 2 is `local_bound <value|auto>`, then x.. a.. coeff
//   distribution:  x_1 ... x_N weight

Behavior read_behavior(std::istream& in, const std::string& source = "<stream>");
void write_behavior(std::ostream& out, const Behavior& q);
Behavior load_behavior(const std::string& path);
void save_behavior(const std::string& path, const Behavior& q);

/// The local bound is always recomputed by enumerating strategies; a stated
/// numeric bound that disagrees is a parse error.
BellFunctional read_functional(std::istream& in, const std::string& source = "<stream>");
void write_functional(std::ostream& out, const BellFunctional& f);
BellFunctional load_functional(const std::string& path);
void save_functional(const std::string& path, const BellFunctional& f);

InputDistribution read_input_distribution(std::istream& in, const std::string& source = "<stream>");
void write_input_distribution(std::ostream& out, const InputDistribution& pi);
InputDistribution load_input_distribution(const std::string& path);

std::string scenario_line(const Scenario& s);

}  // namespace bellnl
