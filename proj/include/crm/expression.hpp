#pragma once

#include <string>
#include <vector>

#include "crm/manifold_maps.hpp"

// Small expression-defined maps for the CLI: components built from
// polynomials and exp of the coordinates, e.g. "f(x,y)=(2x,3y)" or
// "c(t)=(t^3,t^6)". The Jacobian comes from central differences.

namespace crm {

struct ParsedMap {
  std::vector<std::string> variables;
  int codomain_dim = 0;
  SmoothMapSpec spec;
};

/// Throws std::invalid_argument on syntax errors or unknown functions.
ParsedMap parse_map_expression(const std::string& text, double fd_step = 1e-5);

}  // namespace crm
