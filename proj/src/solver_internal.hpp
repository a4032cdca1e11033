#pragma once

#include <string>

#include "fbp/problem.hpp"

namespace fbp {

/// u = g on D, zero elsewhere, empty positivity set, converged.
Solution empty_solution(const ProblemSpec& spec, const Grid2D& grid, const std::string& method);

/// Throws SPEC_INVALID unless the grid covers the spec rectangle.
void check_grid_covers(const ProblemSpec& spec, const Grid2D& grid);

}  // namespace fbp
