#pragma once

// Reference computations written independently of the library code paths
// they check: brute force where the library is clever, continuous formulas
// where the library samples.

#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

/// Plain objective/violation record so the oracle does not depend on the
/// library's domination helper.
struct Point {
  std::vector<double> objectives;  // maximised
  double violation = 0.0;          // 0 when feasible
};

/// O(n^2) per pass peeling: rank 1 is everything nobody dominates, and so on.
std::vector<std::size_t> peel_ranks(const std::vector<Point>& pts);

/// Mamdani centroid by fine integration of the clipped output sets.
double mamdani_centroid(double error, double rate);

/// OLS by normal equations with Gauss-Jordan elimination.
std::vector<double> normal_equations(const std::vector<std::vector<double>>& x,
                                     const std::vector<double>& y);

/// Cells (row-major, y outer) whose flag differs from a 4-neighbour.
std::vector<std::size_t> boundary_brute_force(const std::vector<bool>& inside, std::size_t nx,
                                              std::size_t ny);

}  // namespace oracle
