#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

bool dominates(const Point& a, const Point& b) {
  const bool fa = a.violation <= 0.0, fb = b.violation <= 0.0;
  if (fa != fb) return fa;
  if (!fa) return a.violation < b.violation;
  bool better = false;
  for (std::size_t k = 0; k < a.objectives.size(); ++k) {
    if (a.objectives[k] < b.objectives[k]) return false;
    if (a.objectives[k] > b.objectives[k]) better = true;
  }
  return better;
}

// Shoulder-ended triangular partition with five sets on [-span, span].
double grade(double x, double span, int set) {
  x = std::clamp(x, -span, span);
  const double h = span / 2.0;
  const double c = (set - 2) * h;
  return std::max(0.0, 1.0 - std::abs(x - c) / h);
}

}  // namespace

std::vector<std::size_t> peel_ranks(const std::vector<Point>& pts) {
  std::vector<std::size_t> rank(pts.size(), 0);
  std::size_t assigned = 0, current = 1;
  while (assigned < pts.size()) {
    std::vector<std::size_t> layer;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (rank[i] != 0) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
        dominated = j != i && rank[j] == 0 && dominates(pts[j], pts[i]);
      }
      if (!dominated) layer.push_back(i);
    }
    for (auto i : layer) rank[i] = current;
    assigned += layer.size();
    ++current;
  }
  return rank;
}

double mamdani_centroid(double error, double rate) {
  double fire[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const int k = std::clamp(i + j - 4, -2, 2) + 2;
      fire[k] = std::max(fire[k], std::min(grade(error, 3.0, i), grade(rate, 0.05, j)));
    }
  }
  const int n = 200000;
  double num = 0.0, den = 0.0;
  for (int s = 0; s <= n; ++s) {
    const double u = -1.0 + 2.0 * s / n;
    double mu = 0.0;
    for (int k = 0; k < 5; ++k) {
      const double shape = std::max(0.0, 1.0 - std::abs(u - (k - 2) * 0.5) / 0.5);
      mu = std::max(mu, std::min(fire[k], shape));
    }
    num += mu * u;
    den += mu;
  }
  return den == 0.0 ? 0.0 : std::clamp(num / den, -0.5, 0.5);
}

std::vector<double> normal_equations(const std::vector<std::vector<double>>& x,
                                     const std::vector<double>& y) {
  const std::size_t p = x.front().size();
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < x.size(); ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += x[r][i] * x[r][j];
      a[i][p] += x[r][i] * y[r];
    }
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    if (std::abs(a[c][c]) < 1e-14) throw std::runtime_error("singular");
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t i = 0; i < p; ++i) beta[i] = a[i][p] / a[i][i];
  return beta;
}

std::vector<std::size_t> boundary_brute_force(const std::vector<bool>& inside, std::size_t nx,
                                              std::size_t ny) {
  std::vector<std::size_t> out;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const bool v = inside[iy * nx + ix];
      bool edge = false;
      if (ix > 0 && inside[iy * nx + ix - 1] != v) edge = true;
      if (ix + 1 < nx && inside[iy * nx + ix + 1] != v) edge = true;
      if (iy > 0 && inside[(iy - 1) * nx + ix] != v) edge = true;
      if (iy + 1 < ny && inside[(iy + 1) * nx + ix] != v) edge = true;
      if (edge) out.push_back(iy * nx + ix);
    }
  }
  return out;
}

}  // namespace oracle
