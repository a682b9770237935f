#include "radau/matching.hpp"

#include <limits>

#include "radau/errors.hpp"

namespace radau {

MultisetMatch match_multisets(const std::vector<std::complex<double>>& a,
                              const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size()) throw DimensionError("match_multisets: sizes differ");
  const int n = static_cast<int>(a.size());
  MultisetMatch out;
  if (n == 0) return out;

  // Potentials u (rows), v (columns); p[j] = row matched to column j (1-based).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  auto cost = [&](int i, int j) { return std::abs(a[i - 1] - b[j - 1]); };
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  out.assignment.assign(n, -1);
  for (int j = 1; j <= n; ++j) out.assignment[p[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(a[i] - b[out.assignment[i]]);
    out.total_cost += d;
    out.max_distance = std::max(out.max_distance, d);
  }
  return out;
}

}  // namespace radau
