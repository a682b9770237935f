#pragma once

#include <complex>
#include <vector>

namespace radau {

struct MultisetMatch {
  std::vector<int> assignment;  ///< a[i] is paired with b[assignment[i]]
  double total_cost = 0.0;
  double max_distance = 0.0;
};

/// Minimum-cost perfect matching between two equally sized multisets of
/// complex numbers under |a - b| (Hungarian method, O(n^3)).
MultisetMatch match_multisets(const std::vector<std::complex<double>>& a,
                              const std::vector<std::complex<double>>& b);

}  // namespace radau
