#pragma once

#include <memory>
#include <string>
#include <vector>

#include "radau/fem.hpp"
#include "radau/kron.hpp"
#include "radau/tau_rule.hpp"

namespace radau {

/// Parameters shared by the experiment drivers. The mesh convention is
/// n = n_side^2 nodes and h = 1/(n_side - 1).
struct ExperimentConfig {
  int stages = 2;
  int n_side = 9;
  TauRule tau_rule = TauRule::matched();
  BoundaryMode bc = BoundaryMode::full;
  std::vector<double> eps_list = {0.2, 0.1, 0.05};

  double mesh_width() const { return 1.0 / (n_side - 1); }
  double tau() const { return tau_rule.resolve(stages, mesh_width()); }
  /// Throws RangeError/DomainError on invalid combinations.
  void validate() const;
  StageSystem build_system() const;
};

/// "0.2,0.1,0.05" -> {0.2, 0.1, 0.05}; throws RangeError when empty or
/// when an entry is not a positive number.
std::vector<double> parse_eps_list(const std::string& text);

}  // namespace radau
