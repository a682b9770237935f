#pragma once

#include <string>

namespace radau {

/// How the time step follows the mesh width.
struct TauRule {
  enum class Kind {
    matched,     ///< tau^{2q-1} = h^2
    c_constant,  ///< tau = C h^2
    power,       ///< tau = h^p
    explicit_value,
  };
  Kind kind = Kind::matched;
  double value = 0.0;  ///< C, p or tau depending on kind

  static TauRule matched() { return {Kind::matched, 0.0}; }
  static TauRule c_constant(double c) { return {Kind::c_constant, c}; }
  static TauRule power(double p) { return {Kind::power, p}; }
  static TauRule explicit_tau(double tau) { return {Kind::explicit_value, tau}; }

  /// Time step for q stages at mesh width h; throws DomainError unless > 0.
  double resolve(int q, double h) const;
  std::string to_string() const;
};

/// Parses "matched", "c<C>" (e.g. c1, c10), "power:<p>" or "explicit:<tau>".
TauRule parse_tau_rule(const std::string& text);

}  // namespace radau
