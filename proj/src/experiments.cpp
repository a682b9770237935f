#include "radau/experiments.hpp"

#include <cmath>
#include <sstream>

#include "radau/errors.hpp"
#include "radau/io.hpp"
#include "radau/tableau.hpp"

namespace radau {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw RangeError("invalid " + what + " '" + text + "'");
  }
  if (used != text.size()) throw RangeError("invalid " + what + " '" + text + "'");
  return v;
}

}  // namespace

double TauRule::resolve(int q, double h) const {
  double tau = 0.0;
  switch (kind) {
    case Kind::matched: tau = std::pow(h * h, 1.0 / (2 * q - 1)); break;
    case Kind::c_constant: tau = value * h * h; break;
    case Kind::power: tau = std::pow(h, value); break;
    case Kind::explicit_value: tau = value; break;
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw DomainError("time-step rule " + to_string() + " gives non-positive tau");
  }
  return tau;
}

std::string TauRule::to_string() const {
  switch (kind) {
    case Kind::matched: return "matched";
    case Kind::c_constant: return "c" + format_double(value);
    case Kind::power: return "power:" + format_double(value);
    case Kind::explicit_value: return "explicit:" + format_double(value);
  }
  return "unknown";
}

TauRule parse_tau_rule(const std::string& text) {
  if (text == "matched") return TauRule::matched();
  if (text.rfind("explicit:", 0) == 0) {
    return TauRule::explicit_tau(parse_number(text.substr(9), "explicit tau"));
  }
  if (text.rfind("power:", 0) == 0) {
    return TauRule::power(parse_number(text.substr(6), "tau exponent"));
  }
  if (text.size() > 1 && text[0] == 'c') {
    return TauRule::c_constant(parse_number(text.substr(1), "tau constant"));
  }
  throw RangeError("unknown tau rule '" + text + "'");
}

void ExperimentConfig::validate() const {
  if (stages < 1 || stages > kMaxStages) throw RangeError("stages must lie in [1, 10]");
  if (n_side < 3) throw RangeError("n-side must be >= 3");
  if (eps_list.empty()) throw RangeError("eps list must not be empty");
  for (double e : eps_list) {
    if (!(e > 0.0)) throw RangeError("eps values must be positive");
  }
  (void)tau();
}

StageSystem ExperimentConfig::build_system() const {
  validate();
  auto ops = std::make_shared<const GridOperators>(assemble_q1(n_side, bc));
  return StageSystem(stages, std::move(ops), tau());
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const double v = parse_number(item, "eps");
    if (!(v > 0.0)) throw RangeError("eps values must be positive");
    out.push_back(v);
  }
  if (out.empty()) throw RangeError("eps list must not be empty");
  return out;
}

}  // namespace radau
