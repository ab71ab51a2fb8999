#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "walras/geometry.hpp"

namespace walras {

enum class UtilityKind { cobb_douglas, ces, linear, leontief };

const char* to_string(UtilityKind kind);

/// Parametric preference representation. The four families cover the
/// behaviours the engine needs: Cobb-Douglas and CES demand is single-valued
/// at interior prices, linear and Leontief demand can be a polytope.
///
/// Construction accepts a CES exponent >= 1 on purpose: validate_structure
/// and the assumption audit report it as a convexity failure instead of
/// refusing to build the economy.
class UtilityFunction {
 public:
  static UtilityFunction cobb_douglas(std::vector<double> weights);
  static UtilityFunction ces(std::vector<double> weights, double rho);
  static UtilityFunction linear(std::vector<double> weights);
  static UtilityFunction leontief(std::vector<double> coefficients);

  UtilityKind kind() const { return kind_; }
  std::size_t goods() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double rho() const { return rho_; }

 private:
  UtilityFunction(UtilityKind kind, std::vector<double> weights, double rho);

  UtilityKind kind_;
  std::vector<double> weights_;  // weights or Leontief coefficients
  double rho_;                   // CES exponent; unused otherwise
};

double utility_eval(const UtilityFunction& u, const Bundle& x);

struct Agent {
  Agent(UtilityFunction utility_in, Bundle endowment_in);
  Agent(UtilityFunction utility_in, Bundle endowment_in, Bundle lower_bounds_in);

  UtilityFunction utility;
  Bundle endowment;
  Bundle lower_bounds;  // floor of the consumption set; zero by default
};

/// A finite pure-exchange economy: named goods, agents, and the margin used
/// to build the compact truncation of each consumption set.
class Economy {
 public:
  Economy(std::vector<std::string> goods, std::vector<Agent> agents,
          double truncation_margin = kDefaultTruncationMargin);

  static constexpr double kDefaultTruncationMargin = 2.0;

  std::size_t num_goods() const { return goods_.size(); }
  std::size_t num_agents() const { return agents_.size(); }
  const std::vector<std::string>& goods() const { return goods_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(std::size_t i) const { return agents_.at(i); }
  double truncation_margin() const { return truncation_margin_; }

 private:
  std::vector<std::string> goods_;
  std::vector<Agent> agents_;
  double truncation_margin_;
};

Bundle total_endowment(const Economy& econ);

/// Compact box [lower, upper] replacing the unbounded consumption set. The
/// upper face lies strictly outside the feasible consumptions whenever the
/// margin exceeds one and total stocks are positive.
struct TruncationBox {
  Bundle lower;
  Bundle upper;

  bool contains(const Bundle& x, double tol) const;
};

TruncationBox truncated_consumption_set(const Economy& econ, std::size_t agent_index);

struct StructureViolation {
  std::string assumption;
  std::string witness;
};

/// Checks the structural assumptions that the equilibrium machinery relies
/// on. Violations are data, not errors: an economy that fails here still
/// evaluates, but existence of an equilibrium is no longer guaranteed.
std::vector<StructureViolation> validate_structure(const Economy& econ);

}  // namespace walras
