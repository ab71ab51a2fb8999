#include "walras/economy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace walras {

namespace {

void require_finite_params(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite parameter");
  }
}

std::string good_label(const Economy& econ, std::size_t j) {
  return "good " + std::to_string(j + 1) + " ('" + econ.goods()[j] + "')";
}

}  // namespace

const char* to_string(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::cobb_douglas: return "cobb_douglas";
    case UtilityKind::ces: return "ces";
    case UtilityKind::linear: return "linear";
    case UtilityKind::leontief: return "leontief";
  }
  return "unknown";
}

UtilityFunction::UtilityFunction(UtilityKind kind, std::vector<double> weights, double rho)
    : kind_(kind), weights_(std::move(weights)), rho_(rho) {
  if (weights_.empty()) throw std::invalid_argument("utility function needs at least one good");
  require_finite_params(weights_, to_string(kind_));
}

UtilityFunction UtilityFunction::cobb_douglas(std::vector<double> weights) {
  UtilityFunction u(UtilityKind::cobb_douglas, std::move(weights), 0.0);
  double sum = 0.0;
  for (double w : u.weights_) {
    if (w <= 0.0) throw std::invalid_argument("cobb_douglas: weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("cobb_douglas: weights must sum to 1");
  }
  return u;
}

UtilityFunction UtilityFunction::ces(std::vector<double> weights, double rho) {
  UtilityFunction u(UtilityKind::ces, std::move(weights), rho);
  for (double w : u.weights_) {
    if (w <= 0.0) throw std::invalid_argument("ces: weights must be strictly positive");
  }
  if (!std::isfinite(rho) || rho == 0.0) {
    throw std::invalid_argument("ces: exponent must be finite and non-zero");
  }
  return u;
}

UtilityFunction UtilityFunction::linear(std::vector<double> weights) {
  UtilityFunction u(UtilityKind::linear, std::move(weights), 0.0);
  bool any_positive = false;
  for (double w : u.weights_) {
    if (w < 0.0) throw std::invalid_argument("linear: weights must be non-negative");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("linear: at least one weight must be positive");
  return u;
}

UtilityFunction UtilityFunction::leontief(std::vector<double> coefficients) {
  UtilityFunction u(UtilityKind::leontief, std::move(coefficients), 0.0);
  for (double c : u.weights_) {
    if (c <= 0.0) throw std::invalid_argument("leontief: coefficients must be strictly positive");
  }
  return u;
}

double utility_eval(const UtilityFunction& u, const Bundle& x) {
  if (x.size() != u.goods()) throw std::invalid_argument("utility_eval: size mismatch");
  const auto& a = u.weights();
  switch (u.kind()) {
    case UtilityKind::cobb_douglas: {
      double prod = 1.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0.0) return 0.0;
        prod *= std::pow(x[j], a[j]);
      }
      return prod;
    }
    case UtilityKind::ces: {
      const double rho = u.rho();
      if (rho < 0.0) {
        // The limit as any coordinate vanishes is zero.
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (x[j] == 0.0) return 0.0;
        }
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) sum += a[j] * std::pow(x[j], rho);
      if (sum <= 0.0) return 0.0;
      return std::pow(sum, 1.0 / rho);
    }
    case UtilityKind::linear: {
      double sum = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) sum += a[j] * x[j];
      return sum;
    }
    case UtilityKind::leontief: {
      double level = x[0] / a[0];
      for (std::size_t j = 1; j < x.size(); ++j) level = std::min(level, x[j] / a[j]);
      return level;
    }
  }
  throw std::logic_error("utility_eval: unknown utility kind");
}

Agent::Agent(UtilityFunction utility_in, Bundle endowment_in)
    : utility(std::move(utility_in)),
      endowment(std::move(endowment_in)),
      lower_bounds(Bundle::zeros(endowment.size())) {
  if (utility.goods() != endowment.size()) {
    throw std::invalid_argument("agent: utility and endowment disagree on goods");
  }
}

Agent::Agent(UtilityFunction utility_in, Bundle endowment_in, Bundle lower_bounds_in)
    : utility(std::move(utility_in)),
      endowment(std::move(endowment_in)),
      lower_bounds(std::move(lower_bounds_in)) {
  if (utility.goods() != endowment.size() || endowment.size() != lower_bounds.size()) {
    throw std::invalid_argument("agent: utility, endowment and lower bounds disagree on goods");
  }
}

Economy::Economy(std::vector<std::string> goods, std::vector<Agent> agents,
                 double truncation_margin)
    : goods_(std::move(goods)), agents_(std::move(agents)), truncation_margin_(truncation_margin) {
  if (goods_.size() < 2) throw std::invalid_argument("economy needs at least two goods");
  if (agents_.empty()) throw std::invalid_argument("economy needs at least one agent");
  if (!std::isfinite(truncation_margin_)) throw std::invalid_argument("truncation margin must be finite");
  for (const Agent& agent : agents_) {
    if (agent.endowment.size() != goods_.size()) {
      throw std::invalid_argument("agent dimensions disagree with the goods list");
    }
  }
}

Bundle total_endowment(const Economy& econ) {
  std::vector<double> total(econ.num_goods(), 0.0);
  for (const Agent& agent : econ.agents()) {
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += agent.endowment[j];
  }
  return Bundle(std::move(total));
}

bool TruncationBox::contains(const Bundle& x, double tol) const {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower[j] - tol || x[j] > upper[j] + tol) return false;
  }
  return true;
}

TruncationBox truncated_consumption_set(const Economy& econ, std::size_t agent_index) {
  if (econ.truncation_margin() <= 1.0) {
    throw std::domain_error(
        "truncation margin must exceed 1 so feasible consumptions stay interior to the box");
  }
  const Bundle total = total_endowment(econ);
  std::vector<double> upper(total.size());
  for (std::size_t j = 0; j < total.size(); ++j) upper[j] = econ.truncation_margin() * total[j];
  return TruncationBox{econ.agent(agent_index).lower_bounds, Bundle(std::move(upper))};
}

std::vector<StructureViolation> validate_structure(const Economy& econ) {
  std::vector<StructureViolation> violations;

  if (econ.truncation_margin() <= 1.0) {
    violations.push_back({"truncation", "margin " + std::to_string(econ.truncation_margin()) +
                                            " does not exceed 1"});
  }

  const Bundle total = total_endowment(econ);
  for (std::size_t j = 0; j < total.size(); ++j) {
    if (total[j] <= 0.0) {
      violations.push_back({"total stocks", "total endowment of " + good_label(econ, j) + " is 0"});
    }
  }

  for (std::size_t i = 0; i < econ.num_agents(); ++i) {
    const Agent& agent = econ.agent(i);
    for (std::size_t j = 0; j < econ.num_goods(); ++j) {
      if (agent.endowment[j] <= agent.lower_bounds[j]) {
        violations.push_back(
            {"survival", "agent " + std::to_string(i + 1) + ": endowment is not strictly above " +
                             "the minimal consumption, coordinate " + std::to_string(j + 1)});
      }
    }
    if (agent.utility.kind() == UtilityKind::ces && agent.utility.rho() >= 1.0) {
      violations.push_back(
          {"convexity", "agent " + std::to_string(i + 1) + ": ces exponent " +
                            std::to_string(agent.utility.rho()) +
                            " >= 1 makes preferences non-convex"});
    }
  }

  return violations;
}

}  // namespace walras
