#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "walras/economy.hpp"
#include "walras/geometry.hpp"

namespace walras {

// Relative tolerance for utility ties and absolute tolerance for budget
// equality. Both sit below the discretization noise of the brute-force
// oracles used in the tests.
inline constexpr double kUtilityTieTol = 1e-8;
inline constexpr double kBudgetTol = 1e-10;

// Most extreme points a single DemandSet will enumerate before giving up on
// an exact face representation.
inline constexpr std::size_t kMaxDemandExtremePoints = 32;

/// Image of the demand correspondence at one price: a polytope given by its
/// extreme points. `convex` is true when the listed points span the whole
/// set; it is false when enumeration was capped or a tie region could not be
/// represented exactly. `truncation_active[j]` marks goods whose demand hit
/// the upper face of the truncation box.
struct DemandSet {
  std::vector<Bundle> extreme_points;
  bool convex = true;
  std::vector<bool> truncation_active;
};

/// Thrown when the budget set is empty at a price: the endowment's exchange
/// value falls below the cheapest consumption, which the survival assumption
/// (endowment strictly above some possible consumption) rules out.
class BudgetInfeasibleError : public std::runtime_error {
 public:
  BudgetInfeasibleError(std::size_t agent_index, double endowment_value, double cheapest);

  std::size_t agent_index() const { return agent_index_; }

 private:
  std::size_t agent_index_;
};

/// Exchange value of the agent's endowment: p . h.
double budget_value(const Economy& econ, std::size_t agent_index, const PriceVector& p);

/// Minimum exchange value over the consumption box: p . lower_bounds.
double cheapest_consumption(const Economy& econ, std::size_t agent_index, const PriceVector& p);

/// True iff x lies in the truncation box and p . x <= p . h + tol.
bool budget_contains(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                     const Bundle& x, double tol);

/// Utility-maximizing consumptions over the budget set intersected with the
/// truncation box. Singleton for Cobb-Douglas/CES at positive prices; a
/// polytope for linear/Leontief ties and at zero-price boundaries.
DemandSet demand(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                 double tie_tol = kUtilityTieTol);

/// Aggregate free-good absorption: one non-positive amount per good.
struct DisposalChoice {
  std::vector<double> amounts;
};

/// Maximal-value disposal at p: zero for every positively priced good, and
/// minus the unconsumed surplus for free goods, so p . result is always 0.
DisposalChoice disposal(const Economy& econ, const PriceVector& p);

/// p . h - p . x for an affordable x; zero (within kBudgetTol) at demand
/// points of monotone agents. Throws if x is not affordable.
double walras_slack(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                    const Bundle& x);

/// Vertices of the budget polytope {lower <= x <= upper, p . x <= p . h},
/// sorted lexicographically. Used by the continuity probes.
std::vector<Bundle> budget_polytope_vertices(const Economy& econ, std::size_t agent_index,
                                             const PriceVector& p);

/// Euclidean projection of y onto the budget polytope.
Bundle project_to_budget(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                         const Bundle& y);

}  // namespace walras
