#pragma once

#include <cstddef>
#include <vector>

#include "walras/demand.hpp"
#include "walras/economy.hpp"
#include "walras/geometry.hpp"

namespace walras {

// Absolute bound on |p . z|: one order above the per-agent budget tolerance
// accumulated across up to 1e2 agents.
inline constexpr double kWalrasTol = 1e-8;

// Cap on the number of demand-extreme combinations one evaluation expands.
inline constexpr std::size_t kMaxExcessSamples = 64;

/// One member of the excess consumption set at a price: a selection from
/// every agent's demand set, a disposal choice, and the resulting gap
/// excess = sum(selection) - disposal_total - total endowment.
///
/// Samples carry the zero disposal choice: it is always a maximal-value
/// disposal (p . 0 = 0), and it keeps the surplus of free goods visible as
/// negative excess rather than silently absorbed.
struct ExcessSample {
  PriceVector price;
  std::vector<Bundle> selection;
  DisposalChoice disposal;
  ExcessVector excess;
};

/// Builds a sample from explicit selections, enforcing the accounting
/// identity and Walras's inequality.
ExcessSample make_excess_sample(const Economy& econ, const PriceVector& p,
                                std::vector<Bundle> selection, DisposalChoice disposal);

struct ZetaSamples {
  std::vector<ExcessSample> samples;
  std::size_t total_combinations = 0;
  bool capped = false;
};

/// The excess consumption set at p: one sample per combination of the
/// agents' demand extreme points, in index-lexicographic order, capped at
/// kMaxExcessSamples.
ZetaSamples excess_demand(const Economy& econ, const PriceVector& p,
                          double tie_tol = kUtilityTieTol);

/// p . excess. Throws when the value exceeds kWalrasTol, naming the agent
/// whose selection overruns its budget.
double walras_value(const Economy& econ, const ExcessSample& sample);

/// Box guaranteed to contain every excess sample at every price: per good,
/// [-total stocks, sum of truncation uppers - total stocks].
struct ExcessBound {
  std::vector<double> lower;
  std::vector<double> upper;

  bool contains(const ExcessVector& z, double tol) const;
};

ExcessBound excess_bound(const Economy& econ);

/// True iff the excess sets at p and at normalize(alpha * p) match sample by
/// sample within tol.
bool homogeneity_check(const Economy& econ, const PriceVector& p, double alpha,
                       double tol = kBudgetTol);

}  // namespace walras
