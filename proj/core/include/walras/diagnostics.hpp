#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walras/demand.hpp"
#include "walras/economy.hpp"
#include "walras/geometry.hpp"
#include "walras/rng.hpp"

namespace walras {

// Residual threshold at the finest probe radius; demand evaluation noise at
// zero-price boundaries dominates below this.
inline constexpr double kProbeResidualTol = 1e-3;

/// Which correspondence a probe samples.
enum class ProbeTarget { budget_set, demand_set };

/// A finite probe can only refute; a clean run is evidence, not proof.
enum class ProbeVerdict { no_counterexample_found, fail };

const char* to_string(ProbeTarget target);
const char* to_string(ProbeVerdict verdict);

/// Default radii: 1e-2 down to 1e-6, one decade per step.
std::vector<double> default_probe_radii();

struct DirectionTrace {
  std::vector<double> direction;
  std::vector<double> radii;
  std::vector<double> residuals;  // one per radius
  bool degenerate = false;        // probe collapses onto the base point
};

struct ContinuityWitness {
  std::size_t direction_index;
  std::vector<PriceVector> price_sequence;
  Bundle point;     // the escaping limit (upper) or unreachable target (lower)
  double residual;  // at the finest radius
};

struct ContinuityReport {
  PriceVector at;
  ProbeTarget target = ProbeTarget::budget_set;
  ProbeVerdict verdict = ProbeVerdict::no_counterexample_found;
  std::vector<DirectionTrace> directions;
  std::optional<ContinuityWitness> witness;
  std::string note;
};

/// Samples the correspondence along shrinking approaches to p and measures
/// how far its points stray from the image at p. Fails when some direction's
/// residual stays above kProbeResidualTol at the finest radius: the image at
/// p is smaller than the limits suggest.
ContinuityReport probe_upper_hemicontinuity(const Economy& econ, std::size_t agent_index,
                                            const PriceVector& p,
                                            const std::vector<double>& radii,
                                            ProbeTarget target = ProbeTarget::demand_set,
                                            std::uint64_t seed = kDefaultSeed);

/// For each target point of the image at p, checks that nearby images come
/// arbitrarily close to it. Fails when some target is unreachable along
/// every non-degenerate direction at the finest radius.
ContinuityReport probe_lower_hemicontinuity(const Economy& econ, std::size_t agent_index,
                                            const PriceVector& p,
                                            const std::vector<Bundle>& targets,
                                            const std::vector<double>& radii,
                                            ProbeTarget target = ProbeTarget::demand_set,
                                            std::uint64_t seed = kDefaultSeed);

/// The two-good instance where a boundary price wipes out an agent's wealth:
/// their endowment is worthless at `price`, the budget set degenerates, and
/// `target` (affordable exactly at the limit) cannot be approached from any
/// nearby price. The budget correspondence stays upper hemicontinuous but
/// loses lower hemicontinuity there.
struct PathologyInstance {
  Economy economy;
  std::size_t agent_index;
  PriceVector price;
  Bundle target;
};

PathologyInstance build_cheapest_point_pathology();

enum class AssumptionStatus { pass, fail, structural };

const char* to_string(AssumptionStatus status);

struct AssumptionCheck {
  std::string assumption;
  AssumptionStatus status;
  std::string note;  // witness on failure, construction or evidence otherwise
};

struct AssumptionAuditReport {
  std::vector<AssumptionCheck> checks;

  bool all_pass() const;
};

/// Audits every assumption the existence argument rests on: numeric checks
/// where a finite test exists, true-by-construction notes where the utility
/// families settle the matter structurally.
AssumptionAuditReport audit_assumptions(const Economy& econ, std::uint64_t seed = kDefaultSeed);

}  // namespace walras
