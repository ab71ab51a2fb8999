#include "walras/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace walras {

namespace {

constexpr long kInitialGridResolution = 24;  // divisible by 3 and 4: hits the
                                             // simple rational prices linear
                                             // ties produce
constexpr long kRefineWindow = 6;            // fine steps kept around an anchor
constexpr std::size_t kAnchorCount = 3;

struct Candidate {
  double residual;
  std::vector<long> composition;  // at the current resolution
  PriceVector price;
};

// Ties go to the most interior price, then lexicographic. Flat economies
// (whole faces of equilibria) then surface the representative where every
// agent can still trade, e.g. the uniform price in the symmetric case.
bool candidate_better(const Candidate& a, const Candidate& b) {
  if (a.residual != b.residual) return a.residual < b.residual;
  const double a_min = *std::min_element(a.price.values().begin(), a.price.values().end());
  const double b_min = *std::min_element(b.price.values().begin(), b.price.values().end());
  if (a_min != b_min) return a_min > b_min;
  return std::lexicographical_compare(a.price.values().begin(), a.price.values().end(),
                                      b.price.values().begin(), b.price.values().end());
}

PriceVector composition_to_price(const std::vector<long>& n, long k) {
  std::vector<double> p(n.size());
  for (std::size_t j = 0; j < n.size(); ++j) p[j] = static_cast<double>(n[j]) / static_cast<double>(k);
  return PriceVector(std::move(p));
}

/// Smallest max_j z_j over the sampled excess set; the price is an
/// approximate fixed point iff this is <= epsilon for some sample. Prices
/// where some budget set is empty are not candidates at all.
double residual_at(const Economy& econ, const PriceVector& p) {
  try {
    const ZetaSamples zeta = excess_demand(econ, p);
    double best = zeta.samples.front().excess.max_coordinate();
    for (std::size_t s = 1; s < zeta.samples.size(); ++s) {
      best = std::min(best, zeta.samples[s].excess.max_coordinate());
    }
    return best;
  } catch (const BudgetInfeasibleError&) {
    return std::numeric_limits<double>::infinity();
  }
}

Candidate evaluate_point(const Economy& econ, const std::vector<long>& n, long k) {
  PriceVector p = composition_to_price(n, k);
  const double best = residual_at(econ, p);
  return Candidate{best, n, std::move(p)};
}

/// Deterministic pattern search along simplex edge directions, shrinking the
/// radius from the current grid spacing. Polishes a coarse grid minimum to
/// certification accuracy where the residual is smooth; stalls harmlessly at
/// the knife-edge ties where only exact rational prices work.
PriceVector polish_price(const Economy& econ, const PriceVector& start, double radius,
                         double floor_radius) {
  const std::size_t l = start.size();
  std::vector<double> best = start.values();
  double best_residual = residual_at(econ, start);

  int sweeps = 0;
  while (radius > floor_radius && sweeps++ < 300) {
    bool improved = false;
    std::vector<double> sweep_best = best;
    double sweep_residual = best_residual;
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        if (i == j || best[j] < radius) continue;
        std::vector<double> probe = best;
        probe[i] += radius;
        probe[j] -= radius;
        const PriceVector q = normalize_prices(probe);
        const double r = residual_at(econ, q);
        if (r < sweep_residual) {
          sweep_residual = r;
          sweep_best = q.values();
          improved = true;
        }
      }
    }
    if (improved) {
      best = sweep_best;
      best_residual = sweep_residual;
    } else {
      radius *= 0.5;
    }
  }
  return PriceVector(best);
}

}  // namespace

const char* to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::grid: return "grid";
    case SolveMethod::tatonnement: return "tatonnement";
    case SolveMethod::direct: return "direct";
  }
  return "unknown";
}

SimplexFace price_adjust(const ExcessVector& z, double tol) {
  const double top = z.max_coordinate();
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j] >= top - tol) active.push_back(j);
  }
  std::vector<double> rep(z.size(), 0.0);
  for (std::size_t j : active) rep[j] = 1.0 / static_cast<double>(active.size());
  return SimplexFace{std::move(active), PriceVector(std::move(rep))};
}

PsiValue psi_map(const Economy& econ, const PriceVector& p, const ExcessVector& z) {
  if (!excess_bound(econ).contains(z, 1e-9)) {
    throw std::domain_error("psi_map: excess lies outside the bound box of this economy");
  }
  return PsiValue{price_adjust(z), excess_demand(econ, p)};
}

CertifyOutcome certify(const Economy& econ, const PriceVector& p, double epsilon) {
  const ZetaSamples zeta = excess_demand(econ, p);
  std::size_t best = 0;
  double best_residual = zeta.samples.front().excess.max_coordinate();
  for (std::size_t s = 1; s < zeta.samples.size(); ++s) {
    const double r = zeta.samples[s].excess.max_coordinate();
    if (r < best_residual) {
      best_residual = r;
      best = s;
    }
  }
  const ExcessVector& z = zeta.samples[best].excess;

  CertifyOutcome outcome;
  outcome.certificate.price = p;
  outcome.certificate.excess = z;
  outcome.certificate.epsilon = epsilon;
  outcome.certificate.method = SolveMethod::direct;
  outcome.certificate.slack.clear();
  for (std::size_t j = 0; j < p.size(); ++j) {
    outcome.certificate.slack.push_back({p[j], z[j]});
    if (z[j] > epsilon) {
      outcome.violations.push_back(
          {j, p[j], z[j], "planned consumption exceeds the stocks tolerance"});
    } else if (p[j] > epsilon && std::abs(z[j]) > epsilon) {
      outcome.violations.push_back(
          {j, p[j], z[j], "positively priced good does not clear"});
    }
  }
  outcome.accepted = outcome.violations.empty();
  return outcome;
}

SearchBudgetExhausted::SearchBudgetExhausted(PriceVector best_price, double best_residual,
                                             std::size_t refinements)
    : std::runtime_error("equilibrium search exhausted after " + std::to_string(refinements) +
                         " refinements; best residual " + std::to_string(best_residual) +
                         " (either the tolerance is too tight for the budget or a structural "
                         "assumption fails; run the assumption audit)"),
      best_price_(std::move(best_price)),
      best_residual_(best_residual),
      refinements_(refinements) {}

EquilibriumCertificate find_equilibrium_grid(const Economy& econ, double epsilon,
                                             std::size_t max_refinements) {
  const std::size_t l = econ.num_goods();
  long k = kInitialGridResolution;

  std::vector<Candidate> level_best;  // best few candidates of the latest sweep
  auto consider = [&](Candidate cand) {
    level_best.push_back(std::move(cand));
    std::sort(level_best.begin(), level_best.end(), candidate_better);
    if (level_best.size() > kAnchorCount) {
      level_best.erase(level_best.begin() + kAnchorCount, level_best.end());
    }
  };

  {
    const std::vector<long> lower(l, 0), upper(l, k);
    detail::for_each_bounded_composition(lower, upper, k, [&](const std::vector<long>& n) {
      consider(evaluate_point(econ, n, k));
    });
  }

  std::optional<Candidate> overall;
  for (std::size_t level = 0;; ++level) {
    if (!level_best.empty() &&
        (!overall.has_value() || candidate_better(level_best.front(), *overall))) {
      overall = level_best.front();
    }
    if (overall.has_value() && overall->residual <= epsilon) {
      CertifyOutcome outcome = certify(econ, overall->price, epsilon);
      if (outcome.accepted) {
        outcome.certificate.method = SolveMethod::grid;
        outcome.certificate.steps = level;
        return outcome.certificate;
      }
    }
    if (overall.has_value() && std::isfinite(overall->residual)) {
      // Pattern-search polish from the best cell; the grid localizes the
      // equilibrium, the polish buys the last digits where the residual is
      // smooth. Exact rational ties are the grid's job and survive a no-op
      // polish.
      const PriceVector polished = polish_price(econ, overall->price, 1.0 / static_cast<double>(k),
                                                std::min(epsilon * 1e-3, 1e-9));
      if (residual_at(econ, polished) <= epsilon) {
        CertifyOutcome outcome = certify(econ, polished, epsilon);
        if (outcome.accepted) {
          outcome.certificate.method = SolveMethod::grid;
          outcome.certificate.steps = level;
          return outcome.certificate;
        }
      }
    }
    if (level == max_refinements) break;

    // Double the resolution and rescan windows around the best cells.
    std::vector<Candidate> anchors = level_best;
    if (overall.has_value()) anchors.push_back(*overall);
    const long next_k = 2 * k;
    std::set<std::vector<long>> window;
    for (const Candidate& anchor : anchors) {
      // Anchors may come from coarser levels; their compositions sum to the
      // resolution they were found at, which divides next_k.
      const long anchor_k =
          std::accumulate(anchor.composition.begin(), anchor.composition.end(), 0L);
      const long scale = next_k / anchor_k;
      std::vector<long> lower(l), upper(l);
      for (std::size_t j = 0; j < l; ++j) {
        const long centre = anchor.composition[j] * scale;
        lower[j] = std::max(0L, centre - kRefineWindow);
        upper[j] = std::min(next_k, centre + kRefineWindow);
      }
      detail::for_each_bounded_composition(
          lower, upper, next_k, [&](const std::vector<long>& n) { window.insert(n); });
    }
    k = next_k;
    level_best.clear();
    for (const std::vector<long>& n : window) consider(evaluate_point(econ, n, k));
  }

  if (!overall.has_value()) {
    throw SearchBudgetExhausted(PriceVector(std::vector<double>(l, 1.0 / static_cast<double>(l))),
                                std::numeric_limits<double>::infinity(), max_refinements);
  }
  throw SearchBudgetExhausted(overall->price, overall->residual, max_refinements);
}

TatonnementResult tatonnement(const Economy& econ, const PriceVector& start, double step,
                              std::size_t max_iters, double epsilon) {
  if (!(step > 0.0)) throw std::domain_error("tatonnement: step must be positive");

  TatonnementResult result;
  PriceVector p = start;
  for (std::size_t t = 0;; ++t) {
    const ZetaSamples zeta = excess_demand(econ, p);
    const ExcessVector z = zeta.samples.front().excess;  // deterministic first sample
    const double residual = z.max_coordinate();
    result.trace.push_back({t, p, z, residual});

    if (residual <= epsilon) {
      CertifyOutcome outcome = certify(econ, p, epsilon);
      if (outcome.accepted) {
        outcome.certificate.method = SolveMethod::tatonnement;
        outcome.certificate.steps = t;
        result.certificate = outcome.certificate;
        return result;
      }
    }
    if (t == max_iters) break;

    std::vector<double> raw(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
      raw[j] = std::max(kPriceFloor, p[j] + step * z[j]);
    }
    p = normalize_prices(raw);
  }
  return result;
}

}  // namespace walras
