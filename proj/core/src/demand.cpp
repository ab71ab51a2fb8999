#include "walras/demand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace walras {

namespace {

constexpr double kCoordEq = 1e-12;

bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct TieSlab {
  std::size_t coord;
  double low;
  double high;
};

/// Cartesian product of base with the slab endpoints, low choice first, in
/// ascending coordinate significance. Capped at kMaxDemandExtremePoints.
std::vector<std::vector<double>> enumerate_slab_extremes(const std::vector<double>& base,
                                                         std::vector<TieSlab> slabs,
                                                         bool& complete) {
  complete = true;
  std::erase_if(slabs, [](const TieSlab& s) { return s.high - s.low <= kCoordEq; });
  std::sort(slabs.begin(), slabs.end(),
            [](const TieSlab& a, const TieSlab& b) { return a.coord < b.coord; });

  std::vector<std::vector<double>> out;
  const std::size_t s = slabs.size();
  if (s >= 26) {  // 2^s would dwarf the cap anyway
    complete = false;
  }
  const std::size_t limit = s >= 26 ? kMaxDemandExtremePoints : (std::size_t{1} << s);
  for (std::size_t mask = 0; mask < limit; ++mask) {
    if (out.size() == kMaxDemandExtremePoints) {
      complete = false;
      break;
    }
    std::vector<double> x = base;
    for (std::size_t i = 0; i < s; ++i) {
      const bool high = (mask >> (s - 1 - i)) & 1u;
      x[slabs[i].coord] = high ? slabs[i].high : slabs[i].low;
    }
    out.push_back(std::move(x));
  }
  return out;
}

void dedupe_and_sort(std::vector<std::vector<double>>& points) {
  std::sort(points.begin(), points.end(), lex_less);
  points.erase(std::unique(points.begin(), points.end(),
                           [](const std::vector<double>& a, const std::vector<double>& b) {
                             for (std::size_t j = 0; j < a.size(); ++j) {
                               if (!nearly_equal(a[j], b[j], kCoordEq)) return false;
                             }
                             return true;
                           }),
               points.end());
}

struct DemandProblem {
  const UtilityFunction* utility;
  std::vector<double> prices;
  double wealth;
  std::vector<double> lo;
  std::vector<double> up;
  double tie_tol;
};

/// Score-directed demand for the smooth families. The optimum has
/// x_j = clamp(c * s_j, lo_j, up_j) on positively priced goods for a single
/// scalar c fixed by budget balance; free goods sit on the box face. Exact:
/// the budget is piecewise linear in c, solved segment by segment.
std::vector<std::vector<double>> smooth_demand(const DemandProblem& prob,
                                               const std::vector<double>& scores,
                                               bool& complete) {
  const std::size_t l = prob.prices.size();
  std::vector<double> base(l, 0.0);
  std::vector<TieSlab> slabs;

  std::vector<std::size_t> priced, free_goods;
  for (std::size_t j = 0; j < l; ++j) {
    (prob.prices[j] > 0.0 ? priced : free_goods).push_back(j);
  }

  double spend_floor = 0.0;
  for (std::size_t j : priced) spend_floor += prob.prices[j] * prob.lo[j];
  const double power = prob.wealth - spend_floor;

  if (power <= kBudgetTol) {
    // No purchasing power: priced goods stay at the floor. Whether the free
    // coordinates matter depends on the utility there; if they do not (the
    // whole face ties), the demand set is the face itself.
    for (std::size_t j : priced) base[j] = prob.lo[j];
    std::vector<double> at_low = base, at_high = base;
    for (std::size_t j : free_goods) {
      at_low[j] = prob.lo[j];
      at_high[j] = prob.up[j];
    }
    const double u_low = utility_eval(*prob.utility, Bundle(at_low));
    const double u_high = utility_eval(*prob.utility, Bundle(at_high));
    if (nearly_equal(u_low, u_high, prob.tie_tol * std::max(1.0, std::abs(u_high)))) {
      for (std::size_t j : free_goods) {
        base[j] = prob.lo[j];
        slabs.push_back({j, prob.lo[j], prob.up[j]});
      }
      return enumerate_slab_extremes(base, std::move(slabs), complete);
    }
    complete = true;
    return {at_high};
  }

  for (std::size_t j : free_goods) base[j] = prob.up[j];

  // Budget spent as a function of the score multiplier c.
  auto cost_at = [&](double c) {
    double total = 0.0;
    for (std::size_t j : priced) {
      total += prob.prices[j] * std::clamp(c * scores[j], prob.lo[j], prob.up[j]);
    }
    return total;
  };

  std::vector<double> breaks{0.0};
  for (std::size_t j : priced) {
    breaks.push_back(prob.lo[j] / scores[j]);
    breaks.push_back(prob.up[j] / scores[j]);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double c_star = breaks.back();
  if (cost_at(breaks.back()) <= prob.wealth) {
    // Every priced good capped before the budget ran out; only possible when
    // the box is too tight relative to wealth.
    c_star = breaks.back();
  } else {
    for (std::size_t t = 0; t + 1 < breaks.size(); ++t) {
      const double left = breaks[t], right = breaks[t + 1];
      const double cost_right = cost_at(right);
      if (cost_right < prob.wealth) continue;
      const double cost_left = cost_at(left);
      const double mid = 0.5 * (left + right);
      double slope = 0.0;
      for (std::size_t j : priced) {
        const double xj = mid * scores[j];
        if (xj > prob.lo[j] && xj < prob.up[j]) slope += prob.prices[j] * scores[j];
      }
      c_star = slope > 0.0 ? left + (prob.wealth - cost_left) / slope : right;
      c_star = std::clamp(c_star, left, right);
      break;
    }
  }

  for (std::size_t j : priced) base[j] = std::clamp(c_star * scores[j], prob.lo[j], prob.up[j]);
  complete = true;
  return {base};
}

/// Exact demand face for linear utility: a fractional-knapsack argmax. Goods
/// are bought in decreasing order of weight per unit of spending; the
/// marginal ratio tier may tie, in which case the optimal face's vertices
/// are enumerated outright.
std::vector<std::vector<double>> linear_demand(const DemandProblem& prob, bool& complete) {
  const std::size_t l = prob.prices.size();
  const std::vector<double>& a = prob.utility->weights();
  std::vector<double> base = prob.lo;
  std::vector<TieSlab> slabs;
  complete = true;

  double budget = prob.wealth;
  for (std::size_t j = 0; j < l; ++j) {
    if (prob.prices[j] > 0.0) budget -= prob.prices[j] * prob.lo[j];
  }

  std::vector<std::size_t> tiered;
  for (std::size_t j = 0; j < l; ++j) {
    if (prob.prices[j] == 0.0) {
      if (a[j] > 0.0) {
        base[j] = prob.up[j];  // free and wanted: take the whole face
      } else {
        slabs.push_back({j, prob.lo[j], prob.up[j]});  // free and unwanted: any amount ties
      }
    } else if (a[j] > 0.0) {
      tiered.push_back(j);
    }
    // priced but unwanted goods stay at the floor
  }

  std::sort(tiered.begin(), tiered.end(), [&](std::size_t i, std::size_t j) {
    const double ri = a[i] / prob.prices[i], rj = a[j] / prob.prices[j];
    if (ri != rj) return ri > rj;
    return i < j;
  });

  std::vector<std::vector<double>> marginal_vertices;
  std::size_t t = 0;
  while (t < tiered.size()) {
    std::size_t end = t + 1;
    const double r_head = a[tiered[t]] / prob.prices[tiered[t]];
    while (end < tiered.size()) {
      const double r = a[tiered[end]] / prob.prices[tiered[end]];
      if (!nearly_equal(r, r_head, 1e-12 * std::max(1.0, r_head))) break;
      ++end;
    }
    std::vector<std::size_t> tier(tiered.begin() + t, tiered.begin() + end);

    double tier_cost = 0.0;
    for (std::size_t j : tier) tier_cost += prob.prices[j] * (prob.up[j] - prob.lo[j]);

    if (budget > tier_cost + kBudgetTol) {
      for (std::size_t j : tier) base[j] = prob.up[j];
      budget -= tier_cost;
      t = end;
      continue;
    }

    // Marginal tier: every split of the remaining budget across the tier is
    // optimal. Vertices have at most one coordinate strictly inside its
    // range; enumerate by fractional coordinate and the subset bought out.
    if (tier.size() > 12) {
      complete = false;  // face too wide to enumerate; keep a greedy corner
      double left = budget;
      for (std::size_t j : tier) {
        const double amount = std::min(prob.up[j] - prob.lo[j], left / prob.prices[j]);
        base[j] = prob.lo[j] + amount;
        left -= amount * prob.prices[j];
        if (left <= kBudgetTol) break;
      }
      budget = std::max(left, 0.0);
      t = end;
      break;
    }

    const std::size_t n = tier.size();
    for (std::size_t f = 0; f <= n; ++f) {  // f == n means no fractional coordinate
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != f) rest.push_back(tier[i]);
      }
      for (std::size_t mask = 0; mask < (std::size_t{1} << rest.size()); ++mask) {
        double spent = 0.0;
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if ((mask >> i) & 1u) spent += prob.prices[rest[i]] * (prob.up[rest[i]] - prob.lo[rest[i]]);
        }
        const double resid = budget - spent;
        std::vector<double> v = base;  // tier coords start at their floor
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if ((mask >> i) & 1u) v[rest[i]] = prob.up[rest[i]];
        }
        if (f == n) {
          if (std::abs(resid) > kBudgetTol) continue;
        } else {
          const std::size_t jf = tier[f];
          const double amount = resid / prob.prices[jf];
          if (amount < -kBudgetTol || amount > prob.up[jf] - prob.lo[jf] + kBudgetTol) continue;
          v[jf] = prob.lo[jf] + std::clamp(amount, 0.0, prob.up[jf] - prob.lo[jf]);
        }
        marginal_vertices.push_back(std::move(v));
        if (marginal_vertices.size() > 4 * kMaxDemandExtremePoints) {
          complete = false;
          break;
        }
      }
      if (!complete) break;
    }
    budget = 0.0;
    t = end;
    break;
  }

  if (budget > kBudgetTol && t >= tiered.size()) {
    // Wanted goods are all bought out and money is left over. Any leftover
    // split over zero-weight priced goods ties; that region is not a box, so
    // the face is reported as not fully enumerated.
    for (std::size_t j = 0; j < l; ++j) {
      if (prob.prices[j] > 0.0 && a[j] == 0.0 && prob.up[j] > prob.lo[j]) {
        complete = false;
        break;
      }
    }
  }

  std::vector<std::vector<double>> out;
  if (marginal_vertices.empty()) {
    bool slab_complete = true;
    out = enumerate_slab_extremes(base, std::move(slabs), slab_complete);
    complete = complete && slab_complete;
  } else {
    dedupe_and_sort(marginal_vertices);
    for (const auto& vert : marginal_vertices) {
      bool slab_complete = true;
      auto expanded = enumerate_slab_extremes(vert, slabs, slab_complete);
      complete = complete && slab_complete;
      for (auto& e : expanded) {
        if (out.size() >= kMaxDemandExtremePoints) {
          complete = false;
          break;
        }
        out.push_back(std::move(e));
      }
      if (out.size() >= kMaxDemandExtremePoints && &vert != &marginal_vertices.back()) {
        complete = false;
        break;
      }
    }
  }
  return out;
}

/// Leontief demand: consumption rides the ray x_j = coeff_j * level, with the
/// level fixed by budget balance or by the box, plus free-good tie slabs.
std::vector<std::vector<double>> leontief_demand(const DemandProblem& prob, bool& complete) {
  const std::size_t l = prob.prices.size();
  const std::vector<double>& c = prob.utility->weights();
  complete = true;

  double level_box = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < l; ++j) level_box = std::min(level_box, prob.up[j] / c[j]);

  auto cost_at = [&](double level) {
    double total = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
      if (prob.prices[j] > 0.0) total += prob.prices[j] * std::max(prob.lo[j], level * c[j]);
    }
    return total;
  };

  double level_star;
  bool box_capped = false;
  if (cost_at(level_box) <= prob.wealth + kBudgetTol) {
    level_star = level_box;
    box_capped = cost_at(level_box) < prob.wealth - kBudgetTol;
  } else {
    std::vector<double> breaks{0.0};
    for (std::size_t j = 0; j < l; ++j) {
      if (prob.prices[j] > 0.0) breaks.push_back(prob.lo[j] / c[j]);
    }
    breaks.push_back(level_box);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    level_star = 0.0;
    for (std::size_t t = 0; t + 1 < breaks.size(); ++t) {
      const double left = breaks[t], right = breaks[t + 1];
      if (cost_at(right) < prob.wealth) continue;
      const double cost_left = cost_at(left);
      const double mid = 0.5 * (left + right);
      double slope = 0.0;
      for (std::size_t j = 0; j < l; ++j) {
        if (prob.prices[j] > 0.0 && mid * c[j] > prob.lo[j]) slope += prob.prices[j] * c[j];
      }
      level_star = slope > 0.0 ? left + (prob.wealth - cost_left) / slope : right;
      level_star = std::clamp(level_star, left, right);
      break;
    }
  }

  std::vector<double> base(l);
  std::vector<TieSlab> slabs;
  for (std::size_t j = 0; j < l; ++j) {
    base[j] = std::max(prob.lo[j], level_star * c[j]);
    if (prob.prices[j] == 0.0 && prob.up[j] > base[j]) {
      slabs.push_back({j, base[j], prob.up[j]});
    }
  }
  if (box_capped) {
    // Leftover budget: bundles above the ray also tie, and that region is
    // not a box, so the enumeration is declared incomplete.
    complete = false;
  }
  bool slab_complete = true;
  auto out = enumerate_slab_extremes(base, std::move(slabs), slab_complete);
  complete = complete && slab_complete;
  return out;
}

}  // namespace

BudgetInfeasibleError::BudgetInfeasibleError(std::size_t agent_index, double endowment_value,
                                             double cheapest)
    : std::runtime_error(
          "budget set of agent " + std::to_string(agent_index + 1) +
          " is empty: endowment value " + std::to_string(endowment_value) +
          " is below the cheapest consumption " + std::to_string(cheapest) +
          "; the survival assumption (endowment strictly above a possible consumption) fails"),
      agent_index_(agent_index) {}

double budget_value(const Economy& econ, std::size_t agent_index, const PriceVector& p) {
  return dot(p, econ.agent(agent_index).endowment);
}

double cheapest_consumption(const Economy& econ, std::size_t agent_index, const PriceVector& p) {
  return dot(p, econ.agent(agent_index).lower_bounds);
}

bool budget_contains(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                     const Bundle& x, double tol) {
  const TruncationBox box = truncated_consumption_set(econ, agent_index);
  if (!box.contains(x, tol)) return false;
  return dot(p, x) <= budget_value(econ, agent_index, p) + tol;
}

DemandSet demand(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                 double tie_tol) {
  const Agent& agent = econ.agent(agent_index);
  const TruncationBox box = truncated_consumption_set(econ, agent_index);
  const double wealth = budget_value(econ, agent_index, p);
  const double floor_cost = cheapest_consumption(econ, agent_index, p);
  if (wealth < floor_cost - kBudgetTol) {
    throw BudgetInfeasibleError(agent_index, wealth, floor_cost);
  }

  DemandProblem prob{&agent.utility, p.values(), wealth, agent.lower_bounds.values(),
                     box.upper.values(), tie_tol};

  bool complete = true;
  std::vector<std::vector<double>> points;
  switch (agent.utility.kind()) {
    case UtilityKind::cobb_douglas: {
      std::vector<double> scores(p.size(), 0.0);
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] > 0.0) scores[j] = agent.utility.weights()[j] / p[j];
      }
      points = smooth_demand(prob, scores, complete);
      break;
    }
    case UtilityKind::ces: {
      const double rho = agent.utility.rho();
      if (rho >= 1.0) {
        throw std::domain_error(
            "demand is defined for semi-strictly convex preferences; ces exponent must be < 1");
      }
      const double sigma = 1.0 / (1.0 - rho);
      std::vector<double> scores(p.size(), 0.0);
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] > 0.0) {
          // Exponents close to 1 push the scores toward overflow; saturate
          // so the budget solve stays NaN-free.
          scores[j] = std::min(std::pow(agent.utility.weights()[j] / p[j], sigma), 1e250);
        }
      }
      points = smooth_demand(prob, scores, complete);
      break;
    }
    case UtilityKind::linear:
      points = linear_demand(prob, complete);
      break;
    case UtilityKind::leontief:
      points = leontief_demand(prob, complete);
      break;
  }

  dedupe_and_sort(points);
  if (points.empty()) throw std::logic_error("demand produced no extreme points");

  DemandSet result;
  result.convex = complete;
  result.truncation_active.assign(p.size(), false);
  for (auto& point : points) {
    for (std::size_t j = 0; j < point.size(); ++j) {
      if (nearly_equal(point[j], box.upper[j], 1e-9 * (1.0 + std::abs(box.upper[j])))) {
        result.truncation_active[j] = true;
      }
    }
    result.extreme_points.emplace_back(std::move(point));
  }
  return result;
}

DisposalChoice disposal(const Economy& econ, const PriceVector& p) {
  std::vector<double> consumed(p.size(), 0.0);
  for (std::size_t i = 0; i < econ.num_agents(); ++i) {
    const DemandSet d = demand(econ, i, p);
    const Bundle& pick = d.extreme_points.front();
    for (std::size_t j = 0; j < p.size(); ++j) consumed[j] += pick[j];
  }
  const Bundle total = total_endowment(econ);
  std::vector<double> amounts(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) amounts[j] = -std::max(0.0, total[j] - consumed[j]);
  }
  return DisposalChoice{std::move(amounts)};
}

double walras_slack(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                    const Bundle& x) {
  if (!budget_contains(econ, agent_index, p, x, 1e-8)) {
    throw std::domain_error("walras_slack: consumption is not affordable for agent " +
                            std::to_string(agent_index + 1) + " at this price");
  }
  return budget_value(econ, agent_index, p) - dot(p, x);
}

std::vector<Bundle> budget_polytope_vertices(const Economy& econ, std::size_t agent_index,
                                             const PriceVector& p) {
  const std::size_t l = p.size();
  if (l > 16) throw std::domain_error("budget_polytope_vertices: dimension too large");
  const TruncationBox box = truncated_consumption_set(econ, agent_index);
  const double wealth = budget_value(econ, agent_index, p);

  std::vector<std::vector<double>> verts;
  const std::size_t corners = std::size_t{1} << l;
  for (std::size_t mask = 0; mask < corners; ++mask) {
    std::vector<double> x(l);
    for (std::size_t j = 0; j < l; ++j) {
      x[j] = ((mask >> j) & 1u) ? box.upper[j] : box.lower[j];
    }
    const double cost = dot(p.values(), x);
    if (cost <= wealth + kBudgetTol) {
      verts.push_back(x);
    }
    // Where the budget plane cuts an edge out of this corner, the cut point
    // is a vertex too.
    for (std::size_t j = 0; j < l; ++j) {
      if (p[j] <= 0.0 || ((mask >> j) & 1u)) continue;
      const double rest = cost - p[j] * x[j];
      const double cut = (wealth - rest) / p[j];
      if (cut > box.lower[j] + kCoordEq && cut < box.upper[j] - kCoordEq) {
        std::vector<double> v = x;
        v[j] = cut;
        verts.push_back(std::move(v));
      }
    }
  }
  dedupe_and_sort(verts);

  std::vector<Bundle> out;
  out.reserve(verts.size());
  for (auto& v : verts) out.emplace_back(std::move(v));
  return out;
}

Bundle project_to_budget(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                         const Bundle& y) {
  const TruncationBox box = truncated_consumption_set(econ, agent_index);
  const double wealth = budget_value(econ, agent_index, p);
  const std::size_t l = p.size();

  auto clamp_at = [&](double theta) {
    std::vector<double> x(l);
    for (std::size_t j = 0; j < l; ++j) {
      x[j] = std::clamp(y[j] - theta * p[j], box.lower[j], box.upper[j]);
    }
    return x;
  };

  std::vector<double> x0 = clamp_at(0.0);
  if (dot(p.values(), x0) <= wealth + kBudgetTol) return Bundle(std::move(x0));

  std::vector<double> breaks{0.0};
  for (std::size_t j = 0; j < l; ++j) {
    if (p[j] <= 0.0) continue;
    const double cross_up = (y[j] - box.upper[j]) / p[j];
    const double cross_lo = (y[j] - box.lower[j]) / p[j];
    if (cross_up > 0.0) breaks.push_back(cross_up);
    if (cross_lo > 0.0) breaks.push_back(cross_lo);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double tail = dot(p.values(), clamp_at(breaks.back()));
  if (tail > wealth + kBudgetTol) {
    throw BudgetInfeasibleError(agent_index, wealth, tail);
  }

  for (std::size_t t = 0; t + 1 <= breaks.size(); ++t) {
    const double left = breaks[t];
    const double right = (t + 1 < breaks.size()) ? breaks[t + 1] : breaks.back();
    const double g_right = dot(p.values(), clamp_at(right));
    if (t + 1 < breaks.size() && g_right > wealth + kBudgetTol) continue;
    const double g_left = dot(p.values(), clamp_at(left));
    const double mid = t + 1 < breaks.size() ? 0.5 * (left + right) : left;
    double slope = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
      if (p[j] <= 0.0) continue;
      const double xj = y[j] - mid * p[j];
      if (xj > box.lower[j] && xj < box.upper[j]) slope += p[j] * p[j];
    }
    const double theta = slope > 0.0 ? left + (g_left - wealth) / slope : right;
    return Bundle(clamp_at(std::max(theta, left)));
  }
  return Bundle(clamp_at(breaks.back()));
}

}  // namespace walras
