#include "walras/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "walras/equilibrium.hpp"

namespace walras {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double point_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

/// Distance from a point to the polytope spanned by `points`: minimum over
/// the points themselves and projections onto the segments between them.
double distance_to_polytope(const Bundle& y, const std::vector<Bundle>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (const Bundle& a : points) best = std::min(best, point_distance(y.values(), a.values()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = i + 1; k < points.size(); ++k) {
      const auto& a = points[i].values();
      const auto& b = points[k].values();
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) {
        num += (y[j] - a[j]) * (b[j] - a[j]);
        den += (b[j] - a[j]) * (b[j] - a[j]);
      }
      if (den <= 0.0) continue;
      const double t = std::clamp(num / den, 0.0, 1.0);
      std::vector<double> proj(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) proj[j] = a[j] + t * (b[j] - a[j]);
      best = std::min(best, point_distance(y.values(), proj));
    }
  }
  return best;
}

/// The 2l coordinate-axis approaches plus eight seeded random directions,
/// all tangent-ish to the simplex (they are re-projected when stepping).
std::vector<std::vector<double>> probe_directions(const PriceVector& p, std::uint64_t seed) {
  const std::size_t l = p.size();
  std::vector<std::vector<double>> dirs;
  for (std::size_t j = 0; j < l; ++j) {
    std::vector<double> toward(l), away(l);
    for (std::size_t i = 0; i < l; ++i) {
      const double e = (i == j) ? 1.0 : 0.0;
      toward[i] = e - p[i];
      away[i] = p[i] - e;
    }
    dirs.push_back(std::move(toward));
    dirs.push_back(std::move(away));
  }
  Rng rng(seed);
  for (int r = 0; r < 8; ++r) {
    std::vector<double> d(l);
    double mean = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      d[i] = rng.normal();
      mean += d[i];
    }
    mean /= static_cast<double>(l);
    for (double& x : d) x -= mean;  // keep the step inside the simplex plane
    dirs.push_back(std::move(d));
  }
  for (auto& d : dirs) {
    const double n = norm2(d);
    if (n > 1e-12) {
      for (double& x : d) x /= n;
    }
  }
  return dirs;
}

std::optional<PriceVector> step_along(const PriceVector& p, const std::vector<double>& dir,
                                      double radius) {
  std::vector<double> q(p.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    q[j] = std::max(0.0, p[j] + radius * dir[j]);
    sum += q[j];
  }
  if (sum <= 0.0) return std::nullopt;
  return normalize_prices(q);
}

bool probe_is_degenerate(const PriceVector& p, const std::optional<PriceVector>& q, double radius) {
  if (!q.has_value()) return true;
  double moved = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) moved = std::max(moved, std::abs((*q)[j] - p[j]));
  return moved < 1e-3 * radius;
}

std::vector<Bundle> image_points(const Economy& econ, std::size_t agent_index,
                                 const PriceVector& p, ProbeTarget target) {
  if (target == ProbeTarget::budget_set) return budget_polytope_vertices(econ, agent_index, p);
  return demand(econ, agent_index, p).extreme_points;
}

double distance_to_image(const Economy& econ, std::size_t agent_index, const PriceVector& p,
                         ProbeTarget target, const Bundle& y,
                         const std::vector<Bundle>& cached_points) {
  if (target == ProbeTarget::budget_set) {
    return point_distance(y.values(), project_to_budget(econ, agent_index, p, y).values());
  }
  return distance_to_polytope(y, cached_points);
}

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("probe needs at least one radius");
  for (std::size_t t = 0; t + 1 < radii.size(); ++t) {
    if (!(radii[t] > radii[t + 1])) {
      throw std::invalid_argument("probe radii must be strictly decreasing");
    }
  }
  if (radii.back() < 1e-8) throw std::invalid_argument("probe radii must stay at or above 1e-8");
}

}  // namespace

const char* to_string(ProbeTarget target) {
  return target == ProbeTarget::budget_set ? "budget_set" : "demand_set";
}

const char* to_string(ProbeVerdict verdict) {
  return verdict == ProbeVerdict::fail ? "fail" : "no counterexample found";
}

const char* to_string(AssumptionStatus status) {
  switch (status) {
    case AssumptionStatus::pass: return "pass";
    case AssumptionStatus::fail: return "fail";
    case AssumptionStatus::structural: return "structural";
  }
  return "unknown";
}

std::vector<double> default_probe_radii() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

ContinuityReport probe_upper_hemicontinuity(const Economy& econ, std::size_t agent_index,
                                            const PriceVector& p,
                                            const std::vector<double>& radii, ProbeTarget target,
                                            std::uint64_t seed) {
  check_radii(radii);
  ContinuityReport report;
  report.at = p;
  report.target = target;

  const std::vector<Bundle> base_points = image_points(econ, agent_index, p, target);
  const auto dirs = probe_directions(p, seed);

  double worst = 0.0;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    DirectionTrace trace;
    trace.direction = dirs[d];
    std::vector<PriceVector> sequence;
    Bundle escape = base_points.front();
    for (double r : radii) {
      const auto q = step_along(p, dirs[d], r);
      if (probe_is_degenerate(p, q, r)) {
        trace.degenerate = true;
        break;
      }
      sequence.push_back(*q);
      double residual = 0.0;
      Bundle apex = base_points.front();
      for (const Bundle& s : image_points(econ, agent_index, *q, target)) {
        const double dist = distance_to_image(econ, agent_index, p, target, s, base_points);
        if (dist > residual) {
          residual = dist;
          apex = s;
        }
      }
      trace.radii.push_back(r);
      trace.residuals.push_back(residual);
      escape = apex;
    }
    if (!trace.degenerate && !trace.residuals.empty()) {
      const double final_residual = trace.residuals.back();
      if (final_residual > kProbeResidualTol && final_residual > worst) {
        worst = final_residual;
        report.witness = ContinuityWitness{d, sequence, escape, final_residual};
      }
    }
    report.directions.push_back(std::move(trace));
  }

  if (report.witness.has_value()) {
    report.verdict = ProbeVerdict::fail;
    report.note =
        "image points near the base price stay far from the image at the base price: "
        "the correspondence shrinks in the limit";
  } else {
    report.verdict = ProbeVerdict::no_counterexample_found;
    report.note =
        "no counterexample found: along every probed direction the nearby image points "
        "approach the image at the base price";
  }
  return report;
}

ContinuityReport probe_lower_hemicontinuity(const Economy& econ, std::size_t agent_index,
                                            const PriceVector& p,
                                            const std::vector<Bundle>& targets,
                                            const std::vector<double>& radii, ProbeTarget target,
                                            std::uint64_t seed) {
  check_radii(radii);
  if (targets.empty()) throw std::invalid_argument("lower probe needs at least one target");

  // Precondition: every target must belong to the image at p.
  const std::vector<Bundle> base_points = image_points(econ, agent_index, p, target);
  for (const Bundle& y : targets) {
    const double dist = distance_to_image(econ, agent_index, p, target, y, base_points);
    if (dist > 1e-6) {
      throw std::invalid_argument("lower probe target is not in the stated image set");
    }
  }

  ContinuityReport report;
  report.at = p;
  report.target = target;

  const auto dirs = probe_directions(p, seed);
  const double finest = radii.back();

  for (const Bundle& y : targets) {
    double best_residual = std::numeric_limits<double>::infinity();
    std::size_t best_dir = 0;
    std::vector<PriceVector> best_sequence;
    bool any_direction = false;

    for (std::size_t d = 0; d < dirs.size(); ++d) {
      DirectionTrace trace;
      trace.direction = dirs[d];
      std::vector<PriceVector> sequence;
      double residual_at_finest = std::numeric_limits<double>::infinity();
      for (double r : radii) {
        const auto q = step_along(p, dirs[d], r);
        if (probe_is_degenerate(p, q, r)) {
          trace.degenerate = true;
          break;
        }
        sequence.push_back(*q);
        const std::vector<Bundle> nearby = image_points(econ, agent_index, *q, target);
        const double dist = distance_to_image(econ, agent_index, *q, target, y, nearby);
        trace.radii.push_back(r);
        trace.residuals.push_back(dist);
        if (r == finest) residual_at_finest = dist;
      }
      if (!trace.degenerate && !trace.residuals.empty()) {
        any_direction = true;
        if (residual_at_finest < best_residual) {
          best_residual = residual_at_finest;
          best_dir = d;
          best_sequence = sequence;
        }
      }
      report.directions.push_back(std::move(trace));
    }

    // Unreachable along every non-degenerate approach: the image spikes at p.
    if (any_direction && best_residual > kProbeResidualTol) {
      report.verdict = ProbeVerdict::fail;
      report.witness = ContinuityWitness{best_dir, best_sequence, y, best_residual};
      report.note =
          "target point of the image at the base price cannot be approached from nearby "
          "prices in any probed direction: the correspondence spikes in the limit";
      return report;
    }
  }

  report.verdict = ProbeVerdict::no_counterexample_found;
  report.note =
      "no counterexample found: every target was approached from some probed direction";
  return report;
}

PathologyInstance build_cheapest_point_pathology() {
  // Two goods; the probed agent owns only the second. At price (1, 0) their
  // endowment is worthless, wealth equals the cheapest consumption, and the
  // budget set collapses to the free-good axis. The second agent keeps total
  // stocks positive so the truncation box is (4, 4) at margin 2.
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}),
                      Bundle(std::vector<double>{0.0, 2.0}));
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}),
                      Bundle(std::vector<double>{2.0, 0.0}));
  Economy econ({"g1", "g2"}, std::move(agents), 2.0);
  return PathologyInstance{std::move(econ), 0, PriceVector(std::vector<double>{1.0, 0.0}),
                           Bundle(std::vector<double>{0.0, 3.0})};
}

bool AssumptionAuditReport::all_pass() const {
  return std::none_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) {
    return c.status == AssumptionStatus::fail;
  });
}

AssumptionAuditReport audit_assumptions(const Economy& econ, std::uint64_t seed) {
  AssumptionAuditReport report;
  auto add = [&](std::string name, AssumptionStatus status, std::string note) {
    report.checks.push_back({std::move(name), status, std::move(note)});
  };

  add("consumption set closed", AssumptionStatus::structural,
      "consumption sets are boxes [lower bounds, +inf), closed by construction");
  add("consumption set convex", AssumptionStatus::structural,
      "boxes are convex; goods are perfectly divisible");
  add("consumption set bounded below", AssumptionStatus::structural,
      "lower bounds are explicit and non-negative");
  add("preference maximization", AssumptionStatus::structural,
      "agents maximize a parametric utility representation");
  add("closed preferences", AssumptionStatus::structural,
      "the utility families are continuous, so weak-preference sets are closed");
  add("free disposal", AssumptionStatus::structural,
      "aggregate disposal absorbs any unwanted non-negative quantities at zero value");

  const Bundle total = total_endowment(econ);
  {
    AssumptionStatus status = AssumptionStatus::pass;
    std::string note = "total stocks are finite and positive in every good";
    for (std::size_t j = 0; j < total.size(); ++j) {
      if (!(total[j] > 0.0) || !std::isfinite(total[j])) {
        status = AssumptionStatus::fail;
        note = "total endowment of good " + std::to_string(j + 1) + " ('" + econ.goods()[j] +
               "') is " + std::to_string(total[j]);
        break;
      }
    }
    add("given total stocks", status, std::move(note));
  }

  {
    AssumptionStatus status = AssumptionStatus::pass;
    std::string note = "every endowment is strictly above the agent's minimal consumption";
    for (std::size_t i = 0; i < econ.num_agents() && status == AssumptionStatus::pass; ++i) {
      const Agent& agent = econ.agent(i);
      for (std::size_t j = 0; j < econ.num_goods(); ++j) {
        if (agent.endowment[j] <= agent.lower_bounds[j] + 1e-12) {
          status = AssumptionStatus::fail;
          note = "agent " + std::to_string(i + 1) + ": endowment coordinate " +
                 std::to_string(j + 1) + " does not strictly exceed the minimal consumption";
          break;
        }
      }
    }
    add("survival", status, std::move(note));
  }

  {
    AssumptionStatus status = AssumptionStatus::pass;
    std::string note;
    Rng rng(seed);
    for (std::size_t i = 0; i < econ.num_agents() && status == AssumptionStatus::pass; ++i) {
      const Agent& agent = econ.agent(i);
      if (agent.utility.kind() == UtilityKind::ces && agent.utility.rho() >= 1.0) {
        status = AssumptionStatus::fail;
        note = "agent " + std::to_string(i + 1) + ": ces exponent " +
               std::to_string(agent.utility.rho()) + " >= 1";
      }
      // Midpoint sweep: quasiconcavity on seeded triples inside the box.
      const std::size_t l = econ.num_goods();
      for (int trial = 0; trial < 1000 && status == AssumptionStatus::pass; ++trial) {
        std::vector<double> x1(l), x2(l);
        for (std::size_t j = 0; j < l; ++j) {
          const double hi = std::max(econ.truncation_margin() * total[j], 1e-6);
          x1[j] = rng.uniform(0.0, hi);
          x2[j] = rng.uniform(0.0, hi);
        }
        const double alpha = rng.uniform01();
        const Bundle a(x1), b(x2);
        const Bundle mid(convex_combination(x1, x2, alpha));
        const double ua = utility_eval(agent.utility, a);
        const double ub = utility_eval(agent.utility, b);
        const double um = utility_eval(agent.utility, mid);
        const double floor = std::min(ua, ub);
        if (um < floor - kUtilityTieTol * std::max(1.0, std::abs(floor))) {
          status = AssumptionStatus::fail;
          note = "agent " + std::to_string(i + 1) + ": utility at a convex combination drops " +
                 "below both endpoints (u(a)=" + std::to_string(ua) +
                 ", u(b)=" + std::to_string(ub) + ", u(mid)=" + std::to_string(um) + ")";
        }
      }
    }
    if (status == AssumptionStatus::pass) {
      note = "family parameters satisfy the convexity constraints; "
             "1000 seeded midpoint triples per agent found no counterexample";
    }
    add("convexity of preferences", status, std::move(note));
  }

  {
    AssumptionStatus status = AssumptionStatus::pass;
    std::string note = "utility strictly increases in some good at the feasible-box corner";
    for (std::size_t i = 0; i < econ.num_agents(); ++i) {
      const Agent& agent = econ.agent(i);
      const Bundle corner = total;
      const double u0 = utility_eval(agent.utility, corner);
      bool improvable = false;
      for (std::size_t j = 0; j < econ.num_goods(); ++j) {
        std::vector<double> bumped = corner.values();
        bumped[j] += 1e-6 * (1.0 + bumped[j]);
        if (utility_eval(agent.utility, Bundle(bumped)) > u0) {
          improvable = true;
          break;
        }
      }
      if (!improvable) {
        status = AssumptionStatus::fail;
        note = "agent " + std::to_string(i + 1) +
               " is satiated at the feasible-box corner: no good improves utility there";
        break;
      }
    }
    add("non-satiation", status, std::move(note));
  }

  return report;
}

}  // namespace walras
