#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "support/random_economy.hpp"
#include "walras/demand.hpp"
#include "walras/rng.hpp"

using namespace walras;

namespace {

Economy single(UtilityFunction u, Bundle endowment, double margin = 2.0) {
  std::vector<Agent> agents;
  agents.emplace_back(std::move(u), std::move(endowment));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < agents.front().endowment.size(); ++j) {
    names.push_back("g" + std::to_string(j + 1));
  }
  return Economy(std::move(names), std::move(agents), margin);
}

/// Pathology-shaped economy: probed agent owns only good 2, a second agent
/// keeps total stocks positive, so the box is (4, 4) at margin 2.
Economy corner_economy() {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({0.0, 2.0}));
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({2.0, 0.0}));
  return Economy({"g1", "g2"}, std::move(agents));
}

bool contains_point(const DemandSet& set, const std::vector<double>& x, double tol) {
  return std::any_of(set.extreme_points.begin(), set.extreme_points.end(), [&](const Bundle& b) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (std::abs(b[j] - x[j]) > tol) return false;
    }
    return true;
  });
}

}  // namespace

TEST_SUITE("demand") {

TEST_CASE("budget_value is the endowment's exchange value") {
  Economy econ = single(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
  CHECK(budget_value(econ, 0, PriceVector({0.5, 0.5})) == doctest::Approx(1.0));

  Economy econ2 = single(UtilityFunction::linear({1.0, 1.0}), Bundle({2.0, 0.0}));
  CHECK(budget_value(econ2, 0, PriceVector({0.0, 1.0})) == doctest::Approx(0.0));

  Economy econ3 = single(UtilityFunction::linear({1.0, 1.0}), Bundle({1.0, 3.0}));
  CHECK(budget_value(econ3, 0, PriceVector({0.25, 0.75})) == doctest::Approx(2.5));
}

TEST_CASE("cheapest_consumption is the price of the box floor") {
  Economy econ = single(UtilityFunction::linear({1.0, 1.0}), Bundle({1.0, 1.0}));
  CHECK(cheapest_consumption(econ, 0, PriceVector({0.3, 0.7})) == 0.0);

  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::linear({1.0, 1.0}), Bundle({2.0, 2.0}),
                      Bundle({1.0, 0.0}));
  Economy econ2({"x", "y"}, std::move(agents));
  CHECK(cheapest_consumption(econ2, 0, PriceVector({0.5, 0.5})) == doctest::Approx(0.5));

  std::vector<Agent> agents3;
  agents3.emplace_back(UtilityFunction::linear({1.0, 1.0}), Bundle({2.0, 2.0}),
                       Bundle({1.0, 1.0}));
  Economy econ3({"x", "y"}, std::move(agents3));
  CHECK(cheapest_consumption(econ3, 0, PriceVector({0.2, 0.8})) == doctest::Approx(1.0));
}

TEST_CASE("budget_contains intersects the box with the budget plane") {
  Economy econ = single(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
  const PriceVector p({0.5, 0.5});
  CHECK(budget_contains(econ, 0, p, Bundle({1.0, 1.0}), 1e-12));       // endowment affordable
  CHECK_FALSE(budget_contains(econ, 0, p, Bundle({2.0, 1.0}), 1e-12));  // costs 1.5 > 1

  // Zero-price free good: quantity capped by the box, not the budget.
  Economy corner = corner_economy();
  const PriceVector vertex({1.0, 0.0});
  CHECK_FALSE(budget_contains(corner, 0, vertex, Bundle({0.0, 5.0}), 1e-12));  // above box (4,4)
  CHECK(budget_contains(corner, 0, vertex, Bundle({0.0, 3.0}), 1e-12));
}

TEST_CASE("cobb-douglas demand matches the closed form and the grid oracle") {
  {
    Economy econ = single(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
    const DemandSet d = demand(econ, 0, PriceVector({0.5, 0.5}));
    REQUIRE(d.extreme_points.size() == 1);
    CHECK(d.convex);
    CHECK(d.extreme_points[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.extreme_points[0][1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto oracle = oracles::brute_force_demand(econ, 0, PriceVector({0.5, 0.5}), 1e-3);
    const double u = utility_eval(econ.agent(0).utility, d.extreme_points[0]);
    CHECK(u >= oracle.utility - 1e-6);
  }
  {
    // Edgeworth agent: owns only good 1 but the other agent keeps the box open.
    std::vector<Agent> agents;
    agents.emplace_back(UtilityFunction::cobb_douglas({0.6, 0.4}), Bundle({1.0, 0.0}));
    agents.emplace_back(UtilityFunction::cobb_douglas({0.6, 0.4}), Bundle({0.0, 1.0}));
    Economy econ({"x", "y"}, std::move(agents));
    const DemandSet d = demand(econ, 0, PriceVector({0.6, 0.4}));
    REQUIRE(d.extreme_points.size() == 1);
    CHECK(d.extreme_points[0][0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(d.extreme_points[0][1] == doctest::Approx(0.6).epsilon(1e-12));

    const auto oracle = oracles::brute_force_demand(econ, 0, PriceVector({0.6, 0.4}), 1e-3);
    const double u = utility_eval(econ.agent(0).utility, d.extreme_points[0]);
    CHECK(u >= oracle.utility - 1e-6);
  }
}

TEST_CASE("linear demand returns the whole tied budget face") {
  Economy econ = single(UtilityFunction::linear({1.0, 1.0}), Bundle({1.0, 1.0}));
  const DemandSet d = demand(econ, 0, PriceVector({0.5, 0.5}));
  REQUIRE(d.extreme_points.size() == 2);
  CHECK(d.convex);
  CHECK(contains_point(d, {2.0, 0.0}, 1e-12));
  CHECK(contains_point(d, {0.0, 2.0}, 1e-12));

  // Brute force over the budget line confirms the tie at utility 2.
  const auto oracle = oracles::brute_force_demand(econ, 0, PriceVector({0.5, 0.5}), 1e-2);
  CHECK(oracle.utility == doctest::Approx(2.0).epsilon(1e-9));
  for (const Bundle& x : d.extreme_points) {
    CHECK(utility_eval(econ.agent(0).utility, x) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("leontief demand rides the coefficient ray") {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::leontief({1.0, 1.0}), Bundle({2.0, 0.0}));
  agents.emplace_back(UtilityFunction::leontief({1.0, 1.0}), Bundle({0.0, 2.0}));
  Economy econ({"x", "y"}, std::move(agents));
  const DemandSet d = demand(econ, 0, PriceVector({0.5, 0.5}));
  REQUIRE(d.extreme_points.size() == 1);
  CHECK(d.extreme_points[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.extreme_points[0][1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("demand optimality against the brute-force oracle") {
  // Small fixed instances at the full 1e-2 resolution.
  const Economy fixed[] = {
      single(UtilityFunction::cobb_douglas({0.3, 0.7}), Bundle({1.0, 1.0})),
      single(UtilityFunction::ces({0.5, 0.5}, 0.5), Bundle({1.0, 1.0})),
      single(UtilityFunction::ces({0.4, 0.6}, -1.0), Bundle({1.0, 0.5})),
      single(UtilityFunction::linear({1.0, 2.0}), Bundle({1.0, 1.0})),
      single(UtilityFunction::leontief({1.0, 2.0}), Bundle({1.0, 1.0})),
  };
  for (const Economy& econ : fixed) {
    for (const PriceVector& p :
         {PriceVector({0.5, 0.5}), PriceVector({0.3, 0.7}), PriceVector({0.8, 0.2})}) {
      const DemandSet d = demand(econ, 0, p);
      const auto oracle = oracles::brute_force_demand(econ, 0, p, 1e-2);
      for (const Bundle& x : d.extreme_points) {
        const double u = utility_eval(econ.agent(0).utility, x);
        // No grid point may beat the returned maximizers.
        CHECK(oracle.utility <= u + kUtilityTieTol * std::max(1.0, std::abs(u)) + 1e-9);
        CHECK(budget_contains(econ, 0, p, x, 1e-8));
      }
    }
  }

  // Random 2- and 3-good economies against a coarser fixed-step oracle.
  Rng rng(21);
  int covered = 0;
  while (covered < 25) {
    Economy econ = testgen::random_smooth_economy(rng);
    if (econ.num_goods() > 3) continue;
    ++covered;
    const PriceVector p = testgen::random_interior_price(rng, econ.num_goods());
    for (std::size_t i = 0; i < econ.num_agents(); ++i) {
      const DemandSet d = demand(econ, i, p);
      const auto oracle = oracles::brute_force_demand_steps(econ, i, p, 40);
      for (const Bundle& x : d.extreme_points) {
        const double u = utility_eval(econ.agent(i).utility, x);
        CHECK(oracle.utility <= u + kUtilityTieTol * std::max(1.0, std::abs(u)) + 1e-9);
        CHECK(budget_contains(econ, i, p, x, 1e-8));
      }
    }
  }
}

TEST_CASE("monotone demand exhausts the budget") {
  Rng rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    Economy econ = testgen::random_smooth_economy(rng);
    const PriceVector p = testgen::random_interior_price(rng, econ.num_goods());
    for (std::size_t i = 0; i < econ.num_agents(); ++i) {
      const double wealth = budget_value(econ, i, p);
      for (const Bundle& x : demand(econ, i, p).extreme_points) {
        CHECK(std::abs(dot(p, x) - wealth) <= 1e-9 * std::max(1.0, wealth));
        CHECK(walras_slack(econ, i, p, x) <= 1e-9);
      }
    }
  }
}

TEST_CASE("demand depends only on the simplex representative of prices") {
  Rng rng(23);
  for (double alpha : {0.5, 2.0, 1e6}) {
    for (int trial = 0; trial < 20; ++trial) {
      Economy econ = testgen::random_smooth_economy(rng);
      std::vector<double> raw(econ.num_goods());
      for (double& v : raw) v = rng.uniform(0.05, 2.0);
      std::vector<double> scaled = raw;
      for (double& v : scaled) v *= alpha;
      const PriceVector p = normalize_prices(raw);
      const PriceVector q = normalize_prices(scaled);
      for (std::size_t i = 0; i < econ.num_agents(); ++i) {
        const DemandSet a = demand(econ, i, p);
        const DemandSet b = demand(econ, i, q);
        REQUIRE(a.extreme_points.size() == b.extreme_points.size());
        for (std::size_t e = 0; e < a.extreme_points.size(); ++e) {
          for (std::size_t j = 0; j < econ.num_goods(); ++j) {
            CHECK(std::abs(a.extreme_points[e][j] - b.extreme_points[e][j]) <= 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("budget sets are convex") {
  Rng rng(24);
  Economy econ = single(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
  const TruncationBox box = truncated_consumption_set(econ, 0);
  int hits = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const PriceVector p = testgen::random_interior_price(rng, 2);
    std::vector<double> x1(2), x2(2);
    for (std::size_t j = 0; j < 2; ++j) {
      x1[j] = rng.uniform(0.0, box.upper[j]);
      x2[j] = rng.uniform(0.0, box.upper[j]);
    }
    const Bundle a(x1), b(x2);
    if (!budget_contains(econ, 0, p, a, 1e-12) || !budget_contains(econ, 0, p, b, 1e-12)) {
      continue;
    }
    ++hits;
    const Bundle mix(convex_combination(x1, x2, rng.uniform01()));
    CHECK(budget_contains(econ, 0, p, mix, 1e-9));
  }
  CHECK(hits > 1000);  // the sample actually exercised the property
}

TEST_CASE("demand sets are convex-valued: midpoints tie and stay affordable") {
  Economy econ = single(UtilityFunction::linear({1.0, 1.0}), Bundle({1.0, 1.0}));
  const PriceVector p({0.5, 0.5});
  const DemandSet d = demand(econ, 0, p);
  REQUIRE(d.extreme_points.size() >= 2);
  const double u0 = utility_eval(econ.agent(0).utility, d.extreme_points[0]);
  for (std::size_t a = 0; a < d.extreme_points.size(); ++a) {
    for (std::size_t b = a + 1; b < d.extreme_points.size(); ++b) {
      const Bundle mid(convex_combination(d.extreme_points[a].values(),
                                          d.extreme_points[b].values(), 0.5));
      CHECK(utility_eval(econ.agent(0).utility, mid) >= u0 - kUtilityTieTol);
      CHECK(budget_contains(econ, 0, p, mid, 1e-9));
    }
  }
}

TEST_CASE("survival keeps the budget set non-empty at every price") {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    Economy econ = testgen::random_smooth_economy(rng);  // endowments >> 0
    for (const PriceVector& p : simplex_grid(econ.num_goods(), 4)) {
      for (std::size_t i = 0; i < econ.num_agents(); ++i) {
        CHECK(budget_value(econ, i, p) > cheapest_consumption(econ, i, p));
      }
    }
  }
}

TEST_CASE("demand-set extremes tie in utility and in budget value") {
  // Set-valued cases: a linear tie face, a leontief free-good slab, and the
  // zero-wealth boundary face.
  std::vector<std::pair<Economy, PriceVector>> cases;
  cases.emplace_back(single(UtilityFunction::linear({1.0, 1.0}), Bundle({1.0, 1.0})),
                     PriceVector({0.5, 0.5}));
  {
    std::vector<Agent> agents;
    agents.emplace_back(UtilityFunction::leontief({1.0, 1.0}), Bundle({1.0, 1.0}));
    agents.emplace_back(UtilityFunction::leontief({1.0, 1.0}), Bundle({1.0, 1.0}));
    cases.emplace_back(Economy({"x", "y"}, std::move(agents)), PriceVector({1.0, 0.0}));
  }
  cases.emplace_back(corner_economy(), PriceVector({1.0, 0.0}));

  for (const auto& [econ, p] : cases) {
    const DemandSet d = demand(econ, 0, p);
    REQUIRE(d.extreme_points.size() >= 2);
    const double u0 = utility_eval(econ.agent(0).utility, d.extreme_points.front());
    const double spend0 = dot(p, d.extreme_points.front());
    for (const Bundle& x : d.extreme_points) {
      CHECK(std::abs(utility_eval(econ.agent(0).utility, x) - u0) <=
            kUtilityTieTol * std::max(1.0, std::abs(u0)));
      CHECK(std::abs(dot(p, x) - spend0) <= kBudgetTol);
    }
  }
}

TEST_CASE("demand stays finite at extreme ces exponents and boundary prices") {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::ces({0.5, 0.5}, 0.999), Bundle({1.0, 1.0}));
  agents.emplace_back(UtilityFunction::ces({0.5, 0.5}, -8.0), Bundle({1.0, 1.0}));
  Economy econ({"x", "y"}, std::move(agents));
  for (const PriceVector& p : {PriceVector({1.0 - 1e-9, 1e-9}), PriceVector({0.5, 0.5}),
                               normalize_prices({1e-12, 1.0})}) {
    for (std::size_t i = 0; i < 2; ++i) {
      for (const Bundle& x : demand(econ, i, p).extreme_points) {
        for (std::size_t j = 0; j < 2; ++j) {
          CHECK(std::isfinite(x[j]));
          CHECK(x[j] >= 0.0);
        }
        CHECK(dot(p, x) <= budget_value(econ, i, p) + 1e-8);
      }
    }
  }
}

TEST_CASE("demand refuses non-convex ces preferences") {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::ces({0.5, 0.5}, 2.0), Bundle({1.0, 1.0}));
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
  Economy econ({"x", "y"}, std::move(agents));
  CHECK_THROWS_AS(demand(econ, 0, PriceVector({0.5, 0.5})), std::domain_error);
}

TEST_CASE("budget infeasibility reports the survival failure") {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({0.0, 2.0}),
                      Bundle({1.0, 0.0}));
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({2.0, 2.0}));
  Economy econ({"x", "y"}, std::move(agents));
  CHECK_THROWS_AS(demand(econ, 0, PriceVector({1.0, 0.0})), BudgetInfeasibleError);
}

TEST_CASE("zero-wealth boundary produces the tied free-good face") {
  Economy econ = corner_economy();
  const DemandSet d = demand(econ, 0, PriceVector({1.0, 0.0}));
  // Wealth is zero and good 2 is free: the whole segment {0} x [0, 4] ties.
  REQUIRE(d.extreme_points.size() == 2);
  CHECK(d.convex);
  CHECK(contains_point(d, {0.0, 0.0}, 1e-12));
  CHECK(contains_point(d, {0.0, 4.0}, 1e-12));
  CHECK(d.truncation_active[1]);
}

TEST_CASE("disposal absorbs free-good surplus and values to zero") {
  {
    Economy econ = corner_economy();
    const DisposalChoice none = disposal(econ, PriceVector({0.5, 0.5}));
    CHECK(none.amounts == std::vector<double>{0.0, 0.0});
  }
  {
    // Nobody wants good 2; total stock of it is 0.7.
    std::vector<Agent> agents;
    agents.emplace_back(UtilityFunction::linear({1.0, 0.0}), Bundle({1.0, 0.4}));
    agents.emplace_back(UtilityFunction::linear({1.0, 0.0}), Bundle({1.0, 0.3}));
    Economy econ({"x", "y"}, std::move(agents));
    const PriceVector p({1.0, 0.0});
    const DisposalChoice y = disposal(econ, p);
    CHECK(y.amounts[0] == 0.0);
    CHECK(y.amounts[1] == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(std::abs(dot(p.values(), y.amounts)) <= 1e-15);
  }
  {
    std::vector<Agent> agents;
    agents.emplace_back(UtilityFunction::linear({0.0, 1.0}), Bundle({0.5, 1.0}));
    agents.emplace_back(UtilityFunction::linear({0.0, 1.0}), Bundle({0.5, 1.0}));
    Economy econ({"x", "y"}, std::move(agents));
    // Good 1 free but fully consumed up to the box: no surplus left behind.
    const DisposalChoice y = disposal(econ, PriceVector({0.0, 1.0}));
    CHECK(y.amounts[0] <= 0.0);
    CHECK(y.amounts[1] == 0.0);
  }
}

TEST_CASE("walras_slack is non-negative and zero at monotone demand points") {
  Economy econ = single(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
  const PriceVector p({0.5, 0.5});

  const Bundle chosen = demand(econ, 0, p).extreme_points.front();
  CHECK(std::abs(walras_slack(econ, 0, p, chosen)) <= 1e-9);

  CHECK(walras_slack(econ, 0, p, Bundle({0.0, 0.0})) == doctest::Approx(1.0));
  CHECK(walras_slack(econ, 0, p, econ.agent(0).endowment) == doctest::Approx(0.0));

  CHECK_THROWS_AS(walras_slack(econ, 0, p, Bundle({3.0, 3.0})), std::domain_error);
}

TEST_CASE("budget polytope vertices and projection agree with the contract") {
  Economy econ = single(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
  const PriceVector p({0.5, 0.5});
  const auto vertices = budget_polytope_vertices(econ, 0, p);
  CHECK(vertices.size() >= 3);
  for (const Bundle& v : vertices) {
    CHECK(budget_contains(econ, 0, p, v, 1e-9));
  }
  // Projection of an affordable point is itself; of an unaffordable one, a
  // budget-plane point no better than any vertex.
  const Bundle inside({0.5, 0.5});
  const Bundle same = project_to_budget(econ, 0, p, inside);
  CHECK(std::abs(same[0] - 0.5) + std::abs(same[1] - 0.5) <= 1e-12);

  const Bundle outside({3.0, 3.0});
  const Bundle proj = project_to_budget(econ, 0, p, outside);
  CHECK(budget_contains(econ, 0, p, proj, 1e-8));
  auto dist = [&](const Bundle& a) {
    double s = 0.0;
    for (std::size_t j = 0; j < 2; ++j) s += (a[j] - outside[j]) * (a[j] - outside[j]);
    return std::sqrt(s);
  };
  for (const Bundle& v : vertices) {
    CHECK(dist(proj) <= dist(v) + 1e-9);
  }
}

}  // TEST_SUITE
