#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "support/random_economy.hpp"
#include "walras/equilibrium.hpp"
#include "walras/rng.hpp"

using namespace walras;

namespace {

Economy symmetric_cd() {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
  agents.emplace_back(UtilityFunction::cobb_douglas({0.5, 0.5}), Bundle({1.0, 1.0}));
  return Economy({"x", "y"}, std::move(agents));
}

Economy edgeworth() {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::cobb_douglas({0.6, 0.4}), Bundle({1.0, 0.0}));
  agents.emplace_back(UtilityFunction::cobb_douglas({0.6, 0.4}), Bundle({0.0, 1.0}));
  return Economy({"x", "y"}, std::move(agents));
}

Economy leontief_pair() {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::leontief({1.0, 1.0}), Bundle({2.0, 0.0}));
  agents.emplace_back(UtilityFunction::leontief({1.0, 1.0}), Bundle({0.0, 2.0}));
  return Economy({"x", "y"}, std::move(agents));
}

/// Two linear agents whose unique tie sits at p = (0.5, 0.5); away from it
/// demand is bang-bang, so tatonnement chatters while the grid lands exactly.
Economy linear_knife_edge() {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::linear({1.0, 1.0}), Bundle({2.0, 0.0}));
  agents.emplace_back(UtilityFunction::linear({1.0, 1.0}), Bundle({0.0, 1.0}));
  return Economy({"x", "y"}, std::move(agents));
}

}  // namespace

TEST_SUITE("equilibrium") {

TEST_CASE("price_adjust returns the argmax face") {
  {
    const SimplexFace face = price_adjust(ExcessVector({1.0, -1.0}));
    CHECK(face.active == std::vector<std::size_t>{0});
    CHECK(face.representative.values() == std::vector<double>{1.0, 0.0});
  }
  {
    const SimplexFace face = price_adjust(ExcessVector({0.3, 0.3}));
    CHECK(face.active == std::vector<std::size_t>{0, 1});
    CHECK(face.representative.values() == std::vector<double>{0.5, 0.5});
  }
  {
    const SimplexFace face = price_adjust(ExcessVector({2.0, 2.0, 0.0}));
    CHECK(face.active == std::vector<std::size_t>{0, 1});
    CHECK(face.representative[0] == doctest::Approx(0.5));
    CHECK(face.representative[1] == doctest::Approx(0.5));
    CHECK(face.representative[2] == 0.0);
    // Brute force over the dense grid attains the same maximum on that edge.
    CHECK(oracles::grid_max_value({2.0, 2.0, 0.0}, 100) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("price_adjust matches the brute-force argmax over a dense grid") {
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t l = 2 + rng.below(2);
    std::vector<double> z(l);
    for (double& v : z) v = rng.uniform(-2.0, 2.0);
    const SimplexFace face = price_adjust(ExcessVector(z));

    const double grid_max = oracles::grid_max_value(z, 100);
    double top = z[0];
    for (double v : z) top = std::max(top, v);
    CHECK(std::abs(grid_max - top) <= 1e-9);  // vertices live on the grid
    for (std::size_t j = 0; j < l; ++j) {
      const bool active = std::find(face.active.begin(), face.active.end(), j) != face.active.end();
      CHECK(active == (z[j] >= top - 1e-9));
      if (active) {
        // Each active vertex attains the maximum value.
        CHECK(std::abs(z[j] - top) <= 1e-9);
      }
    }
    // The barycentric representative ties with the vertices.
    CHECK(std::abs(dot(face.representative.values(), z) - top) <= 1e-9);
  }
}

TEST_CASE("faces are convex-valued: mixtures attain the same value") {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> z{rng.uniform(-1.0, 1.0), 0.0, 0.0};
    // Tie the maximum across the first two coordinates so the face is an edge.
    z[1] = z[0];
    z[2] = z[0] - 0.3 - rng.uniform01();
    const SimplexFace face = price_adjust(ExcessVector(z));
    REQUIRE(face.active.size() >= 2);
    std::vector<double> e1(3, 0.0), e2(3, 0.0);
    e1[face.active[0]] = 1.0;
    e2[face.active[1]] = 1.0;
    const double v1 = dot(e1, z);
    const auto mix = convex_combination(e1, e2, rng.uniform01());
    CHECK(std::abs(dot(mix, z) - v1) <= 1e-12);
  }
}

TEST_CASE("psi pairs the price face with the excess set") {
  Economy econ = symmetric_cd();
  {
    // At the equilibrium the excess is ~0 in both goods: the face is the
    // whole simplex and the excess set contains z*.
    const PsiValue value = psi_map(econ, PriceVector({0.5, 0.5}), ExcessVector({0.0, 0.0}));
    CHECK(value.face.active == std::vector<std::size_t>{0, 1});
    REQUIRE(value.zeta.samples.size() == 1);
    CHECK(std::abs(value.zeta.samples[0].excess[0]) <= 1e-12);
  }
  {
    const PsiValue value = psi_map(econ, PriceVector({0.5, 0.5}), ExcessVector({0.2, -0.2}));
    CHECK(value.face.active == std::vector<std::size_t>{0});
    CHECK(value.face.representative.values() == std::vector<double>{1.0, 0.0});
  }
  {
    const PsiValue value = psi_map(econ, PriceVector({0.5, 0.5}), ExcessVector({-0.5, -0.1}));
    CHECK(value.face.active == std::vector<std::size_t>{1});  // least negative coordinate
  }
  CHECK_THROWS_AS(psi_map(econ, PriceVector({0.5, 0.5}), ExcessVector({50.0, 0.0})),
                  std::domain_error);
}

TEST_CASE("grid solver finds the symmetric equilibrium exactly") {
  const EquilibriumCertificate cert = find_equilibrium_grid(symmetric_cd(), 1e-6, 12);
  CHECK(std::abs(cert.price[0] - 0.5) <= 1e-9);
  CHECK(std::abs(cert.price[1] - 0.5) <= 1e-9);
  CHECK(cert.excess.max_coordinate() <= 1e-6);
  CHECK(cert.method == SolveMethod::grid);
}

TEST_CASE("grid solver matches the bisection oracle on the edgeworth economy") {
  // Independent oracle: market clearing for good 1 means
  // 0.6 + 0.6 (1 - p) / p - 1 = 0, bisected to near machine precision.
  const double oracle = oracles::bisect(
      [](double p) { return 0.6 + 0.6 * (1.0 - p) / p - 1.0; }, 0.05, 0.95, 1e-13);
  CHECK(std::abs(oracle - 0.6) <= 1e-9);

  const EquilibriumCertificate cert = find_equilibrium_grid(edgeworth(), 1e-4, 12);
  CHECK(std::abs(cert.price[0] - oracle) <= 1e-3);
  CHECK(cert.excess.max_coordinate() <= 1e-4);
}

TEST_CASE("grid solver handles set-valued leontief and linear ties") {
  {
    const EquilibriumCertificate cert = find_equilibrium_grid(leontief_pair(), 1e-6, 12);
    CHECK(std::abs(cert.price[0] - 0.5) <= 1e-9);
    CHECK(std::abs(cert.excess[0]) <= 1e-9);
    CHECK(std::abs(cert.excess[1]) <= 1e-9);
  }
  {
    const EquilibriumCertificate cert = find_equilibrium_grid(linear_knife_edge(), 1e-6, 12);
    CHECK(std::abs(cert.price[0] - 0.5) <= 1e-9);
  }
}

TEST_CASE("solver exhaustion carries the best candidate") {
  // Mixed endowments with tied linear preferences: the market only clears
  // through a strict convex combination of the tied demand vertices, which
  // vertex sampling never exhibits. The residual is bounded away from zero
  // everywhere, so the search must exhaust its budget and report the best
  // candidate it saw.
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::linear({1.0, 1.0}), Bundle({1.0, 0.25}));
  agents.emplace_back(UtilityFunction::linear({1.0, 1.0}), Bundle({0.2, 0.3}));
  Economy econ({"x", "y"}, std::move(agents));
  try {
    find_equilibrium_grid(econ, 1e-4, 2);
    FAIL("expected SearchBudgetExhausted");
  } catch (const SearchBudgetExhausted& e) {
    CHECK(e.refinements() == 2);
    CHECK(e.best_price().size() == 2);
    CHECK(std::abs(e.best_price()[0] - 0.5) <= 0.05);
    CHECK(e.best_residual() == doctest::Approx(0.05).epsilon(1e-6));
  }
}

TEST_CASE("certify accepts the equilibrium price and rejects others") {
  Economy econ = edgeworth();
  {
    const CertifyOutcome outcome = certify(econ, PriceVector({0.6, 0.4}), 1e-6);
    CHECK(outcome.accepted);
    CHECK(std::abs(outcome.certificate.excess[0]) <= 1e-9);
    REQUIRE(outcome.certificate.slack.size() == 2);
    CHECK(outcome.certificate.slack[0].price == doctest::Approx(0.6));
  }
  {
    const CertifyOutcome outcome = certify(econ, PriceVector({0.5, 0.5}), 1e-6);
    CHECK_FALSE(outcome.accepted);
    REQUIRE(!outcome.violations.empty());
    CHECK(outcome.violations[0].good == 0);
    CHECK(outcome.violations[0].excess == doctest::Approx(0.2).epsilon(1e-9));
  }
}

TEST_CASE("free-good equilibrium certifies with zero price and negative excess") {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::linear({1.0, 0.0}), Bundle({2.0, 1.0}));
  agents.emplace_back(UtilityFunction::linear({1.0, 0.0}), Bundle({1.0, 1.0}));
  Economy econ({"x", "y"}, std::move(agents));
  const PriceVector p({1.0, 0.0});
  const CertifyOutcome outcome = certify(econ, p, 1e-6);
  CHECK(outcome.accepted);
  CHECK(outcome.certificate.excess[1] < 0.0);
  CHECK(std::abs(outcome.certificate.excess[0]) <= 1e-9);
  CHECK(std::abs(dot(p, outcome.certificate.excess)) <= 1e-12);
}

TEST_CASE("certification is scale-invariant in the price flag") {
  Economy econ = edgeworth();
  for (double alpha : {0.5, 2.0}) {
    const PriceVector scaled = normalize_prices({alpha * 0.6, alpha * 0.4});
    CHECK(certify(econ, scaled, 1e-6).accepted);
    const PriceVector scaled_bad = normalize_prices({alpha * 0.5, alpha * 0.5});
    CHECK_FALSE(certify(econ, scaled_bad, 1e-6).accepted);
  }
}

TEST_CASE("accepted certificates satisfy the fixed-point inequalities") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    Economy econ = testgen::random_smooth_economy(rng);
    const EquilibriumCertificate cert = find_equilibrium_grid(econ, 1e-4, 12);
    const std::size_t l = econ.num_goods();
    for (std::size_t j = 0; j < l; ++j) {
      CHECK(cert.excess[j] <= 1e-4);
      if (cert.price[j] > 1e-4) {
        CHECK(std::abs(cert.excess[j]) <= 1e-4);
      }
    }
    CHECK(dot(cert.price, cert.excess) >= -1e-4 * static_cast<double>(l));
    // Independent re-check through certify.
    CHECK(certify(econ, cert.price, cert.epsilon).accepted);
  }
}

TEST_CASE("tatonnement certifies immediately at a fixed point") {
  Economy econ = symmetric_cd();
  const TatonnementResult result =
      tatonnement(econ, PriceVector({0.5, 0.5}), 0.1, 50, 1e-6);
  REQUIRE(result.certificate.has_value());
  CHECK(result.certificate->steps == 0);
  CHECK(result.trace.size() == 1);
}

TEST_CASE("tatonnement converges on the symmetric economy") {
  Economy econ = symmetric_cd();
  const TatonnementResult result =
      tatonnement(econ, PriceVector({0.9, 0.1}), 0.1, 200, 1e-6);
  REQUIRE(result.certificate.has_value());
  CHECK(std::abs(result.certificate->price[0] - 0.5) <= 1e-6);
  CHECK(result.certificate->method == SolveMethod::tatonnement);

  // Cross-check against the grid certificate.
  const EquilibriumCertificate grid_cert = find_equilibrium_grid(econ, 1e-6, 12);
  CHECK(std::abs(result.certificate->price[0] - grid_cert.price[0]) <= 1e-5);
}

TEST_CASE("tatonnement may oscillate on linear knife-edge ties") {
  Economy econ = linear_knife_edge();
  const TatonnementResult result =
      tatonnement(econ, PriceVector({0.9, 0.1}), 0.05, 150, 1e-8);
  // Bang-bang demand keeps the iterates hopping across the tie price; the
  // trace is still recorded in full and the grid solver succeeds anyway.
  CHECK_FALSE(result.certificate.has_value());
  CHECK(result.trace.size() == 151);
  CHECK_NOTHROW(find_equilibrium_grid(econ, 1e-6, 12));
  CHECK_THROWS_AS(tatonnement(econ, PriceVector({0.9, 0.1}), 0.0, 10, 1e-8), std::domain_error);
}

}  // TEST_SUITE
