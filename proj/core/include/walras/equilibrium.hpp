#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "walras/economy.hpp"
#include "walras/excess.hpp"
#include "walras/geometry.hpp"

namespace walras {

// Tolerance deciding which coordinates belong to the argmax face of p . z.
inline constexpr double kFaceTol = 1e-9;
// Price floor keeping tatonnement iterates off the exact boundary before
// renormalization; certification re-checks at the exact price.
inline constexpr double kPriceFloor = 1e-12;

inline constexpr double kDefaultSolveEpsilon = 1e-4;
inline constexpr std::size_t kDefaultMaxRefinements = 12;

/// Face of the simplex spanned by the coordinates attaining max_j z_j; the
/// image of the exchange-value adjustment map. The representative is the
/// face's barycenter.
struct SimplexFace {
  std::vector<std::size_t> active;
  PriceVector representative;
};

/// active = { j : z_j >= max_k z_k - tol }, uniform weights on the face.
SimplexFace price_adjust(const ExcessVector& z, double tol = kFaceTol);

struct PsiValue {
  SimplexFace face;
  ZetaSamples zeta;
};

/// The composite map whose fixed points are equilibria: the price face that
/// maximizes the value of z, paired with the excess set at p.
PsiValue psi_map(const Economy& econ, const PriceVector& p, const ExcessVector& z);

enum class SolveMethod { grid, tatonnement, direct };

const char* to_string(SolveMethod method);

struct GoodSlack {
  double price;
  double excess;
};

struct EquilibriumCertificate {
  PriceVector price;
  ExcessVector excess;
  std::vector<GoodSlack> slack;  // per good: (p*_j, z*_j)
  double epsilon = 0.0;
  std::size_t steps = 0;  // grid refinements or tatonnement iterations consumed
  SolveMethod method = SolveMethod::direct;
};

struct CertificateViolation {
  std::size_t good;
  double price;
  double excess;
  std::string reason;
};

struct CertifyOutcome {
  bool accepted = false;
  EquilibriumCertificate certificate;  // populated with slack records either way
  std::vector<CertificateViolation> violations;
};

/// Evaluates the excess set at p, takes the sample with the smallest
/// max_j z_j, and checks the equilibrium contract: z_j <= epsilon everywhere
/// and |z_j| <= epsilon wherever p_j > epsilon.
CertifyOutcome certify(const Economy& econ, const PriceVector& p, double epsilon);

/// Thrown when the grid search runs out of refinements. Carries the best
/// candidate; a large residual suggests a violated assumption, a small one
/// suggests the tolerance is tighter than the refinement budget allows.
class SearchBudgetExhausted : public std::runtime_error {
 public:
  SearchBudgetExhausted(PriceVector best_price, double best_residual, std::size_t refinements);

  const PriceVector& best_price() const { return best_price_; }
  double best_residual() const { return best_residual_; }
  std::size_t refinements() const { return refinements_; }

 private:
  PriceVector best_price_;
  double best_residual_;
  std::size_t refinements_;
};

/// Fixed-point search by simplex-grid scanning at doubling resolution around
/// the best cells. A price is accepted once certify() passes at epsilon.
EquilibriumCertificate find_equilibrium_grid(const Economy& econ,
                                             double epsilon = kDefaultSolveEpsilon,
                                             std::size_t max_refinements = kDefaultMaxRefinements);

struct TatonnementStep {
  std::size_t iteration;
  PriceVector price;
  ExcessVector excess;
  double residual;
};

struct TatonnementResult {
  std::vector<TatonnementStep> trace;
  std::optional<EquilibriumCertificate> certificate;
};

/// Iterates p <- normalize(max(floor, p + step * z)) with z the first sample
/// of the excess set. Non-convergence is a normal outcome: the trace is the
/// deliverable and the certificate optional.
TatonnementResult tatonnement(const Economy& econ, const PriceVector& start, double step,
                              std::size_t max_iters, double epsilon);

}  // namespace walras
