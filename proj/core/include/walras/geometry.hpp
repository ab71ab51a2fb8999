#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace walras {

// Membership tolerance for the price simplex. Double-precision sums of up to
// ~1e3 coordinates stay well inside this.
inline constexpr double kSimplexTol = 1e-9;

/// Non-negative quantities of each good.
class Bundle {
 public:
  Bundle() = default;  // empty placeholder; real bundles come from the value ctor
  explicit Bundle(std::vector<double> quantities);
  static Bundle zeros(std::size_t goods);

  std::size_t size() const { return quantities_.size(); }
  double operator[](std::size_t j) const { return quantities_[j]; }
  const std::vector<double>& values() const { return quantities_; }

  bool operator==(const Bundle& other) const = default;

 private:
  std::vector<double> quantities_;
};

/// A list of exchange values: a point of the standard simplex. Every
/// coordinate is non-negative and the coordinates sum to one within
/// kSimplexTol.
class PriceVector {
 public:
  PriceVector() = default;  // empty placeholder
  explicit PriceVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const PriceVector& other) const = default;

 private:
  std::vector<double> values_;
};

/// Signed per-good gap between planned consumption and available stocks.
class ExcessVector {
 public:
  ExcessVector() = default;  // empty placeholder
  explicit ExcessVector(std::vector<double> gaps);

  std::size_t size() const { return gaps_.size(); }
  double operator[](std::size_t j) const { return gaps_[j]; }
  const std::vector<double>& values() const { return gaps_; }

  /// Largest coordinate; the solver's residual metric.
  double max_coordinate() const;

  bool operator==(const ExcessVector& other) const = default;

 private:
  std::vector<double> gaps_;
};

/// Rescales a non-negative, non-zero tuple onto the simplex by dividing each
/// coordinate by the total. The all-zero tuple has no normalisation and is a
/// domain error.
PriceVector normalize_prices(const std::vector<double>& raw);

/// alpha * a + (1 - alpha) * b, alpha in [0, 1].
std::vector<double> convex_combination(const std::vector<double>& a,
                                       const std::vector<double>& b,
                                       double alpha);

/// True iff all coordinates are >= -tol and the sum is within tol of one.
bool simplex_contains(const std::vector<double>& p, double tol);

/// All points with coordinates in {0, 1/k, ..., k/k} summing to one, in
/// lexicographic order. Count is C(k + l - 1, l - 1).
std::vector<PriceVector> simplex_grid(std::size_t dimension,
                                      std::size_t resolution);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double dot(const PriceVector& p, const Bundle& x);
double dot(const PriceVector& p, const ExcessVector& z);

namespace detail {

/// Visits every integer tuple n with lower[j] <= n[j] <= upper[j] and
/// sum(n) == total, in lexicographic order. Shared by simplex_grid and the
/// solver's local refinement windows.
void for_each_bounded_composition(
    const std::vector<long>& lower, const std::vector<long>& upper, long total,
    const std::function<void(const std::vector<long>&)>& visit);

}  // namespace detail

}  // namespace walras
