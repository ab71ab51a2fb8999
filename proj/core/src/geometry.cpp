#include "walras/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace walras {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + " has a non-finite coordinate");
    }
  }
}

}  // namespace

Bundle::Bundle(std::vector<double> quantities) : quantities_(std::move(quantities)) {
  if (quantities_.empty()) throw std::invalid_argument("bundle must have at least one good");
  require_finite(quantities_, "bundle");
  for (double q : quantities_) {
    if (q < 0.0) throw std::invalid_argument("bundle coordinates must be non-negative");
  }
}

Bundle Bundle::zeros(std::size_t goods) {
  return Bundle(std::vector<double>(goods, 0.0));
}

PriceVector::PriceVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("price vector must have at least one good");
  require_finite(values_, "price vector");
  for (double v : values_) {
    if (v < 0.0) throw std::invalid_argument("price coordinates must be non-negative");
  }
  const double sum = std::accumulate(values_.begin(), values_.end(), 0.0);
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw std::invalid_argument("price coordinates must sum to 1, got " + std::to_string(sum));
  }
}

ExcessVector::ExcessVector(std::vector<double> gaps) : gaps_(std::move(gaps)) {
  if (gaps_.empty()) throw std::invalid_argument("excess vector must have at least one good");
  require_finite(gaps_, "excess vector");
}

double ExcessVector::max_coordinate() const {
  return *std::max_element(gaps_.begin(), gaps_.end());
}

PriceVector normalize_prices(const std::vector<double>& raw) {
  if (raw.empty()) throw std::domain_error("cannot normalize an empty tuple");
  require_finite(raw, "raw prices");
  double sum = 0.0;
  for (double v : raw) {
    if (v < 0.0) throw std::domain_error("cannot normalize a tuple with negative coordinates");
    sum += v;
  }
  if (sum <= 0.0) {
    throw std::domain_error("cannot normalize the zero tuple: it has no exchange-value ratios");
  }
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) out[j] = raw[j] / sum;
  return PriceVector(std::move(out));
}

std::vector<double> convex_combination(const std::vector<double>& a,
                                       const std::vector<double>& b, double alpha) {
  if (a.size() != b.size()) throw std::invalid_argument("convex_combination: size mismatch");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::domain_error("convex_combination: alpha must lie in [0, 1]");
  }
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = alpha * a[j] + (1.0 - alpha) * b[j];
  return out;
}

bool simplex_contains(const std::vector<double>& p, double tol) {
  if (tol < 0.0) throw std::domain_error("simplex_contains: tol must be non-negative");
  if (p.empty()) return false;
  double sum = 0.0;
  for (double v : p) {
    if (v < -tol) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

namespace detail {

void for_each_bounded_composition(
    const std::vector<long>& lower, const std::vector<long>& upper, long total,
    const std::function<void(const std::vector<long>&)>& visit) {
  const std::size_t n = lower.size();
  if (upper.size() != n) throw std::invalid_argument("composition bounds size mismatch");

  // Suffix sums of the bounds let the recursion prune infeasible prefixes.
  std::vector<long> lo_suffix(n + 1, 0), hi_suffix(n + 1, 0);
  for (std::size_t j = n; j-- > 0;) {
    lo_suffix[j] = lo_suffix[j + 1] + lower[j];
    hi_suffix[j] = hi_suffix[j + 1] + upper[j];
  }

  std::vector<long> current(n, 0);
  auto rec = [&](auto&& self, std::size_t j, long remaining) -> void {
    if (j + 1 == n) {
      if (remaining >= lower[j] && remaining <= upper[j]) {
        current[j] = remaining;
        visit(current);
      }
      return;
    }
    const long lo = std::max(lower[j], remaining - hi_suffix[j + 1]);
    const long hi = std::min(upper[j], remaining - lo_suffix[j + 1]);
    for (long v = lo; v <= hi; ++v) {
      current[j] = v;
      self(self, j + 1, remaining - v);
    }
  };
  if (n > 0) rec(rec, 0, total);
}

}  // namespace detail

std::vector<PriceVector> simplex_grid(std::size_t dimension, std::size_t resolution) {
  if (dimension == 0) throw std::domain_error("simplex_grid: dimension must be positive");
  if (resolution == 0) throw std::domain_error("simplex_grid: resolution must be at least 1");

  std::vector<PriceVector> grid;
  const std::vector<long> lower(dimension, 0);
  const std::vector<long> upper(dimension, static_cast<long>(resolution));
  const double k = static_cast<double>(resolution);
  detail::for_each_bounded_composition(
      lower, upper, static_cast<long>(resolution), [&](const std::vector<long>& n) {
        std::vector<double> p(dimension);
        for (std::size_t j = 0; j < dimension; ++j) p[j] = static_cast<double>(n[j]) / k;
        grid.emplace_back(std::move(p));
      });
  return grid;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum;
}

double dot(const PriceVector& p, const Bundle& x) { return dot(p.values(), x.values()); }

double dot(const PriceVector& p, const ExcessVector& z) { return dot(p.values(), z.values()); }

}  // namespace walras
