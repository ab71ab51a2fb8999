#include "walras/excess.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace walras {

ExcessSample make_excess_sample(const Economy& econ, const PriceVector& p,
                                std::vector<Bundle> selection, DisposalChoice disposal) {
  const std::size_t l = econ.num_goods();
  if (selection.size() != econ.num_agents()) {
    throw std::invalid_argument("excess sample needs one selection per agent");
  }
  if (disposal.amounts.size() != l) {
    throw std::invalid_argument("disposal choice disagrees with the goods count");
  }
  const Bundle total = total_endowment(econ);
  std::vector<double> gap(l, 0.0);
  for (const Bundle& x : selection) {
    for (std::size_t j = 0; j < l; ++j) gap[j] += x[j];
  }
  for (std::size_t j = 0; j < l; ++j) {
    if (disposal.amounts[j] > 0.0) {
      throw std::invalid_argument("disposal amounts must be non-positive");
    }
    gap[j] -= disposal.amounts[j];
    gap[j] -= total[j];
  }

  ExcessSample sample{p, std::move(selection), std::move(disposal), ExcessVector(std::move(gap))};
  walras_value(econ, sample);  // enforces p . z <= kWalrasTol
  return sample;
}

ZetaSamples excess_demand(const Economy& econ, const PriceVector& p, double tie_tol) {
  const std::size_t m = econ.num_agents();
  std::vector<DemandSet> demands;
  demands.reserve(m);
  for (std::size_t i = 0; i < m; ++i) demands.push_back(demand(econ, i, p, tie_tol));

  ZetaSamples out;
  out.total_combinations = 1;
  for (const DemandSet& d : demands) {
    out.total_combinations *= d.extreme_points.size();
    if (out.total_combinations > 4096) break;  // avoid overflow; cap applies anyway
  }

  const DisposalChoice none{std::vector<double>(p.size(), 0.0)};

  // Index-lexicographic walk over the extreme-point combinations, last agent
  // fastest, stopping at the cap.
  std::vector<std::size_t> index(m, 0);
  while (true) {
    std::vector<Bundle> selection;
    selection.reserve(m);
    for (std::size_t i = 0; i < m; ++i) selection.push_back(demands[i].extreme_points[index[i]]);
    out.samples.push_back(make_excess_sample(econ, p, std::move(selection), none));
    if (out.samples.size() == kMaxExcessSamples) {
      // capped unless this was also the last combination
      std::size_t i = m;
      bool last = true;
      while (i-- > 0) {
        if (index[i] + 1 < demands[i].extreme_points.size()) {
          last = false;
          break;
        }
      }
      out.capped = !last;
      break;
    }
    std::size_t i = m;
    bool advanced = false;
    while (i-- > 0) {
      if (index[i] + 1 < demands[i].extreme_points.size()) {
        ++index[i];
        for (std::size_t k = i + 1; k < m; ++k) index[k] = 0;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

double walras_value(const Economy& econ, const ExcessSample& sample) {
  const double value = dot(sample.price, sample.excess);
  if (value > kWalrasTol) {
    // Identify the agent with the largest budget overrun.
    std::size_t worst = 0;
    double worst_slack = -1.0;
    for (std::size_t i = 0; i < econ.num_agents(); ++i) {
      const double spend = dot(sample.price, sample.selection[i]);
      const double wealth = dot(sample.price, econ.agent(i).endowment);
      if (spend - wealth > worst_slack) {
        worst_slack = spend - wealth;
        worst = i;
      }
    }
    throw std::logic_error("excess value " + std::to_string(value) +
                           " violates p . z <= 0: agent " + std::to_string(worst + 1) +
                           " overspends its budget by " + std::to_string(worst_slack));
  }
  return value;
}

bool ExcessBound::contains(const ExcessVector& z, double tol) const {
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j] < lower[j] - tol || z[j] > upper[j] + tol) return false;
  }
  return true;
}

ExcessBound excess_bound(const Economy& econ) {
  const Bundle total = total_endowment(econ);
  const std::size_t l = total.size();
  ExcessBound bound{std::vector<double>(l), std::vector<double>(l)};
  for (std::size_t j = 0; j < l; ++j) {
    bound.lower[j] = -total[j];
    double uppers = 0.0;
    for (std::size_t i = 0; i < econ.num_agents(); ++i) {
      uppers += econ.truncation_margin() * total[j];
    }
    bound.upper[j] = uppers - total[j];
  }
  return bound;
}

bool homogeneity_check(const Economy& econ, const PriceVector& p, double alpha, double tol) {
  if (!(alpha > 0.0)) throw std::domain_error("homogeneity_check: alpha must be positive");
  std::vector<double> scaled(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) scaled[j] = alpha * p[j];
  const PriceVector q = normalize_prices(scaled);

  const ZetaSamples at_p = excess_demand(econ, p);
  const ZetaSamples at_q = excess_demand(econ, q);
  if (at_p.samples.size() != at_q.samples.size()) return false;
  for (std::size_t s = 0; s < at_p.samples.size(); ++s) {
    const ExcessVector& a = at_p.samples[s].excess;
    const ExcessVector& b = at_q.samples[s].excess;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (std::abs(a[j] - b[j]) > tol) return false;
    }
  }
  return true;
}

}  // namespace walras
