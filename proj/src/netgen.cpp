#include "rumor/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rumor/error.hpp"
#include "rumor/random.hpp"

namespace rumor {

Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw InvalidParameter("BA generator needs m >= 1");
  if (n <= m) {
    throw InvalidParameter("BA generator needs n > m (n=" + std::to_string(n) +
                           ", m=" + std::to_string(m) + ")");
  }
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(m * (m + 1) / 2 + (n - m - 1) * m);

  // Every edge endpoint appears once here, so a uniform pick from this list
  // is a degree-proportional pick of a node.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * edges.capacity());

  for (NodeId i = 0; i <= m; ++i) {
    for (NodeId j = i + 1; j <= m; ++j) {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }

  std::vector<NodeId> targets;
  targets.reserve(m);
  for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph(n, edges);
}

DegreeHistogram degree_histogram(const Graph& g) {
  DegreeHistogram h;
  h.n_nodes = g.node_count();
  for (NodeId v = 0; v < g.node_count(); ++v) ++h.entries[g.degree(v)];
  return h;
}

PowerLawFit fit_power_law(const DegreeHistogram& h, std::size_t k_min, std::size_t min_count) {
  if (k_min < 1) throw InvalidParameter("k_min must be >= 1");
  if (min_count < 1) throw InvalidParameter("min_count must be >= 1");
  std::vector<double> xs;
  std::vector<double> ys;
  const double norm = h.n_nodes > 0 ? static_cast<double>(h.n_nodes) : 1.0;
  for (const auto& [k, count] : h.entries) {
    if (k < k_min || k == 0 || count < min_count) continue;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(static_cast<double>(count) / norm));
  }
  const std::size_t npts = xs.size();
  if (npts < 3) {
    throw InsufficientData("power-law fit needs at least 3 degree classes with k >= " +
                           std::to_string(k_min) + " and count >= " + std::to_string(min_count) +
                           ", got " + std::to_string(npts));
  }

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(npts);
  mean_y /= static_cast<double>(npts);

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  double ssr = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    const double resid = ys[i] - (intercept + slope * xs[i]);
    ssr += resid * resid;
  }
  const double sigma2 = ssr / static_cast<double>(npts - 2);

  PowerLawFit fit;
  fit.gamma = -slope;
  fit.gamma_stat_err = std::sqrt(sigma2 / sxx);
  fit.k_min = k_min;
  fit.min_count = min_count;
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.n_points = npts;
  return fit;
}

EnsembleFit gamma_ensemble(std::span<const std::uint64_t> seeds, std::size_t n,
                           std::size_t m, std::size_t k_min, std::size_t min_count) {
  if (seeds.size() < 2) throw InvalidParameter("ensemble needs at least 2 graphs");
  std::vector<double> gammas;
  double stat_sum = 0.0;
  for (std::uint64_t s : seeds) {
    const PowerLawFit fit = fit_power_law(degree_histogram(generate_ba(n, m, s)), k_min, min_count);
    gammas.push_back(fit.gamma);
    stat_sum += fit.gamma_stat_err;
  }
  const auto count = static_cast<double>(gammas.size());
  double mean = 0.0;
  for (double g : gammas) mean += g;
  mean /= count;
  double var = 0.0;
  for (double g : gammas) var += (g - mean) * (g - mean);
  var /= count - 1.0;

  EnsembleFit out;
  out.gamma_mean = mean;
  out.gamma_sys_err = std::sqrt(var);
  out.gamma_stat_err = stat_sum / count;
  out.n_graphs = gammas.size();
  return out;
}

EnsembleFit gamma_ensemble(std::size_t n_graphs, std::size_t n, std::size_t m,
                           std::size_t k_min, std::uint64_t seed, std::size_t min_count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(n_graphs);
  for (std::size_t i = 0; i < n_graphs; ++i) seeds.push_back(derive_seed(seed, i));
  return gamma_ensemble(seeds, n, m, k_min, min_count);
}

}  // namespace rumor
