#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>

#include "rumor/graph.hpp"

namespace rumor {

/// Barabási-Albert growth.
///
/// Starts from a complete graph on m+1 nodes; every later node attaches to m
/// distinct existing nodes drawn with probability proportional to their
/// current degree (repeated draws, duplicates rejected). Deterministic for a
/// fixed (n, m, seed). Throws InvalidParameter unless m >= 1 and n > m.
Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// Node counts per degree class.
struct DegreeHistogram {
  std::map<std::size_t, std::size_t> entries;
  std::size_t n_nodes = 0;
};

DegreeHistogram degree_histogram(const Graph& g);

struct PowerLawFit {
  double gamma = 0.0;
  double gamma_stat_err = 0.0;
  std::size_t k_min = 1;
  std::size_t min_count = 1;
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

/// Classes with fewer nodes than this are left out of fits by default: in a
/// finite graph the sparse tail sits on the one-node floor and flattens the
/// slope.
constexpr std::size_t kDefaultMinClassCount = 5;

/// Least-squares line through (ln k, ln f(k)) for every class k >= k_min
/// holding at least min_count nodes; gamma is minus the slope and the error
/// is the slope's standard error from the fit covariance. Frequencies are
/// counts / n_nodes. min_count = 1 fits every nonempty class.
/// Throws InsufficientData with fewer than three usable classes.
PowerLawFit fit_power_law(const DegreeHistogram& h, std::size_t k_min,
                          std::size_t min_count = kDefaultMinClassCount);

struct EnsembleFit {
  double gamma_mean = 0.0;
  double gamma_sys_err = 0.0;   // sample standard deviation of the gammas
  double gamma_stat_err = 0.0;  // mean of the per-graph fit errors
  std::size_t n_graphs = 0;
};

/// Fits one graph per seed. Requires at least two seeds.
EnsembleFit gamma_ensemble(std::span<const std::uint64_t> seeds, std::size_t n,
                           std::size_t m, std::size_t k_min,
                           std::size_t min_count = kDefaultMinClassCount);

/// Sub-seeds derive_seed(seed, 0..n_graphs-1).
EnsembleFit gamma_ensemble(std::size_t n_graphs, std::size_t n, std::size_t m,
                           std::size_t k_min, std::uint64_t seed,
                           std::size_t min_count = kDefaultMinClassCount);

/// Default fit cutoff used by the tools: classes below m+1 are the
/// saturated low-degree region.
constexpr std::size_t default_k_min(std::size_t m) { return m + 1; }

}  // namespace rumor
