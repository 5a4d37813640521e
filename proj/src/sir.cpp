#include "rumor/sir.hpp"

#include <string>

#include "rumor/error.hpp"

namespace rumor {

void SirParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("SIR alpha must lie in [0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidParameter("SIR lambda must lie in [0, 1]");
  if (n_initial_spreaders < 1) throw InvalidParameter("SIR needs at least one initial spreader");
}

SirCounts SirState::counts() const {
  SirCounts c;
  for (auto s : nodes) {
    switch (s) {
      case SirCompartment::Ignorant: ++c.ignorant; break;
      case SirCompartment::Spreader: ++c.spreaders; break;
      case SirCompartment::Stifler: ++c.stiflers; break;
    }
  }
  return c;
}

SirState sir_init(const Graph& g, const SirParams& params, Rng& rng) {
  params.validate();
  const std::size_t n = g.node_count();
  if (params.n_initial_spreaders > n) {
    throw InvalidParameter("more initial spreaders (" + std::to_string(params.n_initial_spreaders) +
                           ") than nodes (" + std::to_string(n) + ")");
  }
  SirState state;
  state.nodes.assign(n, SirCompartment::Ignorant);
  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  std::vector<NodeId> order(n);
  for (NodeId i = 0; i < n; ++i) order[i] = i;
  for (std::size_t k = 0; k < params.n_initial_spreaders; ++k) {
    const auto pick = k + static_cast<std::size_t>(rng.below(n - k));
    std::swap(order[k], order[pick]);
    state.nodes[order[k]] = SirCompartment::Spreader;
  }
  return state;
}

void sir_step(SirState& state, const Graph& g, const SirParams& params, Rng& rng) {
  std::vector<NodeId> spreaders;
  for (NodeId i = 0; i < state.nodes.size(); ++i) {
    if (state.nodes[i] == SirCompartment::Spreader) spreaders.push_back(i);
  }
  rng.shuffle(std::span<NodeId>(spreaders));
  for (NodeId i : spreaders) {
    if (state.nodes[i] != SirCompartment::Spreader) continue;
    const auto nbrs = g.neighbors(i);
    if (nbrs.empty()) continue;
    const NodeId j = nbrs[rng.below(nbrs.size())];
    if (state.nodes[j] == SirCompartment::Ignorant) {
      if (rng.bernoulli(params.lambda)) state.nodes[j] = SirCompartment::Spreader;
    } else if (rng.bernoulli(params.alpha)) {
      state.nodes[i] = SirCompartment::Stifler;
    }
  }
  ++state.cycle;
}

SirTrace run_sir(const Graph& g, const SirParams& params, int max_cycles, std::uint64_t seed) {
  if (max_cycles < 1) throw InvalidParameter("max_cycles must be >= 1");
  Rng rng(seed);
  SirState state = sir_init(g, params, rng);
  SirTrace trace;
  trace.seed = seed;
  trace.params = params;
  trace.node_count = g.node_count();
  for (int t = 0; t < max_cycles; ++t) {
    sir_step(state, g, params, rng);
    const SirCounts c = state.counts();
    trace.cycles.push_back({t, c});
    if (c.spreaders == 0) break;
  }
  return trace;
}

}  // namespace rumor
