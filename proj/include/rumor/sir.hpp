#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rumor/graph.hpp"
#include "rumor/random.hpp"

namespace rumor {

/// Ignorant / Spreader / Stifler compartments of the rumor model.
enum class SirCompartment : std::uint8_t { Ignorant, Spreader, Stifler };

struct SirParams {
  double alpha = 0.05;   // stifling probability per contact with S or R
  double lambda = 0.27;  // conversion probability per contact with I
  std::size_t n_initial_spreaders = 1;

  void validate() const;

  bool operator==(const SirParams&) const = default;
};

struct SirCounts {
  std::size_t ignorant = 0;
  std::size_t spreaders = 0;
  std::size_t stiflers = 0;

  bool operator==(const SirCounts&) const = default;
};

struct SirState {
  std::vector<SirCompartment> nodes;
  int cycle = 0;

  SirCounts counts() const;
};

/// All Ignorant except n_initial_spreaders distinct nodes drawn uniformly.
SirState sir_init(const Graph& g, const SirParams& params, Rng& rng);

/// One sweep: the spreaders present at the start of the cycle act once each
/// in shuffled order. Spreader i contacts a uniform neighbour j; an Ignorant
/// j turns Spreader with probability lambda, otherwise i turns Stifler with
/// probability alpha. Later contacts in the sweep see earlier outcomes.
void sir_step(SirState& state, const Graph& g, const SirParams& params, Rng& rng);

struct SirRecord {
  int cycle = 0;
  SirCounts counts;

  bool operator==(const SirRecord&) const = default;
};

struct SirTrace {
  std::vector<SirRecord> cycles;  // state after each executed cycle
  std::uint64_t seed = 0;
  SirParams params;
  std::size_t node_count = 0;

  bool operator==(const SirTrace&) const = default;
};

/// Runs until no spreader is left or max_cycles sweeps have been made.
SirTrace run_sir(const Graph& g, const SirParams& params, int max_cycles, std::uint64_t seed);

}  // namespace rumor
