#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "rumor/analysis.hpp"
#include "rumor/engine.hpp"
#include "rumor/graph.hpp"
#include "rumor/netgen.hpp"
#include "rumor/sir.hpp"

namespace rumor {

using Json = nlohmann::ordered_json;

// Graphs

/// One "i j" line per edge, i < j, 0-based, in sorted order.
void write_edge_list(std::ostream& os, const Graph& g);
/// Reads "i j" lines; blank lines and lines starting with '#' are skipped.
/// The node count is max id + 1 unless `n` is given. Throws ConfigError on
/// malformed lines.
Graph read_edge_list(std::istream& is, std::optional<std::size_t> n = std::nullopt);

/// GEXF 1.2 document; the echo-subgraph overload adds color, threshold and
/// original id node attributes.
void write_gexf(std::ostream& os, const Graph& g);
void write_gexf(std::ostream& os, const EchoSubgraph& sub);

/// "k,count" rows, ascending k.
void write_degree_histogram_csv(std::ostream& os, const DegreeHistogram& h);
Json to_json(const PowerLawFit& fit);

// Traces

Json to_json(const ModelParams& p);
ModelParams params_from_json(const Json& j);
Json to_json(const NewsSchedule& s);
NewsSchedule schedule_from_json(const Json& j);

/// Per-cycle color counts, r, v, then the cumulative spreader and debunker
/// counts.
void write_trace_csv(std::ostream& os, const SimulationTrace& trace);
/// One row per agent; activated_at is empty for agents that never activated.
void write_snapshot_csv(std::ostream& os, const SimulationTrace& trace, const Graph& g);

Json to_json(const SimulationTrace& trace);
/// Throws ConfigError on a malformed document.
SimulationTrace trace_from_json(const Json& j);

void write_sir_csv(std::ostream& os, const SirTrace& trace);
Json to_json(const SirParams& p);
SirParams sir_params_from_json(const Json& j);

// Analysis outputs

void write_series_csv(std::ostream& os, const AveragedSeries& s, const std::string& x_name = "cycle");
void write_degree_density_csv(std::ostream& os, const DegreeClassDensity& d);
void write_threshold_histogram_csv(std::ostream& os, const ThresholdHistogram& h);

// Files

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rumor
