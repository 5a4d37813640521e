#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/graph.hpp"

namespace rumor {

enum class AgentColor : std::uint8_t {
  Undeployed,   // red
  Spontaneous,  // blue
  Influenced,   // green
  Persuaded,    // yellow
  Debunker,     // orange
  Inactive,     // grey
};

inline constexpr std::size_t kColorCount = 6;
inline constexpr std::array<AgentColor, kColorCount> kAllColors = {
    AgentColor::Undeployed, AgentColor::Spontaneous, AgentColor::Influenced,
    AgentColor::Persuaded,  AgentColor::Debunker,    AgentColor::Inactive};

std::string_view color_name(AgentColor c);
/// Inverse of color_name. Throws ConfigError on an unknown name.
AgentColor parse_color(std::string_view name);

constexpr bool is_spreader(AgentColor c) {
  return c == AgentColor::Spontaneous || c == AgentColor::Influenced ||
         c == AgentColor::Persuaded;
}
constexpr bool is_active(AgentColor c) {
  return is_spreader(c) || c == AgentColor::Debunker;
}

struct AgentState {
  double threshold = 0.0;
  double threshold_initial = 0.0;
  AgentColor color = AgentColor::Undeployed;
  // Color held just before turning Inactive; Undeployed until then.
  AgentColor last_active = AgentColor::Undeployed;
  std::optional<int> activated_at;
  bool ever_spread = false;
  bool ever_debunked = false;
  // Collective influence has already lowered the threshold once.
  bool influence_applied = false;
  // Senders of persuasion messages, sorted and unique.
  std::vector<NodeId> contacted_by;
};

/// One piece of a piecewise-constant news schedule.
struct ScheduleSegment {
  int start_cycle = 0;
  double reliability = 0.0;
  double visualization = 0.0;

  bool operator==(const ScheduleSegment&) const = default;
};

/// Reliability r(t) and visualization probability v(t) over cycles.
class NewsSchedule {
 public:
  NewsSchedule() = default;
  /// Throws InvalidParameter unless the first segment starts at 0, starts
  /// strictly increase, and every r, v lies in [0, 1].
  explicit NewsSchedule(std::vector<ScheduleSegment> segments);

  static NewsSchedule constant(double reliability, double visualization);

  const std::vector<ScheduleSegment>& segments() const { return segments_; }

  bool operator==(const NewsSchedule&) const = default;

 private:
  std::vector<ScheduleSegment> segments_{ScheduleSegment{}};
};

struct NewsValue {
  double reliability = 0.0;
  double visualization = 0.0;
};

/// Values of the last segment whose start is <= t.
NewsValue reliability_at(const NewsSchedule& s, int t);

struct ModelParams {
  double influence_fraction = 0.30;
  double hub_degree_quantile = 0.01;
  double delta_influence = 0.02;
  double delta_persuasion = 0.05;
  double epsilon_similarity = 0.15;
  int t_active = 40;
  double debunk_margin = 0.10;
  bool debunking_enabled = false;

  /// Throws InvalidParameter when a field is outside its domain.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// Named initial-threshold distribution: "constant" (value), "uniform"
/// (lo, hi) or "normal" (mean, sd, clamped to [0, 1]).
struct ThresholdDistribution {
  std::string name = "uniform";
  double a = 0.0;
  double b = 1.0;

  /// Parses "uniform:0:1", "constant:0.5", "normal:0.5:0.2".
  static ThresholdDistribution parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const ThresholdDistribution&) const = default;
};

}  // namespace rumor
