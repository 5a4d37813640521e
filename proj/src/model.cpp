#include "rumor/model.hpp"

#include "rumor/error.hpp"
#include "rumor/format.hpp"

namespace rumor {

namespace {

constexpr std::array<std::string_view, kColorCount> kColorNames = {
    "undeployed", "spontaneous", "influenced", "persuaded", "debunker", "inactive"};

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

std::string_view color_name(AgentColor c) {
  return kColorNames[static_cast<std::size_t>(c)];
}

AgentColor parse_color(std::string_view name) {
  for (std::size_t i = 0; i < kColorCount; ++i) {
    if (kColorNames[i] == name) return static_cast<AgentColor>(i);
  }
  throw ConfigError("unknown agent color '" + std::string(name) + "'");
}

NewsSchedule::NewsSchedule(std::vector<ScheduleSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw InvalidParameter("schedule needs at least one segment");
  if (segments_.front().start_cycle != 0) {
    throw InvalidParameter("first schedule segment must start at cycle 0");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (i > 0 && s.start_cycle <= segments_[i - 1].start_cycle) {
      throw InvalidParameter("schedule segment starts must be strictly increasing");
    }
    if (!in_unit(s.reliability) || !in_unit(s.visualization)) {
      throw InvalidParameter("schedule reliability and visualization must lie in [0, 1]");
    }
  }
}

NewsSchedule NewsSchedule::constant(double reliability, double visualization) {
  return NewsSchedule({{0, reliability, visualization}});
}

NewsValue reliability_at(const NewsSchedule& s, int t) {
  const ScheduleSegment* current = &s.segments().front();
  for (const auto& seg : s.segments()) {
    if (seg.start_cycle > t) break;
    current = &seg;
  }
  return {current->reliability, current->visualization};
}

void ModelParams::validate() const {
  if (!(influence_fraction > 0.0 && influence_fraction <= 1.0)) {
    throw InvalidParameter("influence_fraction must lie in (0, 1]");
  }
  if (!in_unit(hub_degree_quantile)) throw InvalidParameter("hub_degree_quantile must lie in [0, 1]");
  if (!in_unit(delta_influence)) throw InvalidParameter("delta_influence must lie in [0, 1]");
  if (!in_unit(delta_persuasion)) throw InvalidParameter("delta_persuasion must lie in [0, 1]");
  if (!in_unit(epsilon_similarity)) throw InvalidParameter("epsilon_similarity must lie in [0, 1]");
  if (!in_unit(debunk_margin)) throw InvalidParameter("debunk_margin must lie in [0, 1]");
  if (t_active < 1) throw InvalidParameter("t_active must be >= 1");
}

ThresholdDistribution ThresholdDistribution::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  ThresholdDistribution d;
  d.name = std::string(parts[0]);
  if (d.name == "constant") {
    if (parts.size() != 2) throw ConfigError("constant distribution takes one value");
    d.a = parse_double(parts[1], "constant distribution");
    d.b = d.a;
  } else if (d.name == "uniform" || d.name == "normal") {
    if (parts.size() == 1 && d.name == "uniform") return d;
    if (parts.size() != 3) throw ConfigError(d.name + " distribution takes two values");
    d.a = parse_double(parts[1], d.name + " distribution");
    d.b = parse_double(parts[2], d.name + " distribution");
  } else {
    throw ConfigError("unknown threshold distribution '" + d.name + "'");
  }
  return d;
}

std::string ThresholdDistribution::to_string() const {
  std::string out = name + ':' + format_double(a);
  if (name != "constant") out += ':' + format_double(b);
  return out;
}

}  // namespace rumor
