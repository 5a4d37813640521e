#include "rumor/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rumor/error.hpp"
#include "rumor/format.hpp"

namespace rumor {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void gexf_open(std::ostream& os, bool with_attributes) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<gexf xmlns=\"http://gexf.net/1.2\" version=\"1.2\">\n"
     << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n";
  if (with_attributes) {
    os << "    <attributes class=\"node\">\n"
       << "      <attribute id=\"0\" title=\"color\" type=\"string\"/>\n"
       << "      <attribute id=\"1\" title=\"threshold\" type=\"double\"/>\n"
       << "      <attribute id=\"2\" title=\"original_id\" type=\"integer\"/>\n"
       << "    </attributes>\n";
  }
}

void gexf_edges_and_close(std::ostream& os, const Graph& g) {
  os << "    <edges>\n";
  std::size_t id = 0;
  for (const auto& [i, j] : g.edges()) {
    os << "      <edge id=\"" << id++ << "\" source=\"" << i << "\" target=\"" << j << "\"/>\n";
  }
  os << "    </edges>\n  </graph>\n</gexf>\n";
}

template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

void write_edge_list(std::ostream& os, const Graph& g) {
  for (const auto& [i, j] : g.edges()) os << i << ' ' << j << '\n';
}

Graph read_edge_list(std::istream& is, std::optional<std::size_t> n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t max_id = 0;
  bool any = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long a = -1;
    long long b = -1;
    std::string rest;
    if (!(ls >> a >> b) || (ls >> rest) || a < 0 || b < 0 || a > 0xFFFFFFFELL || b > 0xFFFFFFFELL) {
      throw ConfigError("edge list line " + std::to_string(lineno) + ": expected two node ids");
    }
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    max_id = std::max<std::size_t>(max_id, static_cast<std::size_t>(std::max(a, b)));
    any = true;
  }
  const std::size_t count = n ? *n : (any ? max_id + 1 : 0);
  try {
    return Graph(count, edges);
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("edge list: ") + e.what());
  }
}

void write_gexf(std::ostream& os, const Graph& g) {
  gexf_open(os, false);
  os << "    <nodes>\n";
  for (NodeId i = 0; i < g.node_count(); ++i) os << "      <node id=\"" << i << "\"/>\n";
  os << "    </nodes>\n";
  gexf_edges_and_close(os, g);
}

void write_gexf(std::ostream& os, const EchoSubgraph& sub) {
  gexf_open(os, true);
  os << "    <nodes>\n";
  for (NodeId i = 0; i < sub.graph.node_count(); ++i) {
    const char* color = sub.labels[i] == kDebunkerLabel ? "debunker" : "spreader";
    os << "      <node id=\"" << i << "\" label=\"" << sub.original_ids[i] << "\">\n"
       << "        <attvalues>\n"
       << "          <attvalue for=\"0\" value=\"" << xml_escape(color) << "\"/>\n"
       << "          <attvalue for=\"1\" value=\"" << format_double(sub.thresholds[i]) << "\"/>\n"
       << "          <attvalue for=\"2\" value=\"" << sub.original_ids[i] << "\"/>\n"
       << "        </attvalues>\n"
       << "      </node>\n";
  }
  os << "    </nodes>\n";
  gexf_edges_and_close(os, sub.graph);
}

void write_degree_histogram_csv(std::ostream& os, const DegreeHistogram& h) {
  os << "k,count\n";
  for (const auto& [k, c] : h.entries) os << k << ',' << c << '\n';
}

Json to_json(const PowerLawFit& fit) {
  return Json{{"gamma", fit.gamma},         {"gamma_stat_err", fit.gamma_stat_err},
              {"k_min", fit.k_min},         {"min_count", fit.min_count},
              {"r_squared", fit.r_squared},
              {"n_points", fit.n_points}};
}

Json to_json(const ModelParams& p) {
  return Json{{"influence_fraction", p.influence_fraction},
              {"hub_degree_quantile", p.hub_degree_quantile},
              {"delta_influence", p.delta_influence},
              {"delta_persuasion", p.delta_persuasion},
              {"epsilon_similarity", p.epsilon_similarity},
              {"t_active", p.t_active},
              {"debunk_margin", p.debunk_margin},
              {"debunking_enabled", p.debunking_enabled}};
}

ModelParams params_from_json(const Json& j) {
  ModelParams p;
  p.influence_fraction = get_field<double>(j, "influence_fraction");
  p.hub_degree_quantile = get_field<double>(j, "hub_degree_quantile");
  p.delta_influence = get_field<double>(j, "delta_influence");
  p.delta_persuasion = get_field<double>(j, "delta_persuasion");
  p.epsilon_similarity = get_field<double>(j, "epsilon_similarity");
  p.t_active = get_field<int>(j, "t_active");
  p.debunk_margin = get_field<double>(j, "debunk_margin");
  p.debunking_enabled = get_field<bool>(j, "debunking_enabled");
  return p;
}

Json to_json(const NewsSchedule& s) {
  Json out = Json::array();
  for (const auto& seg : s.segments()) {
    out.push_back({{"start_cycle", seg.start_cycle},
                   {"reliability", seg.reliability},
                   {"visualization", seg.visualization}});
  }
  return out;
}

NewsSchedule schedule_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("schedule must be an array");
  std::vector<ScheduleSegment> segs;
  for (const auto& e : j) {
    segs.push_back({get_field<int>(e, "start_cycle"), get_field<double>(e, "reliability"),
                    get_field<double>(e, "visualization")});
  }
  try {
    return NewsSchedule(std::move(segs));
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
  os << "cycle";
  for (auto c : kAllColors) os << ",n_" << color_name(c);
  os << ",r,v,cum_spreaders,cum_debunkers\n";
  for (const auto& rec : trace.cycles) {
    os << rec.cycle;
    for (auto n : rec.counts) os << ',' << n;
    os << ',' << format_double(rec.reliability) << ',' << format_double(rec.visualization) << ','
       << rec.cum_spreaders << ',' << rec.cum_debunkers << '\n';
  }
}

void write_snapshot_csv(std::ostream& os, const SimulationTrace& trace, const Graph& g) {
  if (trace.final_agents.size() != g.node_count()) {
    throw InvalidParameter("snapshot does not match the graph");
  }
  os << "agent_id,degree,threshold_initial,threshold_final,color,activated_at,last_active\n";
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto& a = trace.final_agents[i];
    os << i << ',' << g.degree(i) << ',' << format_double(a.threshold_initial) << ','
       << format_double(a.threshold) << ',' << color_name(a.color) << ',';
    if (a.activated_at) os << *a.activated_at;
    os << ',' << color_name(a.last_active) << '\n';
  }
}

Json to_json(const SimulationTrace& trace) {
  Json cycles = Json::array();
  for (const auto& rec : trace.cycles) {
    Json counts = Json::object();
    for (auto c : kAllColors) counts[std::string(color_name(c))] = rec.count(c);
    cycles.push_back({{"cycle", rec.cycle},
                      {"counts", counts},
                      {"r", rec.reliability},
                      {"v", rec.visualization},
                      {"cum_spreaders", rec.cum_spreaders},
                      {"cum_debunkers", rec.cum_debunkers}});
  }
  // Columnar so large populations stay compact.
  Json th0 = Json::array(), th = Json::array(), color = Json::array(), last = Json::array(),
       at = Json::array();
  for (const auto& a : trace.final_agents) {
    th0.push_back(a.threshold_initial);
    th.push_back(a.threshold);
    color.push_back(color_name(a.color));
    last.push_back(color_name(a.last_active));
    if (a.activated_at) {
      at.push_back(*a.activated_at);
    } else {
      at.push_back(nullptr);
    }
  }
  return Json{{"seed", trace.seed},
              {"node_count", trace.node_count()},
              {"params", to_json(trace.params)},
              {"schedule", to_json(trace.schedule)},
              {"cycles", cycles},
              {"final",
               {{"threshold_initial", th0},
                {"threshold", th},
                {"color", color},
                {"last_active", last},
                {"activated_at", at}}}};
}

SimulationTrace trace_from_json(const Json& j) {
  SimulationTrace t;
  t.seed = get_field<std::uint64_t>(j, "seed");
  t.params = params_from_json(get_field<Json>(j, "params"));
  t.schedule = schedule_from_json(get_field<Json>(j, "schedule"));
  for (const auto& c : get_field<Json>(j, "cycles")) {
    CycleRecord rec;
    rec.cycle = get_field<int>(c, "cycle");
    const Json counts = get_field<Json>(c, "counts");
    for (auto color : kAllColors) {
      rec.counts[static_cast<std::size_t>(color)] =
          get_field<std::size_t>(counts, std::string(color_name(color)).c_str());
    }
    rec.reliability = get_field<double>(c, "r");
    rec.visualization = get_field<double>(c, "v");
    rec.cum_spreaders = get_field<std::size_t>(c, "cum_spreaders");
    rec.cum_debunkers = get_field<std::size_t>(c, "cum_debunkers");
    t.cycles.push_back(rec);
  }
  const Json f = get_field<Json>(j, "final");
  const auto th0 = get_field<std::vector<double>>(f, "threshold_initial");
  const auto th = get_field<std::vector<double>>(f, "threshold");
  const auto color = get_field<std::vector<std::string>>(f, "color");
  const auto last = get_field<std::vector<std::string>>(f, "last_active");
  const Json at = get_field<Json>(f, "activated_at");
  const std::size_t n = get_field<std::size_t>(j, "node_count");
  if (th0.size() != n || th.size() != n || color.size() != n || last.size() != n || at.size() != n) {
    throw ConfigError("final snapshot columns do not match node_count");
  }
  t.final_agents.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& a = t.final_agents[i];
    a.threshold_initial = th0[i];
    a.threshold = th[i];
    a.color = parse_color(color[i]);
    a.last_active = parse_color(last[i]);
    if (!at[i].is_null()) a.activated_at = at[i].get<int>();
  }
  return t;
}

void write_sir_csv(std::ostream& os, const SirTrace& trace) {
  os << "cycle,n_I,n_S,n_R\n";
  for (const auto& rec : trace.cycles) {
    os << rec.cycle << ',' << rec.counts.ignorant << ',' << rec.counts.spreaders << ','
       << rec.counts.stiflers << '\n';
  }
}

Json to_json(const SirParams& p) {
  return Json{{"alpha", p.alpha},
              {"lambda", p.lambda},
              {"n_initial_spreaders", p.n_initial_spreaders}};
}

SirParams sir_params_from_json(const Json& j) {
  SirParams p;
  p.alpha = get_field<double>(j, "alpha");
  p.lambda = get_field<double>(j, "lambda");
  p.n_initial_spreaders = get_field<std::size_t>(j, "n_initial_spreaders");
  return p;
}

void write_series_csv(std::ostream& os, const AveragedSeries& s, const std::string& x_name) {
  os << x_name << ",mean,stderr\n";
  for (std::size_t t = 0; t < s.size(); ++t) {
    os << t << ',' << format_double(s.mean[t]) << ',' << format_double(s.stderr_[t]) << '\n';
  }
}

void write_degree_density_csv(std::ostream& os, const DegreeClassDensity& d) {
  os << "k,mean,stderr,n_occurrences\n";
  for (const auto& c : d.classes) {
    os << c.k << ',' << format_double(c.mean) << ',' << format_double(c.stderr_) << ','
       << c.n_occurrences << '\n';
  }
}

void write_threshold_histogram_csv(std::ostream& os, const ThresholdHistogram& h) {
  os << "bin_low,bin_high,frequency\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    os << format_double(h.edges[i]) << ',' << format_double(h.edges[i + 1]) << ','
       << format_double(h.frequency[i]) << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error("failed to write '" + path.string() + "'");
}

}  // namespace rumor
