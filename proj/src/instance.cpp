#include "qroute/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "qroute/error.hpp"
#include "text.hpp"

namespace qroute {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MissingSection: return "missing section";
    case ParseErrorKind::UnsupportedEdgeWeight: return "unsupported edge weight type";
    case ParseErrorKind::DuplicateNode: return "duplicate node";
    case ParseErrorKind::DemandExceedsCapacity: return "demand exceeds capacity";
    case ParseErrorKind::Malformed: return "malformed input";
  }
  return "unknown";
}

namespace {

std::string format_parse_error(ParseErrorKind kind, std::size_t line, const std::string& what) {
  std::string out = to_string(kind);
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": " + what;
  return out;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& what)
    : InvalidInput(format_parse_error(kind, line, what)), kind_(kind), line_(line) {}

const char* to_string(ProblemKind kind) {
  return kind == ProblemKind::Cvrp ? "CVRP" : "TSP";
}

const char* to_string(EdgeWeightKind kind) {
  return kind == EdgeWeightKind::Geo ? "GEO" : "EUC_2D";
}

int ProblemInstance::demand(int id) const {
  if (demands.empty()) return 0;
  return demands.at(static_cast<std::size_t>(id - 1));
}

std::vector<int> ProblemInstance::customers() const {
  std::vector<int> out;
  out.reserve(nodes.size());
  for (const Node& n : nodes) {
    if (kind == ProblemKind::Tsp || n.id != depot_id) out.push_back(n.id);
  }
  return out;
}

int ProblemInstance::total_demand() const {
  return std::accumulate(demands.begin(), demands.end(), 0);
}

namespace {

enum class Section { Header, Coords, Demands, Depots, Ignored };

struct Line {
  std::size_t number;
  std::string_view text;
};

[[noreturn]] void fail(ParseErrorKind kind, std::size_t line, const std::string& what) {
  throw ParseError(kind, line, what);
}

long long to_integer(std::string_view token, std::size_t line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail(ParseErrorKind::Malformed, line, "expected an integer, got '" + std::string(token) + "'");
  return value;
}

double to_real(std::string_view token, std::size_t line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail(ParseErrorKind::Malformed, line, "expected a number, got '" + std::string(token) + "'");
  return value;
}

bool is_section_keyword(std::string_view word) {
  return word.size() > 8 && word.substr(word.size() - 8) == "_SECTION";
}

std::optional<int> vehicles_from_name(const std::string& name) {
  static const std::regex pattern(R"(-k(\d+))");
  std::smatch m;
  if (std::regex_search(name, m, pattern)) return std::stoi(m[1].str());
  return std::nullopt;
}

}  // namespace

ProblemInstance parse_instance(std::string_view text) {
  ProblemInstance inst;
  std::optional<std::string> type;
  std::optional<std::size_t> dimension;
  std::optional<std::size_t> dimension_line;
  bool have_edge_weight = false;
  bool have_capacity = false;
  bool have_coords = false;
  bool have_demands = false;
  bool have_depots = false;
  bool depot_terminated = false;

  std::vector<std::pair<Node, std::size_t>> coords;
  std::vector<std::pair<std::pair<int, long long>, std::size_t>> demand_entries;
  std::vector<std::pair<int, std::size_t>> depots;

  Section section = Section::Header;
  std::size_t line_no = 0;
  for (std::string_view raw : text::split_lines(text)) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    if (line.empty()) continue;

    const auto tokens = text::split_ws(line);
    const std::string_view head = tokens.front();

    if (head == "EOF") break;

    // Header entries look like "KEY : VALUE" or "KEY: VALUE".
    const auto colon = line.find(':');
    if (colon != std::string_view::npos && !is_section_keyword(head)) {
      const std::string key(text::trim(line.substr(0, colon)));
      const std::string value(text::trim(line.substr(colon + 1)));
      section = Section::Header;
      if (key == "NAME") {
        inst.name = value;
      } else if (key == "COMMENT") {
        inst.comment = value;
      } else if (key == "TYPE") {
        type = value;
      } else if (key == "DIMENSION") {
        dimension = static_cast<std::size_t>(to_integer(value, line_no));
        dimension_line = line_no;
      } else if (key == "CAPACITY") {
        const long long cap = to_integer(value, line_no);
        if (cap <= 0) fail(ParseErrorKind::Malformed, line_no, "CAPACITY must be positive");
        inst.capacity = static_cast<int>(cap);
        have_capacity = true;
      } else if (key == "EDGE_WEIGHT_TYPE") {
        if (value == "EUC_2D") {
          inst.edge_weight_kind = EdgeWeightKind::Euc2d;
        } else if (value == "GEO") {
          inst.edge_weight_kind = EdgeWeightKind::Geo;
        } else {
          fail(ParseErrorKind::UnsupportedEdgeWeight, line_no,
               "EDGE_WEIGHT_TYPE " + value + " (supported: EUC_2D, GEO)");
        }
        have_edge_weight = true;
      }
      continue;
    }

    if (tokens.size() == 1 && is_section_keyword(head)) {
      if (head == "NODE_COORD_SECTION") {
        section = Section::Coords;
        have_coords = true;
      } else if (head == "DEMAND_SECTION") {
        section = Section::Demands;
        have_demands = true;
      } else if (head == "DEPOT_SECTION") {
        section = Section::Depots;
        have_depots = true;
      } else {
        section = Section::Ignored;
      }
      continue;
    }

    switch (section) {
      case Section::Header:
        fail(ParseErrorKind::Malformed, line_no, "unexpected line '" + std::string(line) + "'");
      case Section::Ignored:
        break;
      case Section::Coords: {
        if (tokens.size() != 3)
          fail(ParseErrorKind::Malformed, line_no, "coordinate line needs 'id x y'");
        Node n;
        n.id = static_cast<int>(to_integer(tokens[0], line_no));
        n.x = to_real(tokens[1], line_no);
        n.y = to_real(tokens[2], line_no);
        coords.emplace_back(n, line_no);
        break;
      }
      case Section::Demands: {
        if (tokens.size() != 2) fail(ParseErrorKind::Malformed, line_no, "demand line needs 'id demand'");
        demand_entries.push_back({{static_cast<int>(to_integer(tokens[0], line_no)),
                                   to_integer(tokens[1], line_no)},
                                  line_no});
        break;
      }
      case Section::Depots: {
        for (std::string_view tok : tokens) {
          const long long v = to_integer(tok, line_no);
          if (v == -1) {
            depot_terminated = true;
            section = Section::Ignored;
            break;
          }
          depots.emplace_back(static_cast<int>(v), line_no);
        }
        break;
      }
    }
  }

  if (!have_coords) fail(ParseErrorKind::MissingSection, 0, "NODE_COORD_SECTION");
  if (!have_edge_weight) fail(ParseErrorKind::MissingSection, 0, "EDGE_WEIGHT_TYPE");

  if (type) {
    if (*type == "TSP") {
      inst.kind = ProblemKind::Tsp;
    } else if (*type == "CVRP") {
      inst.kind = ProblemKind::Cvrp;
    } else {
      fail(ParseErrorKind::Malformed, 0, "unsupported TYPE " + *type);
    }
  } else {
    inst.kind = have_demands ? ProblemKind::Cvrp : ProblemKind::Tsp;
  }

  // Nodes: unique ids, contiguous from 1.
  std::vector<std::size_t> coord_line;
  {
    std::set<int> seen;
    for (const auto& [n, ln] : coords) {
      if (!seen.insert(n.id).second)
        fail(ParseErrorKind::DuplicateNode, ln, "node " + std::to_string(n.id) + " listed twice");
    }
    std::sort(coords.begin(), coords.end(),
              [](const auto& a, const auto& b) { return a.first.id < b.first.id; });
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i].first.id != static_cast<int>(i + 1))
        fail(ParseErrorKind::Malformed, coords[i].second,
             "node ids must be contiguous from 1 (found " + std::to_string(coords[i].first.id) + ")");
      inst.nodes.push_back(coords[i].first);
    }
  }
  if (inst.nodes.empty()) fail(ParseErrorKind::Malformed, 0, "NODE_COORD_SECTION is empty");
  if (dimension && *dimension != inst.nodes.size())
    fail(ParseErrorKind::Malformed, *dimension_line,
         "DIMENSION " + std::to_string(*dimension) + " but " + std::to_string(inst.nodes.size()) +
             " coordinates");

  if (inst.kind == ProblemKind::Cvrp) {
    if (!have_capacity) fail(ParseErrorKind::MissingSection, 0, "CAPACITY");
    if (!have_demands) fail(ParseErrorKind::MissingSection, 0, "DEMAND_SECTION");
    if (!have_depots) fail(ParseErrorKind::MissingSection, 0, "DEPOT_SECTION");
    if (depots.empty()) fail(ParseErrorKind::Malformed, 0, "DEPOT_SECTION lists no depot");
    if (depots.size() > 1) fail(ParseErrorKind::Malformed, depots[1].second, "only a single depot is supported");
    if (!depot_terminated) fail(ParseErrorKind::Malformed, depots.back().second, "DEPOT_SECTION must end with -1");
    inst.depot_id = depots.front().first;
    if (inst.depot_id < 1 || inst.depot_id > static_cast<int>(inst.nodes.size()))
      fail(ParseErrorKind::Malformed, depots.front().second,
           "depot " + std::to_string(inst.depot_id) + " is not a node");

    inst.demands.assign(inst.nodes.size(), -1);
    for (const auto& [entry, ln] : demand_entries) {
      const auto [id, dem] = entry;
      if (id < 1 || id > static_cast<int>(inst.nodes.size()))
        fail(ParseErrorKind::Malformed, ln, "demand for unknown node " + std::to_string(id));
      auto& slot = inst.demands[static_cast<std::size_t>(id - 1)];
      if (slot != -1) fail(ParseErrorKind::DuplicateNode, ln, "demand for node " + std::to_string(id) + " listed twice");
      if (dem < 0) fail(ParseErrorKind::Malformed, ln, "negative demand");
      if (id != inst.depot_id && dem > inst.capacity)
        fail(ParseErrorKind::DemandExceedsCapacity, ln,
             "node " + std::to_string(id) + " demands " + std::to_string(dem) + " > capacity " +
                 std::to_string(inst.capacity));
      slot = static_cast<int>(dem);
    }
    for (std::size_t i = 0; i < inst.demands.size(); ++i) {
      if (inst.demands[i] == -1)
        fail(ParseErrorKind::MissingSection, 0, "DEMAND_SECTION has no entry for node " + std::to_string(i + 1));
    }
    if (inst.demand(inst.depot_id) != 0) fail(ParseErrorKind::Malformed, 0, "depot demand must be 0");
  } else {
    inst.depot_id = 1;
  }

  inst.min_vehicles = vehicles_from_name(inst.name);
  return inst;
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const ProblemInstance& inst) {
  std::string out;
  out += "NAME : " + inst.name + "\n";
  if (!inst.comment.empty()) out += "COMMENT : " + inst.comment + "\n";
  out += std::string("TYPE : ") + to_string(inst.kind) + "\n";
  out += "DIMENSION : " + std::to_string(inst.nodes.size()) + "\n";
  out += std::string("EDGE_WEIGHT_TYPE : ") + to_string(inst.edge_weight_kind) + "\n";
  if (inst.kind == ProblemKind::Cvrp) out += "CAPACITY : " + std::to_string(inst.capacity) + "\n";
  out += "NODE_COORD_SECTION\n";
  for (const Node& n : inst.nodes) {
    out += std::to_string(n.id) + " " + text::format_real(n.x) + " " + text::format_real(n.y) + "\n";
  }
  if (inst.kind == ProblemKind::Cvrp) {
    out += "DEMAND_SECTION\n";
    for (const Node& n : inst.nodes) out += std::to_string(n.id) + " " + std::to_string(inst.demand(n.id)) + "\n";
    out += "DEPOT_SECTION\n " + std::to_string(inst.depot_id) + "\n -1\n";
  }
  out += "EOF\n";
  return out;
}

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0) {}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<std::int64_t> entries)
    : n_(n), d_(std::move(entries)) {
  if (d_.size() != n * n) throw InvalidInput("distance matrix needs n*n entries");
}

void DistanceMatrix::set(std::size_t i, std::size_t j, std::int64_t value) {
  d_[i * n_ + j] = value;
  d_[j * n_ + i] = value;
}

std::int64_t DistanceMatrix::max() const {
  return d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end());
}

DistanceMatrix DistanceMatrix::restrict(std::span<const std::size_t> indices) const {
  DistanceMatrix out(indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = 0; b < indices.size(); ++b) out.d_[a * out.n_ + b] = (*this)(indices[a], indices[b]);
  return out;
}

std::int64_t euc_2d_distance(const Node& a, const Node& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return static_cast<std::int64_t>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

namespace {

// DDD.MM -> radians, with TSPLIB's truncated PI.
double geo_radians(double coord) {
  constexpr double pi = 3.141592;
  const double deg = std::trunc(coord);
  const double min = coord - deg;
  return pi * (deg + 5.0 * min / 3.0) / 180.0;
}

}  // namespace

std::int64_t geo_distance(const Node& a, const Node& b) {
  constexpr double rrr = 6378.388;
  const double lat_a = geo_radians(a.x), lon_a = geo_radians(a.y);
  const double lat_b = geo_radians(b.x), lon_b = geo_radians(b.y);
  const double q1 = std::cos(lon_a - lon_b);
  const double q2 = std::cos(lat_a - lat_b);
  const double q3 = std::cos(lat_a + lat_b);
  const double arg = std::clamp(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3), -1.0, 1.0);
  return static_cast<std::int64_t>(rrr * std::acos(arg) + 1.0);
}

DistanceMatrix distance_matrix(const ProblemInstance& inst) {
  const std::size_t n = inst.nodes.size();
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Node& a = inst.nodes[i];
      const Node& b = inst.nodes[j];
      d.set(i, j, inst.edge_weight_kind == EdgeWeightKind::Geo ? geo_distance(a, b) : euc_2d_distance(a, b));
    }
  }
  return d;
}

}  // namespace qroute
