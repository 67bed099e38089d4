#include "qdepth/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace qdepth {

GraphFormatError::GraphFormatError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

Graph make_graph(int n_nodes, std::vector<Edge> edges) {
  if (n_nodes < 1) {
    throw std::invalid_argument(fmt::format("graph needs at least one node, got {}", n_nodes));
  }
  std::set<std::pair<int, int>> seen;
  for (Edge& e : edges) {
    if (e.u == e.v) {
      throw std::invalid_argument(fmt::format("self-loop on node {}", e.u));
    }
    if (e.u > e.v) {
      std::swap(e.u, e.v);
    }
    if (e.u < 0 || e.v >= n_nodes) {
      throw std::invalid_argument(
          fmt::format("edge ({}, {}) references a node outside [0, {})", e.u, e.v, n_nodes));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument(
          fmt::format("edge ({}, {}) has non-positive weight {}", e.u, e.v, e.weight));
    }
    if (!seen.emplace(e.u, e.v).second) {
      throw std::invalid_argument(fmt::format("duplicate edge ({}, {})", e.u, e.v));
    }
  }
  return Graph{n_nodes, std::move(edges)};
}

Graph random_graph(int n_nodes, int n_edges, std::pair<double, double> weight_range,
                   std::uint64_t seed) {
  if (n_nodes < 1) {
    throw std::invalid_argument("random_graph needs at least one node");
  }
  const long long max_edges = static_cast<long long>(n_nodes) * (n_nodes - 1) / 2;
  if (n_edges < 0 || n_edges > max_edges) {
    throw std::invalid_argument(fmt::format(
        "cannot place {} edges on {} nodes (max is {})", n_edges, n_nodes, max_edges));
  }
  const auto [lo, hi] = weight_range;
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument(fmt::format("invalid weight range [{}, {}]", lo, hi));
  }

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(max_edges));
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = i + 1; j < n_nodes; ++j) {
      pairs.emplace_back(i, j);
    }
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(static_cast<std::size_t>(n_edges));
  std::sort(pairs.begin(), pairs.end());

  std::uniform_real_distribution<double> weight(lo, hi);
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    edges.push_back({i, j, lo == hi ? lo : weight(rng)});
  }
  return make_graph(n_nodes, std::move(edges));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    const auto end = line.find_first_of(" \t", start);
    out.push_back(line.substr(start, end == std::string_view::npos ? end : end - start));
    pos = end == std::string_view::npos ? line.size() : end;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, int line, const char* what) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw GraphFormatError(line, fmt::format("malformed {} '{}'", what, field));
  }
  return value;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  int n_nodes = -1;
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto fields = split_fields(line);
    if (n_nodes < 0) {
      if (fields.size() != 1) {
        throw GraphFormatError(line_no, "expected the node count");
      }
      n_nodes = parse_number<int>(fields[0], line_no, "node count");
      if (n_nodes < 1) {
        throw GraphFormatError(line_no, "node count must be positive");
      }
      continue;
    }
    if (fields.size() != 3) {
      throw GraphFormatError(line_no, "expected 'i j weight'");
    }
    Edge e{parse_number<int>(fields[0], line_no, "node index"),
           parse_number<int>(fields[1], line_no, "node index"),
           parse_number<double>(fields[2], line_no, "weight")};
    if (e.u == e.v) {
      throw GraphFormatError(line_no, fmt::format("self-loop on node {}", e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n_nodes) {
      throw GraphFormatError(line_no, fmt::format("edge ({}, {}) references a node outside [0, {})",
                                                  e.u, e.v, n_nodes));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw GraphFormatError(line_no, fmt::format("non-positive weight {}", e.weight));
    }
    if (!seen.emplace(e.u, e.v).second) {
      throw GraphFormatError(line_no, fmt::format("duplicate edge ({}, {})", e.u, e.v));
    }
    edges.push_back(e);
  }
  if (n_nodes < 0) {
    throw GraphFormatError(0, "missing node count");
  }
  return make_graph(n_nodes, std::move(edges));
}

std::string serialize_graph(const Graph& graph, std::string_view header_comment) {
  std::string out;
  if (!header_comment.empty()) {
    out += fmt::format("# {}\n", header_comment);
  }
  out += fmt::format("{}\n", graph.n_nodes);
  for (const Edge& e : graph.edges) {
    out += fmt::format("{} {} {:.17g}\n", e.u, e.v, e.weight);
  }
  return out;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(fmt::format("cannot open graph file '{}'", path));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

void save_graph(const std::string& path, const Graph& graph, std::string_view header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error(fmt::format("cannot write graph file '{}'", path));
  }
  out << serialize_graph(graph, header_comment);
}

}  // namespace qdepth
