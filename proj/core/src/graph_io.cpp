#include "interlace/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace interlace {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::uint64_t parse_index(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw GraphError(GraphErrc::MalformedLine,
                     "line " + std::to_string(line) + ": expected a vertex index, got '" +
                         std::string(token) + "'",
                     line);
  }
  return value;
}

double parse_real(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw GraphError(GraphErrc::MalformedLine,
                     "line " + std::to_string(line) + ": expected a number, got '" +
                         std::string(token) + "'",
                     line);
  }
  return value;
}

}  // namespace

Window load_graph(std::string_view text) {
  std::optional<std::uint64_t> vertex_count;
  std::vector<Edge> edges;
  std::vector<VertexId> boundary;
  std::vector<double> returns;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_tokens(line);
    if (tok.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    const std::string_view directive = tok[0];
    auto check_vertex = [&](std::uint64_t v) {
      if (v >= *vertex_count) {
        throw GraphError(GraphErrc::VertexOutOfRange,
                         "line " + std::to_string(line_no) + ": vertex " + std::to_string(v) +
                             " out of range",
                         line_no);
      }
      return static_cast<VertexId>(v);
    };

    if (directive == "vertices") {
      if (vertex_count) {
        throw GraphError(GraphErrc::MalformedLine,
                         "line " + std::to_string(line_no) + ": duplicate 'vertices' header", line_no);
      }
      if (tok.size() != 2) {
        throw GraphError(GraphErrc::MalformedLine,
                         "line " + std::to_string(line_no) + ": expected 'vertices N'", line_no);
      }
      vertex_count = parse_index(tok[1], line_no);
      if (*vertex_count == 0 || *vertex_count > std::numeric_limits<VertexId>::max()) {
        throw GraphError(GraphErrc::MalformedLine,
                         "line " + std::to_string(line_no) + ": invalid vertex count", line_no);
      }
    } else if (directive == "edge" || directive == "boundary") {
      if (!vertex_count) {
        throw GraphError(GraphErrc::MissingHeader,
                         "line " + std::to_string(line_no) + ": 'vertices N' must come first", line_no);
      }
      if (directive == "edge") {
        if (tok.size() != 4) {
          throw GraphError(GraphErrc::MalformedLine,
                           "line " + std::to_string(line_no) + ": expected 'edge i j w'", line_no);
        }
        const VertexId i = check_vertex(parse_index(tok[1], line_no));
        const VertexId j = check_vertex(parse_index(tok[2], line_no));
        const double w = parse_real(tok[3], line_no);
        if (i == j) {
          throw GraphError(GraphErrc::SelfLoop,
                           "line " + std::to_string(line_no) + ": self-loop", line_no);
        }
        if (!std::isfinite(w) || w <= 0.0) {
          throw GraphError(GraphErrc::NonpositiveWeight,
                           "line " + std::to_string(line_no) + ": weight must be positive", line_no);
        }
        edges.push_back({i, j, w});
      } else {
        if (tok.size() != 2 && tok.size() != 3) {
          throw GraphError(GraphErrc::MalformedLine,
                           "line " + std::to_string(line_no) + ": expected 'boundary i [p]'", line_no);
        }
        boundary.push_back(check_vertex(parse_index(tok[1], line_no)));
        const double p = tok.size() == 3 ? parse_real(tok[2], line_no) : 0.0;
        if (!(p >= 0.0 && p < 1.0)) {
          throw GraphError(GraphErrc::InvalidBoundary,
                           "line " + std::to_string(line_no) + ": return probability outside [0, 1)",
                           line_no);
        }
        returns.push_back(p);
      }
    } else {
      throw GraphError(GraphErrc::UnknownDirective,
                       "line " + std::to_string(line_no) + ": unknown directive '" +
                           std::string(directive) + "'",
                       line_no);
    }
    if (eol == text.size()) break;
  }

  if (!vertex_count) throw GraphError(GraphErrc::MissingHeader, "missing 'vertices N' header");
  return Window(WeightedGraph::from_edges(*vertex_count, edges), std::move(boundary),
                std::move(returns), "file");
}

Window load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError(GraphErrc::InvalidArgument, "cannot open graph file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_graph(buffer.str());
}

std::string format_graph(const Window& window) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "vertices " << window.size() << '\n';
  for (const Edge& e : window.graph().edges()) {
    out << "edge " << e.from << ' ' << e.to << ' ' << e.weight << '\n';
  }
  for (VertexId b : window.boundary()) {
    out << "boundary " << b;
    if (window.continuation(b) > 0.0) out << ' ' << window.continuation(b);
    out << '\n';
  }
  return out.str();
}

}  // namespace interlace
