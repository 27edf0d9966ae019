#include "io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"

namespace gcmp {

namespace {

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> to_number(const std::string& s) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = first + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(x)) return std::nullopt;
  return x;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

Graph parse_edge_list(std::istream& in, const std::string& source) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  auto node = [&](const std::string& token) {
    const auto [it, inserted] = index.emplace(token, labels.size());
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != 2)
      throw InputError(at_line(source, lineno) + "expected two node tokens, found " + std::to_string(tokens.size()));
    if (tokens[0] == tokens[1]) throw InputError(at_line(source, lineno) + "self-loop on node " + tokens[0]);
    const std::size_t i = node(tokens[0]);
    const std::size_t j = node(tokens[1]);
    edges.emplace_back(i, j);
  }
  if (labels.size() < 2) throw InputError(source + ": edge list defines fewer than 2 nodes");
  const std::size_t n = labels.size();
  std::vector<std::uint8_t> adj(n * n, 0);
  for (const auto& [i, j] : edges) adj[i * n + j] = adj[j * n + i] = 1;
  return Graph(n, std::move(adj), std::move(labels));
}

Graph parse_edge_list(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_edge_list(in, path.string());
}

Graph parse_adjacency(std::istream& in, std::optional<double> threshold, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::optional<std::vector<std::string>> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      const auto x = to_number(f);
      if (!x) {
        numeric = false;
        break;
      }
      row.push_back(*x);
    }
    if (!numeric) {
      if (rows.empty() && !labels) {
        labels = fields;
        continue;
      }
      throw InputError(at_line(source, lineno) + "non-numeric entry");
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n < 2) throw InputError(source + ": adjacency matrix needs at least 2 rows");
  for (std::size_t i = 0; i < n; ++i)
    if (rows[i].size() != n)
      throw InputError(source + ": matrix is not square (row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n) + ")");
  if (labels && labels->size() != n)
    throw InputError(source + ": header has " + std::to_string(labels->size()) + " labels for " +
                     std::to_string(n) + " columns");

  std::vector<std::uint8_t> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = rows[i][j];
      if (std::abs(x - rows[j][i]) > 1e-9)
        throw InputError(source + ": matrix is not symmetric at (" + std::to_string(i + 1) + ", " +
                         std::to_string(j + 1) + ")");
      bool e;
      if (threshold) {
        e = x > *threshold;
      } else {
        if (x != 0.0 && x != 1.0)
          throw InputError(source + ": entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                           ") is not 0/1; pass a threshold for weighted input");
        e = x == 1.0;
      }
      adj[i * n + j] = adj[j * n + i] = e ? 1 : 0;
    }
  return Graph(n, std::move(adj), std::move(labels));
}

Graph parse_adjacency(const std::filesystem::path& path, std::optional<double> threshold) {
  auto in = open_in(path);
  return parse_adjacency(in, threshold, path.string());
}

GraphFormat parse_format(const std::string& name) {
  if (name == "edges") return GraphFormat::EdgeList;
  if (name == "adjacency") return GraphFormat::Adjacency;
  throw ConfigError("unknown graph format '" + name + "' (expected edges or adjacency)");
}

Graph load_graph(const std::filesystem::path& path, GraphFormat format, std::optional<double> threshold) {
  if (format == GraphFormat::Adjacency) return parse_adjacency(path, threshold);
  if (threshold) throw ConfigError("a threshold only applies to adjacency input");
  return parse_edge_list(path);
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  const std::size_t n = graph.size();
  out << "# " << n << " nodes, " << graph.edge_count() << " edges\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (graph.edge(i, j)) out << graph.label(i) << ' ' << graph.label(j) << '\n';
}

void write_adjacency(std::ostream& out, const Graph& graph) {
  const std::size_t n = graph.size();
  // An all-numeric header would read back as a data row.
  bool header = false;
  if (graph.labels())
    for (const auto& l : *graph.labels()) header = header || !to_number(l);
  if (header) {
    for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << graph.label(i);
    out << '\n';
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = graph.row(i);
    for (std::size_t j = 0; j < n; ++j) out << (j ? "," : "") << static_cast<int>(row[j]);
    out << '\n';
  }
}

void write_graph(const std::filesystem::path& path, const Graph& graph, GraphFormat format) {
  auto out = open_out(path);
  if (format == GraphFormat::Adjacency) write_adjacency(out, graph);
  else write_edge_list(out, graph);
  finish(out, path);
}

void write_positions_csv(const std::filesystem::path& path, const Graph& graph,
                         const std::vector<double>& positions) {
  if (positions.size() != graph.size()) throw UsageError("positions do not match graph size");
  auto out = open_out(path);
  out << "node,label,u\n";
  for (std::size_t i = 0; i < positions.size(); ++i)
    out << i << ',' << graph.label(i) << ',' << format_double(positions[i]) << '\n';
  finish(out, path);
}

void write_graphon_grid_csv(const std::filesystem::path& path, const Graphon& graphon, std::size_t m) {
  if (m < 2) throw UsageError("grid needs at least 2 points per axis");
  auto out = open_out(path);
  out << "u,v,w\n";
  const double step = 1.0 / static_cast<double>(m - 1);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double u = a == m - 1 ? 1.0 : a * step;
      const double v = b == m - 1 ? 1.0 : b * step;
      out << format_double(u) << ',' << format_double(v) << ',' << format_double(graphon_eval(graphon, u, v))
          << '\n';
    }
  finish(out, path);
}

void write_cells_csv(const std::filesystem::path& path, const TestReport& report) {
  auto out = open_out(path);
  out << "k,l,d1,d2,m1,m2,E1,V1,contrib,used\n";
  for (const CellTerm& c : report.contributions)
    out << c.counts.k << ',' << c.counts.l << ',' << c.counts.d1 << ',' << c.counts.d2 << ',' << c.counts.m1
        << ',' << c.counts.m2 << ',' << format_double(c.E1) << ',' << format_double(c.V1) << ','
        << format_double(c.contribution) << ',' << (c.used ? 1 : 0) << '\n';
  finish(out, path);
}

void write_diff_grid_csv(const std::filesystem::path& path, const DiffSurface& surface, std::size_t m) {
  if (m < 2) throw UsageError("grid needs at least 2 points per axis");
  auto out = open_out(path);
  out << "u,v,diff_ab,diff_ba\n";
  const double step = 1.0 / static_cast<double>(m - 1);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double u = a == m - 1 ? 1.0 : a * step;
      const double v = b == m - 1 ? 1.0 : b * step;
      out << format_double(u) << ',' << format_double(v) << ',' << format_double(surface(0, u, v)) << ','
          << format_double(surface(1, u, v)) << '\n';
    }
  finish(out, path);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  finish(out, path);
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gcmp
