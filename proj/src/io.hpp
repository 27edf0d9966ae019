#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "microdiff.hpp"
#include "twosample.hpp"

namespace gcmp {

// Edge list: one whitespace-separated pair of node tokens per line, '#'
// starts a comment. Nodes are indexed by first appearance and keep their
// tokens as labels; repeated edges in either orientation collapse to one.
Graph parse_edge_list(std::istream& in, const std::string& source = "<stream>");
Graph parse_edge_list(const std::filesystem::path& path);

// Square numeric CSV with an optional header row of labels. Without a
// threshold every off-diagonal entry must be 0 or 1; with one, entries
// strictly above it become edges. The diagonal is ignored.
Graph parse_adjacency(std::istream& in, std::optional<double> threshold,
                      const std::string& source = "<stream>");
Graph parse_adjacency(const std::filesystem::path& path, std::optional<double> threshold);

enum class GraphFormat { EdgeList, Adjacency };
GraphFormat parse_format(const std::string& name);
Graph load_graph(const std::filesystem::path& path, GraphFormat format, std::optional<double> threshold);

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

void write_edge_list(std::ostream& out, const Graph& graph);
void write_adjacency(std::ostream& out, const Graph& graph);
void write_graph(const std::filesystem::path& path, const Graph& graph, GraphFormat format);

// node,label,u
void write_positions_csv(const std::filesystem::path& path, const Graph& graph,
                         const std::vector<double>& positions);
// u,v,w on an m x m grid of [0, 1]^2 including both endpoints.
void write_graphon_grid_csv(const std::filesystem::path& path, const Graphon& graphon, std::size_t m = 101);
// k,l,d1,d2,m1,m2,E1,V1,contrib,used
void write_cells_csv(const std::filesystem::path& path, const TestReport& report);
// u,v,diff_ab,diff_ba
void write_diff_grid_csv(const std::filesystem::path& path, const DiffSurface& surface, std::size_t m = 101);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gcmp
