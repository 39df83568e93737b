#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pg/graph.hpp"

namespace pg {

struct GraphClass {
  bool connected = false;
  bool wheel_free = false;
  bool simply_connected = false;
  bool unital_tree = false;
  bool linear = false;
  bool nonempty_inputs = false;
  bool nonempty_outputs = false;
  bool special = false;
  bool ordinary = false;
};

GraphClass classify(const Graph& g);
// Flat key=value lines in a fixed order.
std::string format_class(const GraphClass& c);

bool is_connected(const Graph& g);
bool is_wheel_free(const Graph& g);
bool is_simply_connected(const Graph& g);

// Edges are indices into g.edges(); vertices has one more entry than edges.
struct Path {
  std::vector<int> edges;
  std::vector<int> vertices;
  bool operator==(const Path&) const = default;
};

struct CyclesAndWheels {
  std::vector<Path> cycles;
  std::vector<Path> wheels;
};

// Cycles up to rotation and reversal, wheels up to rotation.  Loops are cycles of length 1.
CyclesAndWheels wheels_and_cycles(const Graph& g);

bool weakly_initial(const Graph& g, int v);
bool weakly_terminal(const Graph& g, int v);
bool extremal(const Graph& g, int v);

// The following require a connected wheel-free graph and throw ClassError otherwise.
std::vector<std::pair<int, int>> closest_neighbors(const Graph& g);  // (tail side, head side)
std::vector<int> almost_isolated(const Graph& g);
Path maximal_extremal_path(const Graph& g);
std::vector<Path> extremal_paths(const Graph& g);

// These require a connected graph.
std::vector<int> deletable_vertices(const Graph& g);
std::vector<int> disconnectable_edges(const Graph& g);

struct LinearBranch {
  std::vector<int> edges;     // from the lower end to the upper end
  std::vector<int> vertices;  // the (1;1) vertices strictly between them
};
// Throws std::invalid_argument when a == b.
std::optional<LinearBranch> linear_branch(const Graph& g, int a, int b);

// (vertex, edge index) for every loop.
std::vector<std::pair<int, int>> loops(const Graph& g);

// Internal edges between two distinct vertices.
std::vector<int> distinct_vertex_edges(const Graph& g);

// Removes v and its flags; flags that were joined to v become legs.
Graph delete_vertex(const Graph& g, int v);
// Splits the internal edge e into an output leg (the old out flag) and an input leg.
Graph disconnect_edge(const Graph& g, int e);

}  // namespace pg
