#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pg {

// Raised by validation; `flag` names the offending flag when there is one.
class GraphError : public std::runtime_error {
 public:
  GraphError(const std::string& what, std::string flag = {})
      : std::runtime_error(flag.empty() ? what : what + " (flag " + flag + ")"),
        flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

// Raised when an operation is called on a graph outside the class it is defined for.
class ClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EdgeKind { Ordinary, Loop, ExceptionalEdge, ExceptionalLoop, Leg };

const char* edge_kind_name(EdgeKind k);

// One orbit of the involutions iota and pi.  `in_flag` is the end with direction +1 and
// `out_flag` the end with direction -1; either may be absent (-1) only for legs.
struct Edge {
  EdgeKind kind = EdgeKind::Leg;
  int in_flag = -1;
  int out_flag = -1;
  int head = -1;  // vertex containing in_flag, -1 if none
  int tail = -1;  // vertex containing out_flag, -1 if none
  std::string name;

  bool internal() const {
    return kind == EdgeKind::Ordinary || kind == EdgeKind::Loop || kind == EdgeKind::ExceptionalLoop;
  }
  bool ordinary() const { return kind == EdgeKind::Ordinary || kind == EdgeKind::Loop; }
};

// A generalized graph.  Flags are indices into the parallel vectors below; cell -1 is the
// exceptional cell.  dir is +1 for flags that are inputs of their cell, -1 for outputs.
struct Graph {
  std::vector<std::string> flag;
  std::vector<int> cell;
  std::vector<int> iota;
  std::vector<int> pi;
  std::vector<std::string> color;
  std::vector<int> dir;

  std::vector<std::string> vname;
  std::vector<std::string> vlabel;  // decoration; empty when undecorated
  std::vector<std::vector<int>> vin, vout;

  std::vector<int> gin, gout;

  int num_flags() const { return static_cast<int>(flag.size()); }
  int num_vertices() const { return static_cast<int>(vname.size()); }
  bool is_leg(int x) const { return iota[x] == x; }
  bool exceptional(int x) const { return cell[x] < 0; }

  int find_flag(const std::string& name) const;    // -1 if missing
  int find_vertex(const std::string& name) const;  // -1 if missing

  std::vector<Edge> edges() const;
  // Edge index of every flag, consistent with edges().
  std::vector<int> edge_of_flag() const;
  int find_edge(const std::string& name) const;  // by Edge::name

  std::vector<std::string> input_colors() const;
  std::vector<std::string> output_colors() const;
  std::vector<std::string> vertex_in_colors(int v) const;
  std::vector<std::string> vertex_out_colors(int v) const;

  bool ordinary() const;  // no exceptional flags
  bool empty() const { return flag.empty() && vname.empty(); }
};

// Throws GraphError describing the first violated axiom.
void validate(const Graph& g);

// Incremental construction with deterministic flag order.
class Builder {
 public:
  int vertex(const std::string& name, const std::string& label = {});
  int in_flag(int v, const std::string& name, const std::string& color = "*");
  int out_flag(int v, const std::string& name, const std::string& color = "*");
  // Join an output flag of one vertex to an input flag of another (or the same) vertex.
  void connect(int out_flag, int in_flag);
  std::pair<int, int> exceptional_edge(const std::string& in_name, const std::string& out_name,
                                       const std::string& color = "*");
  std::pair<int, int> exceptional_loop(const std::string& in_name, const std::string& out_name,
                                       const std::string& color = "*");
  void list_input(int flag) { g_.gin.push_back(flag); }
  void list_output(int flag) { g_.gout.push_back(flag); }
  // Legs not explicitly listed are appended to the graph listing in flag order.
  Graph build();
  Graph& raw() { return g_; }

 private:
  int add_flag(int cell, const std::string& name, const std::string& color, int dir);
  Graph g_;
};

// Standard graphs.  Colors default to the single color "*".
using Colors = std::vector<std::string>;
Colors ones(int n);

Graph empty_graph();
Graph isolated_vertices(int n);
Graph exceptional_edge(const std::string& c = "*");
Graph exceptional_loop(const std::string& c = "*");
Graph corolla(const Colors& ins, const Colors& outs);
Graph corolla(int m, int n);
// sigma permutes outputs, tau permutes inputs; the k-th input is relisted at tau[k].
Graph permuted_corolla(const Colors& ins, const Colors& outs, const std::vector<int>& sigma,
                       const std::vector<int>& tau);
// Output i glued to input j (0-based); requires outs[i] == ins[j].
Graph contracted_corolla(const Colors& ins, const Colors& outs, int i, int j);
// Bottom vertex u and top vertex v; glue lists pairs (output index of u, input index of v).
Graph partially_grafted(const Colors& u_ins, const Colors& u_outs, const Colors& v_ins,
                        const Colors& v_outs, const std::vector<std::pair<int, int>>& glue);
// Output i of the bottom corolla grafted to input j of the top corolla.
Graph dioperadic(const Colors& u_ins, const Colors& u_outs, const Colors& v_ins,
                 const Colors& v_outs, int i, int j);
// n vertices in a line; colors has n+1 entries (or is empty for 1-colored).
Graph linear(int n, const Colors& colors = {});

// Compact description of an ordinary graph.  An empty tail makes an input leg and an empty head
// an output leg.  Internal edge x gets flags x (input side) and x' (output side); vertex listings
// and the graph listing follow the order of `edges`.
struct EdgeSpec {
  std::string name;
  std::string tail;
  std::string head;
  std::string color = "*";
};
Graph graph_from_edges(const std::vector<std::string>& vertices, const std::vector<EdgeSpec>& edges);

// sigma acts on outputs, tau on inputs, as in permuted_corolla.
Graph relabel(const Graph& g, const std::vector<int>& sigma, const std::vector<int>& tau);

// Canonical text keys.  strict keeps listings; the listing-free key forgets them.
std::string canon_strict(const Graph& g);
std::string canon_free(const Graph& g);

std::optional<std::vector<int>> strict_iso(const Graph& a, const Graph& b);
std::optional<std::vector<int>> iso_up_to_listing(const Graph& a, const Graph& b);
// Every listing-free isomorphism, as flag bijections a -> b.
std::vector<std::vector<int>> all_isos_up_to_listing(const Graph& a, const Graph& b,
                                                     std::size_t limit = 100000);

// Text format.
std::string print_graph(const Graph& g);
Graph parse_graph(const std::string& text);
// Parses a graph block starting at lines[pos] ("graph" ... "end"); advances pos.
Graph parse_graph_lines(const std::vector<std::string>& lines, std::size_t& pos);
std::string to_dot(const Graph& g);

// Small helpers shared across modules.
std::vector<std::string> split_ws(const std::string& s);
std::string join(const std::vector<std::string>& v, const std::string& sep);
std::vector<int> inverse_perm(const std::vector<int>& p);
bool is_permutation(const std::vector<int>& p, int n);

}  // namespace pg
