#pragma once

// Small named graphs shared by the unit and acceptance tests.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pg/gamma.hpp"
#include "pg/graph.hpp"

namespace fx {

using pg::EdgeSpec;
using pg::Graph;
using pg::graph_from_edges;

// Four vertices in a cycle that is not directed.
inline Graph cycle_not_wheel() {
  return graph_from_edges({"v0", "v1", "v2", "v3"},
                          {{"e1", "v0", "v1"}, {"e2", "v2", "v1"}, {"e3", "v2", "v3"}, {"e4", "v3", "v0"}});
}

inline Graph directed_four_cycle() {
  return graph_from_edges({"v0", "v1", "v2", "v3"},
                          {{"e1", "v0", "v1"}, {"e2", "v1", "v2"}, {"e3", "v2", "v3"}, {"e4", "v3", "v0"}});
}

// u -> v, u -> w and two parallel edges v -> w.
inline Graph closest_neighbor_k() {
  return graph_from_edges({"u", "v", "w"},
                          {{"a", "u", "v"}, {"b", "u", "w"}, {"c", "v", "w"}, {"d", "v", "w"}});
}

inline Graph v_shape() { return graph_from_edges({"u", "v", "w"}, {{"a", "u", "v"}, {"b", "u", "w"}}); }

inline Graph diamond() {
  return graph_from_edges({"u", "v", "w", "x"},
                          {{"a", "u", "v"}, {"b", "u", "w"}, {"c", "w", "v"}, {"d", "w", "x"}});
}

// Two vertices joined by two parallel edges e, f from u to v.
inline Graph double_edge() { return graph_from_edges({"u", "v"}, {{"e", "u", "v"}, {"f", "u", "v"}}); }

// Triangle u -> v -> w with u -> w, legs on every vertex.
inline Graph triangle() {
  return graph_from_edges({"u", "v", "w"}, {{"i1", "", "u"},
                                            {"e", "u", "v"},
                                            {"f", "v", "w"},
                                            {"g", "u", "w"},
                                            {"o1", "w", ""}});
}

// Two vertices with an edge a from u to v and a loop b at v.
inline Graph edge_and_loop() {
  return graph_from_edges({"u", "v"}, {{"i", "", "u"}, {"a", "u", "v"}, {"b", "v", "v"}, {"o", "v", ""}});
}

}  // namespace fx

namespace fx {

// Outer graph of the worked substitution example: t feeds v directly (color a) and through u (color b).
inline Graph substitution_outer() {
  return graph_from_edges({"t", "u", "v"}, {{"i", "", "t"},
                                            {"a", "t", "v", "a"},
                                            {"b1", "t", "u", "b"},
                                            {"b2", "u", "v", "b"},
                                            {"o1", "v", ""},
                                            {"o2", "v", ""}});
}

// Three vertices y -> w -> x -> y with outputs of colors a (at y) and b (at x).
inline Graph substitution_ht() {
  return graph_from_edges({"y", "w", "x"}, {{"i", "", "y"},
                                            {"oa", "y", "", "a"},
                                            {"ob", "x", "", "b"},
                                            {"p", "y", "w"},
                                            {"q", "w", "x"},
                                            {"r", "x", "y"}});
}

inline Graph substitution_hv() {
  return graph_from_edges({"z"}, {{"ia", "", "z", "a"}, {"ib", "", "z", "b"}, {"l", "z", "z"}, {"o1", "z", ""}, {"o2", "z", ""}});
}

}  // namespace fx

// Maps between graphical properads written by edge and vertex names.
namespace fx {

using namespace pg;

// Decorated graph from an edge list whose colors are target edge names; labels by vertex.
inline Graph element(const Graph& k, const std::vector<std::pair<std::string, std::string>>& vertices,
                     const std::vector<EdgeSpec>& edges, const std::vector<std::string>& ins = {},
                     const std::vector<std::string>& outs = {}) {
  std::vector<std::string> names;
  for (auto& v : vertices) names.push_back(v.first);
  Graph d = graph_from_edges(names, edges);
  for (std::size_t i = 0; i < vertices.size(); ++i) d.vlabel[i] = vertices[i].second;
  d = normalize_element(d, k);
  if (!ins.empty() || !outs.empty()) d = relist(d, ins, outs);
  return d;
}

inline std::vector<int> f0_by_names(const Graph& s, const Graph& t, const std::map<std::string, std::string>& m) {
  auto ti = edge_index(t);
  std::vector<int> f0;
  for (auto& e : s.edges()) f0.push_back(ti.at(m.at(e.name)));
  return f0;
}

// Corolla of target vertex y listed along the images of source vertex v.
inline Graph corolla_along(const Graph& s, const Graph& t, const std::vector<int>& f0, int v, int y) {
  auto te = t.edges();
  auto eo = s.edge_of_flag();
  std::vector<std::string> ins, outs;
  for (int x : s.vin[v]) ins.push_back(te[f0[eo[x]]].name);
  for (int x : s.vout[v]) outs.push_back(te[f0[eo[x]]].name);
  return relist(corolla_element(t, y), ins, outs);
}

inline Graph h_three_edges() {
  return graph_from_edges({"v", "w"}, {{"e", "v", "w"}, {"f", "v", "w"}, {"g", "v", "w"}});
}

inline Graph sample_corolla() {
  return graph_from_edges({"u"}, {{"i1", "", "u"}, {"i2", "", "u"}, {"o1", "u", ""}, {"o2", "u", ""}});
}

}  // namespace fx
